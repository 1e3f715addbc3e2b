"""Coupled trigonometric chaotic maps and the slope stream they drive.

The two maps are

    f1(x, a, N) = (1/a^2) * tan^2(N * arctan(sqrt(x)))
    f2(x, a, N) = (1/a^2) * cot^2(N * arctan(x^(-1/2)))

coupled as x_{n+1} = (1 - eps) * f1(x_n) + eps * f2(x_n).  Iterates live in
[0, inf); they are folded to slope values lambda in [-2, 2) via
lambda = 4 * frac(x) - 2.

All arithmetic is IEEE binary64; sequences are reproducible bit-for-bit for
fixed parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ChaosParams",
    "LambdaStream",
    "PoleError",
    "StreamDegeneracyError",
    "f1",
    "f2",
    "step_coupled",
]

# How close (in radians) an angle may come to a tan/cot pole before the
# evaluation is rejected.  Poles are measure zero; callers re-seed or perturb.
POLE_TOL = 1e-9

DEFAULT_BURN_IN = 64

_HALF_PI = math.pi / 2.0


class PoleError(ArithmeticError):
    """The map argument landed within POLE_TOL of a tan/cot pole."""


class StreamDegeneracyError(RuntimeError):
    """A LambdaStream hit a pole twice in a row even after perturbation."""


@dataclass(frozen=True)
class ChaosParams:
    """Control parameters of the coupled map: seed, degrees, scales, coupling."""

    x0: float
    n1: int
    n2: int
    a1: float
    a2: float
    eps: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x0) and self.x0 > 0):
            raise ValueError(f"x0 must be finite and positive, got {self.x0}")
        for name, n in (("N1", self.n1), ("N2", self.n2)):
            if not isinstance(n, int) or n < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {n}")
        for name, a in (("a1", self.a1), ("a2", self.a2)):
            if not (math.isfinite(a) and a > 0):
                raise ValueError(f"{name} must be finite and positive, got {a}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")


def f1(x: float, a: float, n: int) -> float:
    """First trigonometric map: (1/a^2) tan^2(N arctan(sqrt(x)))."""
    if not (math.isfinite(x) and x >= 0.0):
        raise ValueError(f"f1 requires finite x >= 0, got {x}")
    theta = n * math.atan(math.sqrt(x))
    # tan poles sit at odd multiples of pi/2.
    r = math.fmod(abs(theta), math.pi)
    if abs(r - _HALF_PI) < POLE_TOL:
        raise PoleError(f"tan pole near theta={theta}")
    t = math.tan(theta)
    out = (t * t) / (a * a)
    if not math.isfinite(out):
        raise PoleError(f"f1 overflow at theta={theta}")
    return out


def f2(x: float, a: float, n: int) -> float:
    """Second trigonometric map: (1/a^2) cot^2(N arctan(x^(-1/2)))."""
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"f2 requires finite x > 0, got {x}")
    theta = n * math.atan(1.0 / math.sqrt(x))
    # cot poles sit at integer multiples of pi.
    r = math.fmod(abs(theta), math.pi)
    if min(r, math.pi - r) < POLE_TOL:
        raise PoleError(f"cot pole near theta={theta}")
    t = math.tan(theta)
    out = 1.0 / (t * t * a * a)
    if not math.isfinite(out):
        raise PoleError(f"f2 overflow at theta={theta}")
    return out


def step_coupled(x: float, p: ChaosParams) -> float:
    """One iterate of the symmetrically coupled map."""
    return (1.0 - p.eps) * f1(x, p.a1, p.n1) + p.eps * f2(x, p.a2, p.n2)


class LambdaStream:
    """Stateful producer of slope values from the coupled map orbit.

    Single-owner mutable state: not safe for concurrent stepping.  Iterating
    the stream yields lambda values; ``step`` exposes the raw iterate for
    callers that need it (e.g. keystream byte generation).
    """

    def __init__(self, params: ChaosParams, burn_in: int = DEFAULT_BURN_IN):
        if burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {burn_in}")
        self.params = params
        self.burn_in = burn_in
        self.state = params.x0
        for _ in range(burn_in):
            self.step()

    def step(self) -> float:
        """Advance the orbit one iterate and return the new state.

        A pole (or a state that fell to exactly zero) is retried once after
        perturbing the state by 1e-6; a second consecutive failure aborts.
        """
        x = self.state
        for attempt in range(2):
            try:
                if x <= 0.0:
                    raise PoleError(f"degenerate state {x}")
                nxt = step_coupled(x, self.params)
            except PoleError:
                x += 1e-6
                continue
            self.state = nxt
            return nxt
        raise StreamDegeneracyError(
            f"orbit degenerate near x={self.state} (pole after perturbation)"
        )

    def next_lambda(self) -> float:
        """Advance one step and fold the iterate into lambda in [-2, 2)."""
        x = self.step()
        return 4.0 * (x - math.floor(x)) - 2.0

    def __iter__(self) -> "LambdaStream":
        return self

    def __next__(self) -> float:
        return self.next_lambda()
