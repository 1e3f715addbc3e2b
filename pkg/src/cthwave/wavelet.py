"""Classic and sloped Haar wavelets, transform matrices, 2-D sub-band coding.

The sloped variant replaces the flat scaling step by a line of slope
lambda in [-2, 2], which makes the scaling coefficients

    p0 = lambda^2/24 - lambda/4 + 1
    p1 = lambda^2/24 + lambda/4 + 1

key-dependent.  Single-level transform matrices pair each row with two such
coefficients drawn from a lambda stream; multilevel behaviour comes from
recursive application to the LL quadrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "SlopedCoeffs",
    "HaarMatrix",
    "SubBands",
    "SingularMatrixError",
    "sloped_coeffs",
    "phi",
    "psi",
    "project_1d",
    "classic_haar_matrix",
    "build_level_matrix",
    "forward_2d",
    "inverse_2d",
    "split_subbands",
    "merge_subbands",
    "decompose",
    "reconstruct",
]

# Determinant magnitude below which a constructed matrix is rejected.
DET_GATE = 1e-9

# Redraw attempts before build_level_matrix gives up.
MAX_REDRAWS = 8

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class SingularMatrixError(RuntimeError):
    """A transform matrix failed the determinant gate or a solve failed."""


@dataclass(frozen=True)
class SlopedCoeffs:
    """Scaling coefficients (p0, p1) attached to one slope value."""

    lam: float
    p0: float
    p1: float


def sloped_coeffs(lam: float) -> SlopedCoeffs:
    """Scaling coefficients of the sloped scaling function.

    Both quadratics are strictly positive on [-2, 2], so p0, p1 > 0.
    """
    if not -2.0 <= lam <= 2.0:
        raise ValueError(f"lambda must lie in [-2, 2], got {lam}")
    q = lam * lam / 24.0 + 1.0
    return SlopedCoeffs(lam, q - lam / 4.0, q + lam / 4.0)


def phi(x, lam: float):
    """Sloped scaling function: lam*(x - 1/2) + 1 on [0, 1), 0 elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = (x >= 0.0) & (x < 1.0)
    val = lam * (x - 0.5) + 1.0
    out = np.where(inside, val, 0.0)
    return out if out.ndim else float(out)


def psi(x, lam: float):
    """Sloped Haar wavelet, piecewise linear on [0, 1/2) and [1/2, 1)."""
    x = np.asarray(x, dtype=float)
    c = sloped_coeffs(lam)
    left = c.p1 * (2.0 * lam * x - lam / 2.0 + 1.0)
    right = -c.p0 * (2.0 * lam * x - 3.0 * lam / 2.0 + 1.0)
    out = np.where(
        (x >= 0.0) & (x < 0.5),
        left,
        np.where((x >= 0.5) & (x < 1.0), right, 0.0),
    )
    return out if out.ndim else float(out)


def project_1d(samples: Sequence[float], level: int, lam: float) -> np.ndarray:
    """Scaling coefficients c_{m,k} of a uniformly sampled signal on [0, L).

    The signal is assumed sampled at x_i = i * L / len(samples); L is taken
    as 1 so that level m produces 2^m coefficients.  Each coefficient is the
    trapezoidal quadrature of f(x) * phi(2^m x - k, lam) over the dyadic
    interval [k 2^-m, (k+1) 2^-m); phi carries unnormalized amplitude, so a
    constant signal of 1 yields coefficients 2^-m at lam = 0.
    """
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1 or y.size < 2:
        raise ValueError("samples must be a 1-D sequence of length >= 2")
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    n = y.size
    x = np.arange(n) / n
    n_coef = 2**level
    coeffs = np.empty(n_coef)
    for k in range(n_coef):
        a, b = k / n_coef, (k + 1) / n_coef
        mask = (x >= a) & (x < b)
        if mask.sum() < 2:
            raise ValueError(
                f"fewer than 2 samples in dyadic interval [{a}, {b}) "
                f"at level {level}"
            )
        xs = x[mask]
        # Close the interval on the right with the next sample (limit from
        # inside the interval: evaluate phi by its linear expression).
        if b <= x[-1]:
            idx = np.flatnonzero(mask)
            xs = np.append(xs, b)
            ys = np.append(y[mask], np.interp(b, x, y))
        else:
            ys = y[mask]
        u = 2**level * xs - k
        integrand = ys * (lam * (u - 0.5) + 1.0)
        coeffs[k] = np.trapezoid(integrand, xs)
    return coeffs


@dataclass(frozen=True)
class HaarMatrix:
    """Dense transform matrix with its normalization convention recorded."""

    entries: np.ndarray
    normalized: bool

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        if m.shape[0] % 2 or m.shape[0] < 2:
            raise ValueError(f"dimension must be even and >= 2, got {m.shape[0]}")
        _sign, logdet = np.linalg.slogdet(m)
        if not (math.isfinite(logdet) and logdet > math.log(DET_GATE)):
            raise SingularMatrixError(
                f"|det| <= {DET_GATE} for {m.shape[0]}x{m.shape[0]} matrix"
            )
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def classic_haar_matrix(n: int) -> HaarMatrix:
    """Standard orthonormal Haar transform matrix.

    Built by the Kronecker recursion H_{2m} = (1/sqrt 2) [H_m (x) (1, 1);
    I_m (x) (1, -1)]; for n = 4 this is exactly the textbook matrix with
    rows (1/2, 1/2, 1/2, 1/2), (1/2, 1/2, -1/2, -1/2), (1/sqrt2, -1/sqrt2,
    0, 0), (0, 0, 1/sqrt2, -1/sqrt2).
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    return HaarMatrix(_classic_entries(n), normalized=True)


def _classic_entries(n: int) -> np.ndarray:
    if n % 2:
        return np.eye(n)
    top = np.kron(_classic_entries(n // 2), [1.0, 1.0])
    bottom = np.kron(np.eye(n // 2), [1.0, -1.0])
    return _INV_SQRT2 * np.vstack([top, bottom])


def build_level_matrix(
    n: int, lambdas: Iterator[float], normalized: bool = False
) -> HaarMatrix:
    """Single-stage n x n sloped-Haar butterfly from a slope source.

    Row r in [0, n/2) averages columns 2r, 2r+1 with weights p~0, p~1; row
    n/2 + r differences them with weights p~1, -p~0.  Slopes are consumed in
    a fixed order that is part of the key contract: averaging rows top to
    bottom (p~0 slot first), then differencing rows top to bottom (p~1 slot
    first).  p~ = p / sqrt(2) when normalized, p~ = p when raw.  A matrix
    failing the determinant gate is discarded and redrawn.
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    half = n // 2
    scale = _INV_SQRT2 if normalized else 1.0
    for _attempt in range(1 + MAX_REDRAWS):
        m = np.zeros((n, n))
        for r in range(half):
            left = sloped_coeffs(next(lambdas))
            right = sloped_coeffs(next(lambdas))
            m[r, 2 * r] = scale * left.p0
            m[r, 2 * r + 1] = scale * right.p1
        for r in range(half):
            left = sloped_coeffs(next(lambdas))
            right = sloped_coeffs(next(lambdas))
            m[half + r, 2 * r] = scale * left.p1
            m[half + r, 2 * r + 1] = -scale * right.p0
        try:
            return HaarMatrix(m, normalized=normalized)
        except SingularMatrixError:
            continue
    raise SingularMatrixError(
        f"no invertible {n}x{n} matrix after {MAX_REDRAWS} redraws"
    )


def forward_2d(m: np.ndarray, h: HaarMatrix) -> np.ndarray:
    """Two-dimensional transform F = H M H^T."""
    m = np.asarray(m, dtype=float)
    if m.shape != (h.n, h.n):
        raise ValueError(f"matrix shape {m.shape} does not match n={h.n}")
    return h.entries @ m @ h.entries.T


def inverse_2d(f: np.ndarray, h: HaarMatrix) -> np.ndarray:
    """Inverse transform M = H^-1 F H^-T via linear solves."""
    f = np.asarray(f, dtype=float)
    if f.shape != (h.n, h.n):
        raise ValueError(f"matrix shape {f.shape} does not match n={h.n}")
    try:
        y = np.linalg.solve(h.entries, f)
        return np.linalg.solve(h.entries, y.T).T
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc


@dataclass
class SubBands:
    """One-level quadrant decomposition (approximation plus three details)."""

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray
    level: int = 1

    def __post_init__(self) -> None:
        shapes = {b.shape for b in (self.ll, self.lh, self.hl, self.hh)}
        if len(shapes) != 1:
            raise ValueError(f"quadrants must share one shape, got {shapes}")


def split_subbands(f: np.ndarray, level: int = 1) -> SubBands:
    """Split a transformed matrix into LL / HL / LH / HH quadrants."""
    f = np.asarray(f, dtype=float)
    if f.ndim != 2 or f.shape[0] != f.shape[1] or f.shape[0] % 2:
        raise ValueError(f"expected an even square matrix, got shape {f.shape}")
    h = f.shape[0] // 2
    return SubBands(
        ll=f[:h, :h].copy(),
        hl=f[:h, h:].copy(),
        lh=f[h:, :h].copy(),
        hh=f[h:, h:].copy(),
        level=level,
    )


def merge_subbands(sb: SubBands) -> np.ndarray:
    """Exact inverse placement of split_subbands."""
    return np.block([[sb.ll, sb.hl], [sb.lh, sb.hh]])


def decompose(
    image: np.ndarray,
    levels: int,
    streams: Sequence[Iterator[float]],
    normalized: bool = False,
) -> list[SubBands]:
    """Multilevel sub-band decomposition with one fresh matrix per level.

    Level 1 transforms the full image; each deeper level transforms the
    previous LL quadrant with a matrix built from that level's stream.
    Returns one SubBands per level; entry k's ll holds the approximation at
    that level before any deeper decomposition (the deepest entry's ll is
    the final approximation).
    """
    image = np.asarray(image, dtype=float)
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if len(streams) < levels:
        raise ValueError(f"need {levels} streams, got {len(streams)}")
    n = image.shape[0]
    if image.shape != (n, n) or n % (2**levels):
        raise ValueError(
            f"image shape {image.shape} not divisible into {levels} levels"
        )
    tree: list[SubBands] = []
    current = image
    for lvl in range(1, levels + 1):
        h = build_level_matrix(current.shape[0], streams[lvl - 1], normalized)
        bands = split_subbands(forward_2d(current, h), level=lvl)
        tree.append(bands)
        current = bands.ll
    return tree


def reconstruct(
    tree: Sequence[SubBands],
    streams: Sequence[Iterator[float]],
    normalized: bool = False,
) -> np.ndarray:
    """Invert decompose, deepest level first.

    Streams must replay the same slope material used for decomposition (same
    parameters and burn-in per level); matrices are rebuilt from them.  For
    every level above the deepest, the stored ll is ignored in favour of the
    approximation reconstructed from below.
    """
    if not tree:
        raise ValueError("empty decomposition tree")
    levels = len(tree)
    if len(streams) < levels:
        raise ValueError(f"need {levels} streams, got {len(streams)}")
    matrices = [
        build_level_matrix(2 * tree[k].lh.shape[0], streams[k], normalized)
        for k in range(levels)
    ]
    current = tree[-1].ll
    for k in range(levels - 1, -1, -1):
        bands = tree[k]
        merged = merge_subbands(
            SubBands(ll=current, lh=bands.lh, hl=bands.hl, hh=bands.hh,
                     level=bands.level)
        )
        current = inverse_2d(merged, matrices[k])
    return current
