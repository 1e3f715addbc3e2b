import numpy as np
import pytest

from cthwave.chaos import ChaosParams
from cthwave.cipher import KeySchedule

# Twelve published slope values of the 4x4 worked example, in slot order
# (H1 averaging rows, H1 differencing rows, H2 averaging row, H2
# differencing row; two draws per row).
REFERENCE_LAMBDAS = [
    1.469, -0.351, -0.075, 0.027,
    -0.070, 0.033, -0.028, 0.156,
    0.674, 0.147, 0.570, 0.834,
]

# Printed entries of the worked 4x4 chaotic transform matrix.
REFERENCE_MATRIX = np.array(
    [
        [0.614, 0.780, 1.057, 1.044],
        [0.835, 1.061, -0.836, -0.826],
        [0.983, -0.992, 0.0, 0.0],
        [0.0, 0.0, 0.993, -0.962],
    ]
)

# Published worked-example control parameters.
REFERENCE_PARAMS = ChaosParams(x0=0.2, n1=3, n2=4, a1=2.0, a2=2.5, eps=0.4)


def random_chaos_params(rng: np.random.Generator) -> ChaosParams:
    return ChaosParams(
        x0=float(rng.uniform(0.05, 3.0)),
        n1=int(rng.integers(2, 6)),
        n2=int(rng.integers(2, 6)),
        a1=float(rng.uniform(0.5, 3.0)),
        a2=float(rng.uniform(0.5, 3.0)),
        eps=float(rng.uniform(0.05, 0.95)),
    )


def random_key_schedule(rng: np.random.Generator, **kwargs) -> KeySchedule:
    return KeySchedule(
        stages=tuple(random_chaos_params(rng) for _ in range(4)), **kwargs
    )


@pytest.fixture
def default_keystream_key() -> KeySchedule:
    stages = tuple(
        ChaosParams(x0=x0, n1=3, n2=4, a1=2.0, a2=2.5, eps=0.4)
        for x0 in (0.2, 0.31, 0.47, 0.59)
    )
    return KeySchedule(stages=stages, mode="keystream")


@pytest.fixture
def default_literal_key(default_keystream_key) -> KeySchedule:
    from dataclasses import replace

    return replace(default_keystream_key, mode="literal")
