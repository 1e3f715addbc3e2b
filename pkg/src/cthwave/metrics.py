"""Statistical audit battery: histogram, entropy, correlation, NPCR, UACI,
key-space sizing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "MetricsReport",
    "ZeroVarianceError",
    "histogram",
    "mean_intensity",
    "entropy_normalized",
    "correlation_adjacent",
    "npcr",
    "uaci",
    "key_space_bits",
    "analyze_image",
]

DIRECTIONS = {
    "horizontal": (0, 1),
    "vertical": (1, 0),
    "diagonal": (1, 1),
}

DEFAULT_PAIRS = 2000


class ZeroVarianceError(ArithmeticError):
    """A correlation marginal is constant, so the coefficient is undefined."""


@dataclass(frozen=True)
class MetricsReport:
    """Summary of the audit battery for one image (or image pair)."""

    histogram: np.ndarray
    mean_intensity: float
    entropy_normalized: float
    corr_horizontal: Optional[float]
    corr_vertical: Optional[float]
    corr_diagonal: Optional[float]
    npcr_percent: Optional[float] = None
    uaci_percent: Optional[float] = None
    key_space_bits: Optional[float] = None


def _as_bytes(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.dtype != np.uint8:
        raise ValueError(f"expected a uint8 image, got dtype {img.dtype}")
    return img


def histogram(img: np.ndarray) -> np.ndarray:
    """Counts per grey level, 256 bins."""
    return np.bincount(_as_bytes(img).ravel(), minlength=256)


def mean_intensity(img: np.ndarray) -> float:
    """Arithmetic mean of all pixels."""
    return float(np.mean(_as_bytes(img), dtype=np.float64))


def entropy_normalized(img: np.ndarray, levels: int = 256) -> float:
    """Shannon entropy of the grey-level histogram over log2(levels).

    Empty bins contribute zero (the x log(1/x) -> 0 limit).
    """
    counts = np.bincount(_as_bytes(img).ravel(), minlength=levels)
    n = counts.sum()
    if n == 0:
        raise ValueError("empty image")
    p = counts[counts > 0] / n
    return float(-(p * np.log2(p)).sum() / math.log2(levels))


def correlation_adjacent(
    img: np.ndarray,
    direction: str,
    n_pairs: int = DEFAULT_PAIRS,
    seed: int = 0,
) -> float:
    """Correlation coefficient of randomly sampled adjacent pixel pairs.

    Anchors are drawn uniformly with replacement over all positions with a
    valid neighbour; diagonal means the (+1, +1) offset.  Uses population
    (1/N) variance and covariance estimators.
    """
    img = _as_bytes(img)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {sorted(DIRECTIONS)}")
    dr, dc = DIRECTIONS[direction]
    h, w = img.shape
    if h - dr < 1 or w - dc < 1:
        raise ValueError("image too small to supply adjacent pairs")
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, h - dr, size=n_pairs)
    cols = rng.integers(0, w - dc, size=n_pairs)
    x = img[rows, cols].astype(np.float64)
    y = img[rows + dr, cols + dc].astype(np.float64)
    ex, ey = x.mean(), y.mean()
    dx, dy = x - ex, y - ey
    vx, vy = (dx * dx).mean(), (dy * dy).mean()
    if vx == 0.0 or vy == 0.0:
        raise ZeroVarianceError(
            f"{direction} marginal is constant; correlation undefined"
        )
    return float((dx * dy).mean() / math.sqrt(vx * vy))


def npcr(c1: np.ndarray, c2: np.ndarray) -> float:
    """Number-of-pixels change rate between two images, in percent."""
    c1, c2 = _as_bytes(c1), _as_bytes(c2)
    if c1.shape != c2.shape:
        raise ValueError(f"shape mismatch: {c1.shape} vs {c2.shape}")
    return float(np.count_nonzero(c1 != c2) / c1.size * 100.0)


def uaci(c1: np.ndarray, c2: np.ndarray) -> float:
    """Unified average changing intensity, in percent.

    Uses the absolute pixel difference scaled by 255.
    """
    c1, c2 = _as_bytes(c1), _as_bytes(c2)
    if c1.shape != c2.shape:
        raise ValueError(f"shape mismatch: {c1.shape} vs {c2.shape}")
    diff = np.abs(c1.astype(np.int16) - c2.astype(np.int16))
    return float(diff.mean(dtype=np.float64) / 255.0 * 100.0)


def key_space_bits(precision: float, n_param_instances: int) -> float:
    """Brute-force resistance in bits for parameters known to a precision.

    Each of the n_param_instances real parameters contributes
    log2(1/precision) distinguishable values.
    """
    if not 0.0 < precision < 1.0:
        raise ValueError(f"precision must lie in (0, 1), got {precision}")
    if n_param_instances < 1:
        raise ValueError("need at least one parameter instance")
    return n_param_instances * math.log2(1.0 / precision)


def analyze_image(
    img: np.ndarray, n_pairs: int = DEFAULT_PAIRS, seed: int = 0
) -> MetricsReport:
    """Run the single-image battery; undefined correlations become None."""
    corrs = {}
    for direction in DIRECTIONS:
        try:
            corrs[direction] = correlation_adjacent(img, direction, n_pairs, seed)
        except ZeroVarianceError:
            corrs[direction] = None
    return MetricsReport(
        histogram=histogram(img),
        mean_intensity=mean_intensity(img),
        entropy_normalized=entropy_normalized(img),
        corr_horizontal=corrs["horizontal"],
        corr_vertical=corrs["vertical"],
        corr_diagonal=corrs["diagonal"],
    )
