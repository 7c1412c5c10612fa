"""Edge-aware guide image generation from raw MPFA data.

The guide is built in four steps, all computed by filtering the raw mosaic:

1. For each compass direction, estimate the per-pixel intensity (half the
   total intensity) from the one-sided 3x3 neighborhood on that side. Each
   estimate averages two independent reconstructions, one from each
   orthogonal angle pair, and gives equal total weight to all four pattern
   phases, so it is exact wherever the scene is locally constant.
2. Take the difference of those two reconstructions. It vanishes where the
   one-sided region is free of intensity and polarization edges, so its
   magnitude is directional edge evidence.
3. Smooth the absolute difference over a 5x5 region biased toward the same
   side, and turn it into a weight by reciprocation.
4. Fuse the four directional estimates by pixel-wise weighted averaging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imgcore import as_plane, convolve

DIRECTIONS = ("n", "e", "w", "s")

# One-sided intensity estimators; each sums to 1 and weights every 2x2
# pattern phase by exactly 1/4.
ESTIMATE_KERNELS = {
    "n": np.array([[1, 2, 1], [1, 2, 1], [0, 0, 0]], dtype=np.float64) / 8.0,
    "e": np.array([[0, 1, 1], [0, 2, 2], [0, 1, 1]], dtype=np.float64) / 8.0,
    "w": np.array([[1, 1, 0], [2, 2, 0], [1, 1, 0]], dtype=np.float64) / 8.0,
    "s": np.array([[0, 0, 0], [1, 2, 1], [1, 2, 1]], dtype=np.float64) / 8.0,
}

# Differences of the two one-sided reconstructions (zero-sum; opposite
# directions are mirror images of each other).
DIFFERENCE_KERNELS = {
    "n": np.array([[-1, 2, -1], [1, -2, 1], [0, 0, 0]], dtype=np.float64) / 2.0,
    "e": np.array([[0, 1, -1], [0, -2, 2], [0, 1, -1]], dtype=np.float64) / 2.0,
    "w": np.array([[-1, 1, 0], [2, -2, 0], [-1, 1, 0]], dtype=np.float64) / 2.0,
    "s": np.array([[0, 0, 0], [1, -2, 1], [-1, 2, -1]], dtype=np.float64) / 2.0,
}

SMOOTHING_MODES = ("onesided", "full")

# Row/column spans (inclusive offsets) covered by the one-sided 5x5
# smoothing window: the half toward the direction plus the center line.
_ONESIDED_SPAN = {"n": (-2, 0), "s": (0, 2), "w": (-2, 0), "e": (0, 2)}


def smoothing_kernel(direction: str, mode: str = "onesided") -> np.ndarray:
    """5x5 normalized smoothing kernel for the given direction."""
    if mode not in SMOOTHING_MODES:
        raise ValueError(f"smoothing mode must be one of {SMOOTHING_MODES}, got {mode!r}")
    taps = np.zeros((5, 5), dtype=np.float64)
    if mode == "full":
        taps[:] = 1.0
    else:
        lo, hi = _ONESIDED_SPAN[direction]
        if direction in ("n", "s"):
            taps[lo + 2 : hi + 3, :] = 1.0
        else:
            taps[:, lo + 2 : hi + 3] = 1.0
    return taps / taps.sum()


@dataclass(frozen=True)
class EariParams:
    """Guide-generation parameters."""

    epsilon: float = 1e-32
    smoothing: str = "onesided"

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.smoothing not in SMOOTHING_MODES:
            raise ValueError(f"smoothing must be one of {SMOOTHING_MODES}, got {self.smoothing!r}")


def directional_estimates(raw) -> dict[str, np.ndarray]:
    """One-sided intensity estimates for all four directions."""
    arr = as_plane(raw)
    return {k: convolve(arr, ESTIMATE_KERNELS[k]) for k in DIRECTIONS}


def directional_differences(raw) -> dict[str, np.ndarray]:
    """Directional reconstruction differences (edge evidence) for all directions."""
    arr = as_plane(raw)
    return {k: convolve(arr, DIFFERENCE_KERNELS[k]) for k in DIRECTIONS}


def smooth_abs_differences(delta: np.ndarray, direction: str, params: EariParams = EariParams()) -> np.ndarray:
    """Directionally smoothed magnitude of the reconstruction difference."""
    return convolve(np.abs(delta), smoothing_kernel(direction, params.smoothing))


def directional_weights(delta_smooth: np.ndarray, params: EariParams = EariParams()) -> np.ndarray:
    """Reciprocal edge penalty; large where the direction is edge-free."""
    return 1.0 / (delta_smooth + params.epsilon)


def fuse_estimates(estimates: dict[str, np.ndarray], weights: dict[str, np.ndarray]) -> np.ndarray:
    """Pixel-wise weighted average of the directional estimates."""
    num = np.zeros_like(estimates["n"])
    den = np.zeros_like(estimates["n"])
    for k in DIRECTIONS:
        num += weights[k] * estimates[k]
        den += weights[k]
    return num / den


def guide_image(raw, params: EariParams = EariParams()) -> np.ndarray:
    """Edge-aware guide image from a raw MPFA mosaic."""
    estimates = directional_estimates(raw)
    differences = directional_differences(raw)
    weights = {
        k: directional_weights(smooth_abs_differences(differences[k], k, params), params)
        for k in DIRECTIONS
    }
    return fuse_estimates(estimates, weights)
