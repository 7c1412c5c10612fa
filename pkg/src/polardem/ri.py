"""Residual interpolation of sparse orientation samples against a guide.

Each polarization orientation covers one quarter of the sensor. A guided
filter regresses those sparse samples onto the guide image to get a dense
tentative estimate, the sample-minus-tentative residuals are interpolated
bilinearly from the sample lattice, and the sum restores the measured
values exactly at their own pixels while inheriting the guide's edges
everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

from .eari import EariParams, guide_image
from .errors import DimensionMismatch, EmptyMask
from .imgcore import as_plane, convolve
from .lattice import bilinear_from_mask
from .mosaic import ANGLES, MpfaPattern, PolarizationStack


@dataclass(frozen=True)
class GuidedFilterParams:
    """Window radius and regularization for the guided filter."""

    radius: int = 2
    eps: float = 1e-4

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")


@dataclass(eq=False)
class SparsePlane:
    """A plane paired with the mask of pixels that actually carry samples."""

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        self.values = as_plane(self.values)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != self.values.shape:
            raise DimensionMismatch(
                f"mask shape {self.mask.shape} != values shape {self.values.shape}"
            )


def _box_sum(arr: np.ndarray, radius: int) -> np.ndarray:
    """Sliding-window sum; pixels outside the image count as zero."""
    size = 2 * radius + 1
    return cv2.boxFilter(arr, -1, (size, size), normalize=False, borderType=cv2.BORDER_CONSTANT)


def guided_filter(
    p,
    guide,
    params: GuidedFilterParams = GuidedFilterParams(),
    mask=None,
) -> np.ndarray:
    """Edge-preserving transfer of ``p`` onto the structure of ``guide``.

    In every (2*radius+1)^2 window a linear model q = a*guide + b is fitted
    to ``p``; the per-pixel output averages the models of all windows
    covering the pixel. With a mask, window statistics use masked-in pixels
    only: windows seeing a single sample degrade to that value (a = 0) and
    windows seeing none fall back to the global mean of the valid samples.
    """
    pv = as_plane(p)
    g = as_plane(guide)
    if pv.shape != g.shape:
        raise DimensionMismatch(f"input shape {pv.shape} != guide shape {g.shape}")
    rad = params.radius

    if mask is None:
        m = np.ones_like(pv)
        pm = pv
    else:
        m = np.asarray(mask, dtype=np.float64)
        if m.shape != pv.shape:
            raise DimensionMismatch(f"mask shape {m.shape} != input shape {pv.shape}")
        if not m.any():
            raise EmptyMask("guided filter needs at least one valid sample")
        pm = pv * m

    gm = g * m
    n = _box_sum(m, rad)
    n_safe = np.maximum(n, 1.0)
    mean_p = _box_sum(pm, rad) / n_safe
    mean_g = _box_sum(gm, rad) / n_safe
    var_g = np.maximum(_box_sum(g * gm, rad) / n_safe - mean_g * mean_g, 0.0)
    cov_gp = _box_sum(g * pm, rad) / n_safe - mean_g * mean_p

    denom = var_g + params.eps
    a = np.divide(cov_gp, denom, out=np.zeros_like(pv), where=(denom > 0) & (n >= 2))
    b = mean_p - a * mean_g
    b[n < 1] = pm.sum() / m.sum()

    ones = _box_sum(np.ones_like(pv), rad)
    a_bar = _box_sum(a, rad) / ones
    b_bar = _box_sum(b, rad) / ones
    return a_bar * g + b_bar


def residual_interpolate(
    sparse: SparsePlane,
    guide,
    params: GuidedFilterParams = GuidedFilterParams(),
) -> np.ndarray:
    """Densify a sparse plane: guided-filter tentative plus interpolated residual."""
    if not sparse.mask.any():
        raise EmptyMask("sparse plane has no samples")
    tentative = guided_filter(sparse.values, guide, params, mask=sparse.mask)
    residual = sparse.values - tentative
    return tentative + bilinear_from_mask(residual, sparse.mask)


def box_guide(raw) -> np.ndarray:
    """Non-edge-aware guide: plain 3x3 average of the raw mosaic."""
    return convolve(as_plane(raw), np.full((3, 3), 1.0 / 9.0))


def demosaick_mpfa_ri(
    raw,
    pattern: MpfaPattern,
    guide,
    gf_params: GuidedFilterParams = GuidedFilterParams(),
) -> PolarizationStack:
    """Residual-interpolate all four orientations against an explicit guide."""
    arr = as_plane(raw)
    g = as_plane(guide)
    planes = {}
    for angle in ANGLES:
        sparse = SparsePlane(arr, pattern.angle_mask(angle, arr.shape))
        planes[angle] = residual_interpolate(sparse, g, gf_params)
    return PolarizationStack.from_planes(planes)


def demosaick_mpfa_eari(
    raw,
    pattern: MpfaPattern = MpfaPattern(),
    eari_params: EariParams = EariParams(),
    gf_params: GuidedFilterParams = GuidedFilterParams(),
) -> PolarizationStack:
    """Full MPFA demosaick with the edge-aware guide."""
    arr = as_plane(raw)
    return demosaick_mpfa_ri(arr, pattern, guide_image(arr, eari_params), gf_params)


def demosaick_mpfa_ri_box(
    raw,
    pattern: MpfaPattern = MpfaPattern(),
    gf_params: GuidedFilterParams = GuidedFilterParams(),
) -> PolarizationStack:
    """MPFA demosaick with the non-edge-aware box guide (comparison method)."""
    arr = as_plane(raw)
    return demosaick_mpfa_ri(arr, pattern, box_guide(arr), gf_params)
