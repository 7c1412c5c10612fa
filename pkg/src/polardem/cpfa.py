"""Color PFA demosaicking: Bayer decomposition, color demosaick, regroup, EARI.

The raw quad-Bayer mosaic splits losslessly into four half-resolution Bayer
mosaics, one per polarizer angle (every 2x2 same-color block holds all four
angles at fixed positions). After color demosaicking each of those, the
per-channel values scatter back to their source sensor sites, which yields
one dense full-resolution MPFA mosaic per color channel to finish with the
polarization demosaicker.
"""

from __future__ import annotations

import numpy as np

from .baselines import BayerPattern, demosaick_bayer
from .eari import EariParams
from .errors import DimensionMismatch, OddDimensions
from .imgcore import as_plane
from .mosaic import ANGLES, COLORS, ColorPolarizationStack, CpfaPattern
from .ri import GuidedFilterParams

_CHANNEL_INDEX = {"R": 0, "G": 1, "B": 2}


def cpfa_extract_bayer(raw, pattern: CpfaPattern, angle: int):
    """Half-resolution Bayer mosaic of one polarizer angle.

    Returns (mosaic, BayerPattern); output pixel (i, j) is the raw sample of
    the given angle inside the same-color block at block coordinates (i, j).
    """
    arr = as_plane(raw)
    h, w = arr.shape
    if h % 2 or w % 2:
        raise OddDimensions(f"CPFA extraction needs even dimensions, got {w}x{h}")
    dr, dc = pattern.angle_offset(angle)
    return arr[dr::2, dc::2].copy(), BayerPattern(pattern.block_colors)


def cpfa_scatter_to_mpfa(rgb_by_angle: dict, pattern: CpfaPattern, shape: tuple[int, int]) -> dict:
    """Regroup four demosaicked half-res RGB images into per-color MPFA mosaics.

    Each half-res pixel corresponds to exactly one full-res sensor site, so
    the values scatter back position-faithfully (no resampling). The result
    is one dense mosaic per color whose angle structure is the pattern's
    intra-block layout.
    """
    h, w = shape
    half = (h // 2, w // 2)
    mosaics = {}
    for color in COLORS:
        ch = _CHANNEL_INDEX[color]
        m = np.empty((h, w), dtype=np.float64)
        for angle in ANGLES:
            plane = as_plane(rgb_by_angle[angle][ch])
            if plane.shape != half:
                raise DimensionMismatch(
                    f"angle {angle} image is {plane.shape}, expected {half}"
                )
            dr, dc = pattern.angle_offset(angle)
            m[dr::2, dc::2] = plane
        mosaics[color] = m
    return mosaics


def demosaick_cpfa(
    raw,
    pattern: CpfaPattern = CpfaPattern(),
    color_method: str = "gradient",
    mpfa_method: str = "eari",
    eari_params: EariParams = EariParams(),
    gf_params: GuidedFilterParams = GuidedFilterParams(),
) -> ColorPolarizationStack:
    """Full CPFA demosaick to a 12-plane color-polarization stack."""
    from .methods import demosaick_mpfa  # deferred: methods imports this module

    arr = as_plane(raw)
    rgb_by_angle = {}
    for angle in ANGLES:
        bayer, bayer_pattern = cpfa_extract_bayer(arr, pattern, angle)
        rgb_by_angle[angle] = demosaick_bayer(bayer, bayer_pattern, method=color_method)

    mosaics = cpfa_scatter_to_mpfa(rgb_by_angle, pattern, arr.shape)
    stacks = {
        color: demosaick_mpfa(mosaics[color], pattern.mpfa(), mpfa_method, eari_params, gf_params)
        for color in COLORS
    }
    return ColorPolarizationStack(stacks["R"], stacks["G"], stacks["B"])
