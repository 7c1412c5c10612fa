"""Comparison demosaickers: bilinear/bicubic MPFA, Bayer color, 12-channel CPFA.

All baselines reproduce the measured samples exactly at their own lattice
positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .imgcore import as_plane
from .lattice import bilinear_from_mask, catmull_rom_from_lattice
from .mosaic import ANGLES, CpfaPattern, ColorPolarizationStack, MpfaPattern, PolarizationStack


@dataclass(frozen=True)
class BayerPattern:
    """2x2 color layout with one R, one B, and two G cells."""

    layout: tuple[tuple[str, str], tuple[str, str]] = (("R", "G"), ("G", "B"))

    def __post_init__(self):
        rows = tuple(tuple(str(c).upper() for c in row) for row in self.layout)
        flat = [c for row in rows for c in row]
        if sorted(flat) != ["B", "G", "G", "R"]:
            raise ValueError(f"Bayer layout needs R,G,G,B, got {flat}")
        g1, g2 = [(r, c) for r in range(2) for c in range(2) if rows[r][c] == "G"]
        if g1[0] == g2[0] or g1[1] == g2[1]:
            raise ValueError("Bayer layout needs the two G cells on a diagonal")
        object.__setattr__(self, "layout", rows)

    def offsets_of(self, color: str) -> list[tuple[int, int]]:
        return [(r, c) for r in range(2) for c in range(2) if self.layout[r][c] == color]

    def color_mask(self, color: str, shape: tuple[int, int]) -> np.ndarray:
        mask = np.zeros(shape, dtype=bool)
        for r0, c0 in self.offsets_of(color):
            mask[r0::2, c0::2] = True
        return mask


def demosaick_mpfa_bilinear(raw, pattern: MpfaPattern = MpfaPattern()) -> PolarizationStack:
    """Separable bilinear interpolation of each orientation's stride-2 lattice."""
    arr = as_plane(raw)
    planes = {
        angle: bilinear_from_mask(arr, pattern.angle_mask(angle, arr.shape)) for angle in ANGLES
    }
    return PolarizationStack.from_planes(planes)


def demosaick_mpfa_bicubic(raw, pattern: MpfaPattern = MpfaPattern()) -> PolarizationStack:
    """Separable Catmull-Rom interpolation of each orientation's lattice."""
    arr = as_plane(raw)
    planes = {
        angle: catmull_rom_from_lattice(arr, pattern.offset_of(angle), stride=2)
        for angle in ANGLES
    }
    return PolarizationStack.from_planes(planes)


# 3x3 bilinear kernels, normalized against the same-color sample count so
# border pixels average over whatever neighbors exist.
_K_CROSS = np.array([[0, 1, 0], [1, 4, 1], [0, 1, 0]], dtype=np.float64)
_K_FULL = np.array([[1, 2, 1], [2, 4, 2], [1, 2, 1]], dtype=np.float64)

# 5x5 gradient-correction kernels (coefficients are eighths). Applied to the
# raw mosaic directly; at a channel's own sites they return the raw value.
_K_G_AT_RB = (
    np.array(
        [
            [0, 0, -1, 0, 0],
            [0, 0, 2, 0, 0],
            [-1, 2, 4, 2, -1],
            [0, 0, 2, 0, 0],
            [0, 0, -1, 0, 0],
        ],
        dtype=np.float64,
    )
    / 8.0
)
_K_RB_ROW = (
    np.array(
        [
            [0, 0, 0.5, 0, 0],
            [0, -1, 0, -1, 0],
            [-1, 4, 5, 4, -1],
            [0, -1, 0, -1, 0],
            [0, 0, 0.5, 0, 0],
        ],
        dtype=np.float64,
    )
    / 8.0
)
_K_RB_COL = _K_RB_ROW.T
_K_RB_DIAG = (
    np.array(
        [
            [0, 0, -1.5, 0, 0],
            [0, 2, 0, 2, 0],
            [-1.5, 0, 6, 0, -1.5],
            [0, 2, 0, 2, 0],
            [0, 0, -1.5, 0, 0],
        ],
        dtype=np.float64,
    )
    / 8.0
)


def _masked_bilinear(arr: np.ndarray, mask: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    m = mask.astype(np.float64)
    num = ndimage.correlate(arr * m, kernel, mode="constant")
    den = ndimage.correlate(m, kernel, mode="constant")
    return np.divide(num, den, out=np.zeros_like(arr), where=den > 0)


def demosaick_bayer(raw, pattern: BayerPattern = BayerPattern(), method: str = "gradient"):
    """Demosaick a Bayer mosaic into (r, g, b) planes.

    ``bilinear`` interpolates each color's own lattice; ``gradient`` adds the
    fixed 5x5 gradient corrections on top (high-quality linear interpolation),
    estimating each missing color from the full raw neighborhood.
    """
    arr = as_plane(raw)
    shape = arr.shape
    masks = {c: pattern.color_mask(c, shape) for c in ("R", "G", "B")}

    if method == "bilinear":
        r = _masked_bilinear(arr, masks["R"], _K_FULL)
        g = _masked_bilinear(arr, masks["G"], _K_CROSS)
        b = _masked_bilinear(arr, masks["B"], _K_FULL)
        return r, g, b
    if method not in ("gradient", "gradient_corrected"):
        raise ValueError(f"unknown Bayer method {method!r} (bilinear|gradient)")

    def corr(kernel):
        return ndimage.correlate(arr, kernel, mode="nearest")

    # The correction kernels depend only on geometry (where the target color
    # sits relative to the center), so the three estimate planes serve R and
    # B alike.
    row_est = corr(_K_RB_ROW)
    col_est = corr(_K_RB_COL)
    diag_est = corr(_K_RB_DIAG)

    g = np.where(masks["G"], arr, corr(_K_G_AT_RB))

    def full_channel(color):
        ((own_row, _),) = pattern.offsets_of(color)
        out = np.where(masks[color], arr, diag_est)
        # G pixels in the channel's own rows see it horizontally, the
        # others vertically.
        g_row = np.zeros(shape, dtype=bool)
        g_row[own_row::2, :] = True
        g_row &= masks["G"]
        out[g_row] = row_est[g_row]
        g_col = masks["G"] & ~g_row
        out[g_col] = col_est[g_col]
        return out

    return full_channel("R"), g, full_channel("B")


def demosaick_cpfa_bilinear12(raw, pattern: CpfaPattern = CpfaPattern()) -> ColorPolarizationStack:
    """Independent bilinear interpolation of each of the 12 sparse channels."""
    arr = as_plane(raw)
    stacks = {}
    for color in ("R", "G", "B"):
        planes = {
            angle: bilinear_from_mask(arr, pattern.color_angle_mask(color, angle, arr.shape))
            for angle in ANGLES
        }
        stacks[color] = PolarizationStack.from_planes(planes)
    return ColorPolarizationStack(stacks["R"], stacks["G"], stacks["B"])
