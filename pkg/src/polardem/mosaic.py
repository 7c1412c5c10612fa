"""Filter-array patterns, forward mosaicking, and sampling masks.

A monochrome polarization filter array (MPFA) assigns one of four polarizer
angles {0, 45, 90, 135} to each pixel with 2x2 periodicity. The color
variant (CPFA) tiles 2x2 same-color blocks in Bayer order over a 4x4
period; every block carries all four angles in the same 2x2 layout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .imgcore import as_plane, check_same_shape

ANGLES = (0, 45, 90, 135)
COLORS = ("R", "G", "B")

# Top-left cell is 90 degrees, matching the common commercial sensor layout.
DEFAULT_MPFA_LAYOUT = ((90, 45), (135, 0))
DEFAULT_BLOCK_COLORS = (("R", "G"), ("G", "B"))


def _as_layout(layout) -> tuple[tuple[int, int], tuple[int, int]]:
    rows = tuple(tuple(int(a) for a in row) for row in layout)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError(f"layout must be 2x2, got {layout!r}")
    cells = [a for row in rows for a in row]
    if sorted(cells) != sorted(ANGLES):
        raise ValueError(f"layout must contain the four angles {ANGLES} once each, got {cells}")
    return rows


@dataclass(frozen=True)
class MpfaPattern:
    """2x2 periodic assignment of polarizer angles, indexed (row % 2, col % 2)."""

    layout: tuple[tuple[int, int], tuple[int, int]] = DEFAULT_MPFA_LAYOUT

    def __post_init__(self):
        object.__setattr__(self, "layout", _as_layout(self.layout))

    @classmethod
    def parse(cls, text: str) -> "MpfaPattern":
        """Parse a pattern like ``"90,45;135,0"`` (rows separated by ';')."""
        rows = [row.split(",") for row in text.strip().split(";")]
        return cls(tuple(tuple(int(a) for a in row) for row in rows))

    def angle_at(self, row: int, col: int) -> int:
        return self.layout[row % 2][col % 2]

    def offset_of(self, angle: int) -> tuple[int, int]:
        """(row, col) of the given angle within the 2x2 period."""
        for r in range(2):
            for c in range(2):
                if self.layout[r][c] == angle:
                    return r, c
        raise ValueError(f"angle {angle} not in {ANGLES}")

    def angle_mask(self, angle: int, shape: tuple[int, int]) -> np.ndarray:
        """Boolean plane, true where the mosaic samples the given angle."""
        r0, c0 = self.offset_of(angle)
        mask = np.zeros(shape, dtype=bool)
        mask[r0::2, c0::2] = True
        return mask

    def shifted(self, dr: int, dc: int) -> "MpfaPattern":
        """Pattern as seen from an origin moved by (dr, dc)."""
        return MpfaPattern(
            tuple(tuple(self.layout[(r + dr) % 2][(c + dc) % 2] for c in range(2)) for r in range(2))
        )

    def table(self) -> list[list[int]]:
        return [list(row) for row in self.layout]


@dataclass(frozen=True)
class CpfaPattern:
    """Quad-Bayer color polarization pattern: 2x2 Bayer blocks of 2x2 angles."""

    block_colors: tuple[tuple[str, str], tuple[str, str]] = DEFAULT_BLOCK_COLORS
    angle_layout: tuple[tuple[int, int], tuple[int, int]] = DEFAULT_MPFA_LAYOUT

    def __post_init__(self):
        colors = tuple(tuple(str(c).upper() for c in row) for row in self.block_colors)
        flat = [c for row in colors for c in row]
        if len(flat) != 4 or sorted(flat) != ["B", "G", "G", "R"]:
            raise ValueError(f"block colors must be a Bayer arrangement of R,G,G,B, got {flat}")
        g1, g2 = [(r, c) for r in range(2) for c in range(2) if colors[r][c] == "G"]
        if g1[0] == g2[0] or g1[1] == g2[1]:
            raise ValueError("block colors need the two G blocks on a diagonal")
        object.__setattr__(self, "block_colors", colors)
        object.__setattr__(self, "angle_layout", _as_layout(self.angle_layout))

    def color_at(self, row: int, col: int) -> str:
        return self.block_colors[(row // 2) % 2][(col // 2) % 2]

    def angle_at(self, row: int, col: int) -> int:
        return self.angle_layout[row % 2][col % 2]

    def angle_offset(self, angle: int) -> tuple[int, int]:
        return self.mpfa().offset_of(angle)

    def mpfa(self) -> MpfaPattern:
        """The angle structure shared by every block."""
        return MpfaPattern(self.angle_layout)

    def color_mask(self, color: str, shape: tuple[int, int]) -> np.ndarray:
        mask = np.zeros(shape, dtype=bool)
        for br in range(2):
            for bc in range(2):
                if self.block_colors[br][bc] == color:
                    block = np.zeros((4, 4), dtype=bool)
                    block[2 * br : 2 * br + 2, 2 * bc : 2 * bc + 2] = True
                    reps = (shape[0] + 3) // 4, (shape[1] + 3) // 4
                    mask |= np.tile(block, reps)[: shape[0], : shape[1]]
        return mask

    def color_angle_mask(self, color: str, angle: int, shape: tuple[int, int]) -> np.ndarray:
        return self.color_mask(color, shape) & self.mpfa().angle_mask(angle, shape)


@dataclass(eq=False)
class PolarizationStack:
    """Four aligned orientation planes of one scene."""

    i0: np.ndarray
    i45: np.ndarray
    i90: np.ndarray
    i135: np.ndarray
    _by_angle: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.i0 = as_plane(self.i0)
        self.i45 = as_plane(self.i45)
        self.i90 = as_plane(self.i90)
        self.i135 = as_plane(self.i135)
        check_same_shape(self.i0, self.i45, self.i90, self.i135)
        self._by_angle = {0: self.i0, 45: self.i45, 90: self.i90, 135: self.i135}

    @classmethod
    def from_planes(cls, by_angle: dict) -> "PolarizationStack":
        return cls(by_angle[0], by_angle[45], by_angle[90], by_angle[135])

    def plane(self, angle: int) -> np.ndarray:
        return self._by_angle[angle]

    @property
    def shape(self) -> tuple[int, int]:
        return self.i0.shape


@dataclass(eq=False)
class ColorPolarizationStack:
    """Twelve aligned planes: a polarization stack per R, G, B channel."""

    red: PolarizationStack
    green: PolarizationStack
    blue: PolarizationStack

    def __post_init__(self):
        if not (self.red.shape == self.green.shape == self.blue.shape):
            raise DimensionMismatch("color channels differ in shape")

    def channel(self, color: str) -> PolarizationStack:
        return {"R": self.red, "G": self.green, "B": self.blue}[color]

    def plane(self, color: str, angle: int) -> np.ndarray:
        return self.channel(color).plane(angle)

    @property
    def shape(self) -> tuple[int, int]:
        return self.red.shape


def mosaic_mpfa(stack: PolarizationStack, pattern: MpfaPattern = MpfaPattern()) -> np.ndarray:
    """Sample a full stack down to one raw sensor plane (lossless selection)."""
    raw = np.empty(stack.shape, dtype=np.float64)
    for angle in ANGLES:
        r0, c0 = pattern.offset_of(angle)
        raw[r0::2, c0::2] = stack.plane(angle)[r0::2, c0::2]
    return raw


def mosaic_cpfa(stack12: ColorPolarizationStack, pattern: CpfaPattern = CpfaPattern()) -> np.ndarray:
    """Sample a 12-plane color stack down to one raw quad-Bayer plane."""
    h, w = stack12.shape
    if h % 4 or w % 4:
        warnings.warn(f"CPFA mosaic of {w}x{h} image: dimensions not divisible by 4", stacklevel=2)
    raw = np.empty((h, w), dtype=np.float64)
    for color in COLORS:
        for angle in ANGLES:
            mask = pattern.color_angle_mask(color, angle, (h, w))
            raw[mask] = stack12.plane(color, angle)[mask]
    return raw

