"""Interpolation of sparse lattice samples up to the full pixel grid.

The bilinear path is a two-pass axis-aligned scheme: each row that carries
samples is first filled across columns through its own knots, then every
column is filled down through the populated rows. On rectangular lattices
this equals separable bilinear interpolation; it also covers the staggered
(non-rectangular) lattices of quad-Bayer green samples. Positions beyond
the outermost knots replicate the nearest knot value, and knot positions
are always reproduced exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, EmptyMask
from .imgcore import as_plane


def _interp_rows_full(knot_rows: np.ndarray, row_pos: np.ndarray, height: int) -> np.ndarray:
    """Linearly interpolate full-width rows from rows at the given positions."""
    k = row_pos.size
    if k == 1:
        return np.broadcast_to(knot_rows[0], (height, knot_rows.shape[1])).copy()
    targets = np.arange(height)
    idx = np.clip(np.searchsorted(row_pos, targets, side="right") - 1, 0, k - 2)
    span = (row_pos[idx + 1] - row_pos[idx]).astype(np.float64)
    t = np.clip((targets - row_pos[idx]) / span, 0.0, 1.0)  # clipping replicates ends
    return (1.0 - t)[:, None] * knot_rows[idx] + t[:, None] * knot_rows[idx + 1]


def bilinear_from_mask(values, mask) -> np.ndarray:
    """Fill the whole grid from the samples of ``values`` marked by ``mask``."""
    vals = as_plane(values)
    m = np.asarray(mask, dtype=bool)
    if m.shape != vals.shape:
        raise DimensionMismatch(f"mask shape {m.shape} != values shape {vals.shape}")
    if not m.any():
        raise EmptyMask("mask selects no pixels")

    h, w = vals.shape
    row_pos = np.flatnonzero(m.any(axis=1))
    filled = np.empty((row_pos.size, w), dtype=np.float64)
    cols_full = np.arange(w)
    for i, r in enumerate(row_pos):
        cols = np.flatnonzero(m[r])
        filled[i] = np.interp(cols_full, cols, vals[r, cols])
    return _interp_rows_full(filled, row_pos, h)


def _catmull_rom_axis(knots: np.ndarray, offset: int, stride: int, length: int) -> np.ndarray:
    """Catmull-Rom (cubic, a = -0.5) resample along axis 0 of ``knots``.

    Knot i sits at coordinate ``offset + stride * i``; targets are
    0..length-1. Outside the knot range the edge knot value is held.
    """
    n = knots.shape[0]
    x = (np.arange(length) - offset) / float(stride)
    i = np.floor(x).astype(np.int64)
    t = x - i

    idx = np.stack([np.clip(i + d, 0, n - 1) for d in (-1, 0, 1, 2)])
    t2, t3 = t * t, t * t * t
    w = np.stack(
        [
            -0.5 * t3 + t2 - 0.5 * t,
            1.5 * t3 - 2.5 * t2 + 1.0,
            -1.5 * t3 + 2.0 * t2 + 0.5 * t,
            0.5 * t3 - 0.5 * t2,
        ]
    )
    extra = (1,) * (knots.ndim - 1)
    out = (w.reshape(w.shape + extra) * knots[idx]).sum(axis=0)
    out[x <= 0] = knots[0]
    out[x >= n - 1] = knots[-1]
    return out


def catmull_rom_from_lattice(values, offset: tuple[int, int], stride: int = 2) -> np.ndarray:
    """Separable Catmull-Rom interpolation from a rectangular lattice.

    ``values`` is the full-size plane; samples live at rows
    ``offset[0]::stride`` and columns ``offset[1]::stride``.
    """
    vals = as_plane(values)
    r0, c0 = offset
    knots = vals[r0::stride, c0::stride]
    if knots.size == 0:
        raise EmptyMask("lattice has no knots inside the image")
    rows = _catmull_rom_axis(knots.T, c0, stride, vals.shape[1]).T
    return _catmull_rom_axis(rows, r0, stride, vals.shape[0])
