"""False-color AoP-DoP rendering.

Hue encodes the polarization angle (mapped linearly from (-90, 90] onto the
color wheel), saturation encodes the degree of polarization, and value is
either constant or modulated by the total intensity.
"""

from __future__ import annotations

import numpy as np
from matplotlib.colors import hsv_to_rgb

from .imgcore import as_plane, check_same_shape
from .polar import StokesMaps, aop_degrees, dop

RENDER_MODES = ("flat", "intensity")


def render_aop_dop_planes(aop_deg, dop_map, value=None):
    """Render AoP/DoP planes to (r, g, b); ``value`` defaults to all ones."""
    aop = as_plane(aop_deg)
    sat = np.clip(as_plane(dop_map), 0.0, 1.0)
    check_same_shape(aop, sat)
    if value is None:
        val = np.ones_like(aop)
    else:
        val = np.clip(as_plane(value), 0.0, 1.0)
        check_same_shape(aop, val)
    # 180 degrees of polarization angle cover the full hue circle, with
    # 0 degrees rendered red.
    hue = (aop / 180.0) % 1.0
    rgb = hsv_to_rgb(np.stack([hue, sat, val], axis=-1))
    return rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2]


def render_aop_dop(stokes: StokesMaps, mode: str = "flat"):
    """AoP-DoP visualization of a Stokes map set."""
    if mode not in RENDER_MODES:
        raise ValueError(f"mode must be one of {RENDER_MODES}, got {mode!r}")
    value = np.clip(stokes.s0 / 2.0, 0.0, 1.0) if mode == "intensity" else None
    return render_aop_dop_planes(aop_degrees(stokes), dop(stokes, clamp=True), value)


def aop_dop_legend(width: int = 360, height: int = 64):
    """Legend strip: hue sweeps the AoP range left to right, saturation
    (DoP 0 to 1) bottom to top."""
    aop = np.broadcast_to(np.linspace(-90.0, 90.0, width, endpoint=False), (height, width))
    sat = np.broadcast_to(np.linspace(1.0, 0.0, height)[:, None], (height, width))
    return render_aop_dop_planes(aop, sat)
