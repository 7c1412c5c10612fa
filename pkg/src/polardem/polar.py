"""Stokes parameters, DoP/AoP, and the evaluation metrics.

Conventions (also written into every CSV header):

* s0 averages the two redundant sums (I0 + I90 and I45 + I135), since
  demosaicked data breaks their equality; on [0, 1] inputs s0 lies in [0, 2].
* PSNR uses peak 1 for the orientation planes, s1, s2 and DoP, and peak 2
  for s0. DoP is clamped to [0, 1] before comparison.
* AoP is reported in degrees in (-90, 90] and compared modulo 180.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .imgcore import as_plane, check_same_shape
from .mosaic import ANGLES, ColorPolarizationStack, PolarizationStack

DOP_FLOOR = 1e-6


@dataclass(eq=False)
class StokesMaps:
    """Per-pixel linear Stokes parameters."""

    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray

    def __post_init__(self):
        self.s0 = as_plane(self.s0)
        self.s1 = as_plane(self.s1)
        self.s2 = as_plane(self.s2)
        check_same_shape(self.s0, self.s1, self.s2)


def stokes_from_stack(stack: PolarizationStack) -> StokesMaps:
    """Stokes maps from the four orientation planes."""
    s0 = (stack.i0 + stack.i45 + stack.i90 + stack.i135) / 2.0
    return StokesMaps(s0, stack.i0 - stack.i90, stack.i45 - stack.i135)


def stokes_consistency(stack: PolarizationStack) -> np.ndarray:
    """Difference of the two redundant total-intensity sums (diagnostic)."""
    return (stack.i0 + stack.i90) - (stack.i45 + stack.i135)


def stack_from_stokes(stokes: StokesMaps) -> PolarizationStack:
    """Synthesize the four orientation planes from Stokes maps."""
    planes = {}
    for angle in ANGLES:
        rad = math.radians(2 * angle)
        planes[angle] = (stokes.s0 + stokes.s1 * math.cos(rad) + stokes.s2 * math.sin(rad)) / 2.0
    return PolarizationStack.from_planes(planes)


def dop(stokes: StokesMaps, clamp: bool = False) -> np.ndarray:
    """Degree of linear polarization; s0 is floored to avoid division blowup."""
    d = np.hypot(stokes.s1, stokes.s2) / np.maximum(stokes.s0, DOP_FLOOR)
    return np.clip(d, 0.0, 1.0) if clamp else d


def aop_degrees(stokes: StokesMaps) -> np.ndarray:
    """Angle of linear polarization in degrees, range (-90, 90]."""
    return np.degrees(0.5 * np.arctan2(stokes.s2, stokes.s1))


def wrap_angle_error(diff_deg) -> np.ndarray:
    """Wrap angle differences into [-90, 90) degrees (180-periodic)."""
    return (np.asarray(diff_deg, dtype=np.float64) + 90.0) % 180.0 - 90.0


def psnr(ref, test, peak: float = 1.0) -> float:
    """10*log10(peak^2 / MSE); identical images give +inf."""
    r = as_plane(ref)
    t = as_plane(test)
    check_same_shape(r, t)
    mse = float(np.mean((r - t) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def cpsnr(ref_rgb, test_rgb, peak: float = 1.0) -> float:
    """PSNR with the squared error pooled over the three color channels."""
    if len(ref_rgb) != 3 or len(test_rgb) != 3:
        raise ValueError("cpsnr expects (r, g, b) triples")
    mse = 0.0
    for r, t in zip(ref_rgb, test_rgb):
        rp, tp = as_plane(r), as_plane(t)
        check_same_shape(rp, tp)
        mse += float(np.mean((rp - tp) ** 2))
    mse /= 3.0
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def angle_rmse(aop_ref, aop_test) -> float:
    """RMSE of AoP errors in degrees, wrapped modulo 180."""
    r = as_plane(aop_ref)
    t = as_plane(aop_test)
    check_same_shape(r, t)
    err = wrap_angle_error(t - r)
    return float(np.sqrt(np.mean(err * err)))


METRIC_COLUMNS = (
    "psnr_i0",
    "psnr_i45",
    "psnr_i90",
    "psnr_i135",
    "psnr_s0",
    "psnr_s1",
    "psnr_s2",
    "psnr_dop",
    "aop_rmse_deg",
)


def stack_metrics(ref: PolarizationStack, test: PolarizationStack) -> dict[str, float]:
    """The full metric row for one monochrome scene."""
    sref = stokes_from_stack(ref)
    stest = stokes_from_stack(test)
    row = {f"psnr_i{a}": psnr(ref.plane(a), test.plane(a)) for a in ANGLES}
    row["psnr_s0"] = psnr(sref.s0, stest.s0, peak=2.0)
    row["psnr_s1"] = psnr(sref.s1, stest.s1)
    row["psnr_s2"] = psnr(sref.s2, stest.s2)
    row["psnr_dop"] = psnr(dop(sref, clamp=True), dop(stest, clamp=True))
    row["aop_rmse_deg"] = angle_rmse(aop_degrees(sref), aop_degrees(stest))
    return row


def color_stack_metrics(ref: ColorPolarizationStack, test: ColorPolarizationStack) -> dict[str, float]:
    """The metric row for one color scene: CPSNR plus RGB-averaged angle RMSE."""
    colors = ("R", "G", "B")
    sref = {c: stokes_from_stack(ref.channel(c)) for c in colors}
    stest = {c: stokes_from_stack(test.channel(c)) for c in colors}

    row = {}
    for a in ANGLES:
        row[f"psnr_i{a}"] = cpsnr(
            [ref.plane(c, a) for c in colors], [test.plane(c, a) for c in colors]
        )
    row["psnr_s0"] = cpsnr([sref[c].s0 for c in colors], [stest[c].s0 for c in colors], peak=2.0)
    row["psnr_s1"] = cpsnr([sref[c].s1 for c in colors], [stest[c].s1 for c in colors])
    row["psnr_s2"] = cpsnr([sref[c].s2 for c in colors], [stest[c].s2 for c in colors])
    row["psnr_dop"] = cpsnr(
        [dop(sref[c], clamp=True) for c in colors], [dop(stest[c], clamp=True) for c in colors]
    )
    row["aop_rmse_deg"] = float(
        np.mean([angle_rmse(aop_degrees(sref[c]), aop_degrees(stest[c])) for c in colors])
    )
    return row


def _format_value(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return format(v, ".10g")
    return str(v)


@dataclass
class MetricsReport:
    """Per-scene metric rows plus per-method means, serializable as CSV."""

    rows: list = field(default_factory=list)
    header_lines: list = field(default_factory=list)

    def add_row(self, scene: str, method: str, metrics: dict) -> None:
        self.rows.append({"scene": scene, "method": method, **metrics})

    def mean_rows(self) -> list:
        """One averaged row per method, in first-seen method order."""
        order = []
        grouped: dict[str, list] = {}
        for row in self.rows:
            grouped.setdefault(row["method"], []).append(row)
            if row["method"] not in order:
                order.append(row["method"])
        means = []
        for method in order:
            rows = grouped[method]
            mean = {"scene": "mean", "method": method}
            for col in METRIC_COLUMNS:
                mean[col] = float(np.mean([r[col] for r in rows]))
            means.append(mean)
        return means

    def _csv(self, rows) -> str:
        lines = list(self.header_lines)
        lines.append(",".join(("scene", "method") + METRIC_COLUMNS))
        for row in rows:
            cells = [str(row["scene"]), str(row["method"])]
            cells += [_format_value(row[col]) for col in METRIC_COLUMNS]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def per_scene_csv(self) -> str:
        return self._csv(self.rows)

    def summary_csv(self) -> str:
        return self._csv(self.mean_rows())
