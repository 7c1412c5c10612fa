"""Name-keyed dispatch of the MPFA demosaickers used by the CPFA framework,
the benchmark harness, and the CLI."""

from __future__ import annotations

from .baselines import demosaick_mpfa_bicubic, demosaick_mpfa_bilinear
from .eari import EariParams
from .mosaic import MpfaPattern, PolarizationStack
from .ri import GuidedFilterParams, demosaick_mpfa_eari, demosaick_mpfa_ri_box

MPFA_METHODS = ("bilinear", "bicubic", "eari", "ri-box")


def demosaick_mpfa(
    raw,
    pattern: MpfaPattern,
    method: str = "eari",
    eari_params: EariParams = EariParams(),
    gf_params: GuidedFilterParams = GuidedFilterParams(),
) -> PolarizationStack:
    if method == "bilinear":
        return demosaick_mpfa_bilinear(raw, pattern)
    if method == "bicubic":
        return demosaick_mpfa_bicubic(raw, pattern)
    if method == "eari":
        return demosaick_mpfa_eari(raw, pattern, eari_params, gf_params)
    if method == "ri-box":
        return demosaick_mpfa_ri_box(raw, pattern, gf_params)
    raise ValueError(f"unknown MPFA method {method!r}; choose from {MPFA_METHODS}")
