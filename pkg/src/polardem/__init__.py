"""Demosaicking for monochrome and color polarization filter arrays."""

from .baselines import (
    BayerPattern,
    demosaick_bayer,
    demosaick_cpfa_bilinear12,
    demosaick_mpfa_bicubic,
    demosaick_mpfa_bilinear,
)
from .bench import ExperimentConfig, SceneRecord, load_dataset, run_experiment, synth_scene
from .cpfa import cpfa_extract_bayer, cpfa_scatter_to_mpfa, demosaick_cpfa
from .eari import EariParams, guide_image
from .imgcore import convolve, read_image, read_image_rgb, write_image, write_image_rgb
from .methods import MPFA_METHODS, demosaick_mpfa
from .mosaic import (
    ColorPolarizationStack,
    CpfaPattern,
    MpfaPattern,
    PolarizationStack,
    mosaic_cpfa,
    mosaic_mpfa,
)
from .polar import (
    MetricsReport,
    StokesMaps,
    angle_rmse,
    aop_degrees,
    cpsnr,
    dop,
    psnr,
    stack_from_stokes,
    stokes_from_stack,
)
from .ri import (
    GuidedFilterParams,
    SparsePlane,
    demosaick_mpfa_eari,
    demosaick_mpfa_ri_box,
    guided_filter,
    residual_interpolate,
)
from .viz import render_aop_dop

__version__ = "0.1.0"

__all__ = [
    "BayerPattern",
    "ColorPolarizationStack",
    "CpfaPattern",
    "EariParams",
    "ExperimentConfig",
    "GuidedFilterParams",
    "MPFA_METHODS",
    "MetricsReport",
    "MpfaPattern",
    "PolarizationStack",
    "SceneRecord",
    "SparsePlane",
    "StokesMaps",
    "angle_rmse",
    "aop_degrees",
    "convolve",
    "cpsnr",
    "cpfa_extract_bayer",
    "cpfa_scatter_to_mpfa",
    "demosaick_bayer",
    "demosaick_cpfa",
    "demosaick_cpfa_bilinear12",
    "demosaick_mpfa",
    "demosaick_mpfa_bicubic",
    "demosaick_mpfa_bilinear",
    "demosaick_mpfa_eari",
    "demosaick_mpfa_ri_box",
    "dop",
    "guide_image",
    "guided_filter",
    "load_dataset",
    "mosaic_cpfa",
    "mosaic_mpfa",
    "psnr",
    "read_image",
    "read_image_rgb",
    "render_aop_dop",
    "residual_interpolate",
    "run_experiment",
    "stack_from_stokes",
    "stokes_from_stack",
    "synth_scene",
    "write_image",
    "write_image_rgb",
]
