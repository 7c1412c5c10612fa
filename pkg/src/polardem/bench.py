"""Dataset ingestion, synthetic scenes, and experiment orchestration.

Scenes come from a JSON manifest (ground-truth captures) or from seeded
synthetic generators. For every scene the harness simulates the sensor
mosaic, runs each configured demosaicker, scores it against the ground
truth, and writes per-scene and averaged CSV reports with a fixed column
order. Runs are deterministic given the configuration.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import demosaick_cpfa_bilinear12
from .cpfa import demosaick_cpfa
from .eari import EariParams
from .errors import ConfigError, DatasetError, IoError
from .imgcore import read_image_rgb, write_image, write_image_rgb
from .methods import MPFA_METHODS, demosaick_mpfa
from .mosaic import (
    ANGLES,
    ColorPolarizationStack,
    CpfaPattern,
    MpfaPattern,
    PolarizationStack,
    mosaic_cpfa,
    mosaic_mpfa,
)
from .polar import MetricsReport, StokesMaps, color_stack_metrics, stack_from_stokes, stack_metrics, stokes_from_stack
from .ri import GuidedFilterParams
from .viz import aop_dop_legend, render_aop_dop

SCENE_KINDS = ("constant", "ramp", "step", "disk", "sinusoid")
CPFA_METHODS = ("bilinear12",) + MPFA_METHODS


@dataclass
class SceneRecord:
    """One dataset scene: four RGB ground-truth images plus their bit depth."""

    scene_id: str
    image_paths: dict
    bit_depth: int = 10

    def load_color(self) -> ColorPolarizationStack:
        planes = {}
        shape = None
        for angle in ANGLES:
            r, g, b = read_image_rgb(self.image_paths[angle], bit_depth=self.bit_depth)
            if shape is None:
                shape = r.shape
            elif r.shape != shape:
                raise DatasetError(
                    f"scene {self.scene_id}: angle {angle} image is "
                    f"{r.shape[1]}x{r.shape[0]}, expected {shape[1]}x{shape[0]}"
                )
            planes[angle] = (r, g, b)
        stacks = [
            PolarizationStack.from_planes({a: planes[a][ch] for a in ANGLES}) for ch in range(3)
        ]
        return ColorPolarizationStack(*stacks)

    def load_mono(self) -> PolarizationStack:
        """Green channel as the monochrome ground truth."""
        return self.load_color().green


def load_dataset(manifest_path: str) -> list[SceneRecord]:
    """Parse and validate a manifest; image paths are resolved relative to it."""
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read manifest {manifest_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"manifest {manifest_path} is not valid JSON: {exc}") from exc

    base = os.path.dirname(os.path.abspath(manifest_path))
    scenes = manifest.get("scenes")
    if not isinstance(scenes, list) or not scenes:
        raise DatasetError(f"manifest {manifest_path} has no scenes")

    records = []
    for entry in scenes:
        scene_id = str(entry.get("id", f"scene{len(records):02d}"))
        images = entry.get("images", {})
        paths = {}
        for angle in ANGLES:
            key = str(angle)
            if key not in images:
                raise DatasetError(f"scene {scene_id}: missing angle {angle} image")
            path = images[key]
            if not os.path.isabs(path):
                path = os.path.join(base, path)
            if not os.path.exists(path):
                raise IoError(f"scene {scene_id}: no such file {path}")
            paths[angle] = path
        records.append(SceneRecord(scene_id, paths, int(entry.get("bit_depth", 10))))
    return records


def _sample_polar_state(rng: np.random.Generator, dop_range=(0.15, 0.85), s0_min=0.25):
    """Random (s0, dop, aop_deg) keeping all orientation values inside [0, 1]."""
    d = rng.uniform(*dop_range)
    hi = 1.9 / (1.0 + d)
    s0 = rng.uniform(min(s0_min, 0.95 * hi), hi)
    aop = rng.uniform(-90.0, 90.0)
    return s0, d, aop


def _stokes_of(s0, d, aop_deg):
    rad = np.radians(2.0 * np.asarray(aop_deg, dtype=np.float64))
    s0 = np.asarray(s0, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    return s0, s0 * d * np.cos(rad), s0 * d * np.sin(rad)


def _blend_states(weight, state_a, state_b):
    """Per-pixel blend of two polarization states; weight 1 selects ``state_a``."""
    a = _stokes_of(*state_a)
    b = _stokes_of(*state_b)
    return tuple(weight * pa + (1.0 - weight) * pb for pa, pb in zip(a, b))


def _scene_weight(kind: str, width: int, height: int, rng: np.random.Generator, params: dict):
    """The [0, 1] field that mixes the scene's two polarization states."""
    x = np.broadcast_to(np.arange(width, dtype=np.float64), (height, width))
    y = np.broadcast_to(np.arange(height, dtype=np.float64)[:, None], (height, width))
    if kind == "constant":
        return np.ones((height, width))

    def pick(name, draw):
        value = params.get(name)
        return draw() if value is None else value

    if kind == "ramp":
        axis = pick("axis", lambda: "x" if rng.uniform() < 0.5 else "y")
        t = x / max(width - 1, 1) if axis == "x" else y / max(height - 1, 1)
        return 1.0 - t
    if kind == "step":
        axis = pick("axis", lambda: "x" if rng.uniform() < 0.5 else "y")
        if axis == "x":
            pos = pick("position", lambda: int(rng.integers(width // 4, 3 * width // 4 + 1)))
            return (x < pos).astype(np.float64)
        pos = pick("position", lambda: int(rng.integers(height // 4, 3 * height // 4 + 1)))
        return (y < pos).astype(np.float64)
    if kind == "disk":
        cx = pick("cx", lambda: rng.uniform(0.35, 0.65) * width)
        cy = pick("cy", lambda: rng.uniform(0.35, 0.65) * height)
        radius = pick("radius", lambda: rng.uniform(0.15, 0.35) * min(width, height))
        return (np.hypot(x - cx, y - cy) < radius).astype(np.float64)
    if kind == "sinusoid":
        freq = pick("cycles", lambda: rng.uniform(1.0, 3.0))
        phase = pick("phase", lambda: rng.uniform(0.0, 2.0 * math.pi))
        return 0.5 + 0.5 * np.sin(2.0 * math.pi * freq * x / width + phase)
    raise ConfigError(f"unknown scene kind {kind!r}; choose from {SCENE_KINDS}")


def synth_scene(
    kind: str,
    width: int,
    height: int,
    seed: int,
    color: bool = False,
    **params,
):
    """Generate a physically consistent test scene from analytic Stokes fields.

    ``step`` and ``disk`` place an edge between two polarization states; pass
    ``polarization_only=True`` to equalize intensity so the edge lives purely
    in the polarization parameters. Color scenes share geometry, polarization
    state, and shading across channels and differ by per-region albedo, the
    cross-channel correlation real captures have. Identical arguments always
    produce the identical scene.
    """
    if width < 1 or height < 1:
        raise ConfigError(f"scene dimensions must be positive, got {width}x{height}")
    rng = np.random.default_rng(seed)
    weight = _scene_weight(kind, width, height, rng, params)

    def pick(name, sampled):
        value = params.get(name)
        return sampled if value is None else float(value)

    shade_amp = float(params.get("shading", 0.0))
    shade_cycles = params.get("shade_cycles", (2.0, 6.0))
    dop_range = (params.get("dop_min", 0.15), params.get("dop_max", 0.85))
    s0_min = float(params.get("s0_min", 0.25))
    albedo_min = float(params.get("albedo_min", 0.5))

    sa = _sample_polar_state(rng, dop_range, s0_min)
    sb = _sample_polar_state(rng, dop_range, s0_min)
    state_a = (pick("s0_a", sa[0]), pick("dop_a", sa[1]), pick("aop_a", sa[2]))
    state_b = (pick("s0_b", sb[0]), pick("dop_b", sb[1]), pick("aop_b", sb[2]))
    if params.get("polarization_only", False):
        state_b = (state_a[0], state_b[1], state_b[2])

    shade = None
    if shade_amp > 0.0:
        # Smooth illumination field: scales intensity, preserves the
        # polarization state, and is renormalized to keep values in [0, 1].
        x = np.arange(width, dtype=np.float64)
        y = np.arange(height, dtype=np.float64)[:, None]
        fx, fy = rng.uniform(shade_cycles[0], shade_cycles[1], size=2)
        px, py = rng.uniform(0.0, 2.0 * math.pi, size=2)
        shade = 1.0 + shade_amp * np.sin(2 * math.pi * fx * x / width + px) * np.cos(
            2 * math.pi * fy * y / height + py
        )
        shade /= 1.0 + shade_amp

    def one_stack(albedo_a=1.0, albedo_b=1.0):
        scaled_a = (state_a[0] * albedo_a, state_a[1], state_a[2])
        scaled_b = (state_b[0] * albedo_b, state_b[1], state_b[2])
        s0, s1, s2 = _blend_states(weight, scaled_a, scaled_b)
        if shade is not None:
            s0, s1, s2 = s0 * shade, s1 * shade, s2 * shade
        return stack_from_stokes(StokesMaps(s0, s1, s2))

    if not color:
        return one_stack()
    albedos = rng.uniform(albedo_min, 1.0, size=(2, 3))
    channels = [one_stack(albedos[0, ch], albedos[1, ch]) for ch in range(3)]
    return ColorPolarizationStack(*channels)


def synth_edge_suite(count: int, width: int, height: int, seed: int, color: bool = False):
    """Alternating step/disk scenes with polarization edges, for ordering tests.

    The regime imitates natural captures: weak-to-moderate polarization,
    textured intensity (shading over the whole frame), and a step or disk
    boundary between two polarization states. Every other pair of scenes
    makes the boundary polarization-only. Color suites use lower texture
    frequency (the Nyquist limit of the stride-4 per-channel lattices) and a
    brightness floor, matching well-exposed lab captures.
    """
    extra = (
        {"shade_cycles": (2.0, 5.0), "s0_min": 0.6, "albedo_min": 0.7}
        if color
        else {"shade_cycles": (8.0, 14.0)}
    )
    scenes = []
    for i in range(count):
        kind = "step" if i % 2 == 0 else "disk"
        scenes.append(
            (
                f"{kind}{i:03d}",
                synth_scene(
                    kind,
                    width,
                    height,
                    seed=seed * 1000 + i,
                    color=color,
                    polarization_only=(i % 4 >= 2),
                    shading=0.4,
                    dop_min=0.03,
                    dop_max=0.15,
                    **extra,
                ),
            )
        )
    return scenes


@dataclass
class ExperimentConfig:
    """Everything a benchmark run depends on."""

    mode: str = "mpfa"
    methods: tuple = ("bilinear", "bicubic", "eari")
    pattern: MpfaPattern = field(default_factory=MpfaPattern)
    cpfa_pattern: CpfaPattern = field(default_factory=CpfaPattern)
    eari_params: EariParams = field(default_factory=EariParams)
    gf_params: GuidedFilterParams = field(default_factory=GuidedFilterParams)
    color_method: str = "gradient"
    manifest: str | None = None
    synthetic: dict | None = None
    seed: int = 0
    outdir: str | None = None
    save_images: bool = False
    viz_mode: str = "flat"
    bit_depth: int = 10
    workers: int = 1

    def __post_init__(self):
        self.methods = tuple(self.methods)
        valid = MPFA_METHODS if self.mode == "mpfa" else CPFA_METHODS
        if self.mode not in ("mpfa", "cpfa"):
            raise ConfigError(f"mode must be mpfa or cpfa, got {self.mode!r}")
        if not self.methods:
            raise ConfigError("at least one method is required")
        for m in self.methods:
            if m not in valid:
                raise ConfigError(f"method {m!r} not valid for {self.mode} (choose from {valid})")
        if self.manifest is None and self.synthetic is None:
            raise ConfigError("configure either a dataset manifest or synthetic scenes")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.viz_mode not in ("flat", "intensity"):
            raise ConfigError(f"viz_mode must be flat or intensity, got {self.viz_mode!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "pattern" in d:
            d["pattern"] = MpfaPattern(d["pattern"])
        if "cpfa_pattern" in d:
            cp = d["cpfa_pattern"]
            d["cpfa_pattern"] = CpfaPattern(
                tuple(tuple(row) for row in cp.get("block_colors", (("R", "G"), ("G", "B")))),
                tuple(tuple(row) for row in cp.get("angle_layout", ((90, 45), (135, 0)))),
            )
        if "eari" in d:
            d["eari_params"] = EariParams(**d.pop("eari"))
        if "guided" in d:
            d["gf_params"] = GuidedFilterParams(**d.pop("guided"))
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(f"bad configuration: {exc}") from exc

    def describe(self) -> str:
        """Deterministic one-line JSON summary for report headers."""
        payload = {
            "mode": self.mode,
            "methods": list(self.methods),
            "pattern": self.pattern.table(),
            "block_colors": [list(r) for r in self.cpfa_pattern.block_colors],
            "epsilon": self.eari_params.epsilon,
            "smoothing": self.eari_params.smoothing,
            "radius": self.gf_params.radius,
            "eps_gf": self.gf_params.eps,
            "color_method": self.color_method,
            "manifest": self.manifest,
            "synthetic": self.synthetic,
            "seed": self.seed,
            "viz_mode": self.viz_mode,
            "bit_depth": self.bit_depth,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _synthetic_scenes(config: ExperimentConfig):
    spec = dict(config.synthetic)
    count = int(spec.pop("count", 10))
    width = int(spec.pop("width", 64))
    height = int(spec.pop("height", 64))
    kinds = spec.pop("kinds", list(SCENE_KINDS))
    if spec.pop("edge_suite", False):
        return synth_edge_suite(count, width, height, config.seed, color=(config.mode == "cpfa"))
    scenes = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        scenes.append(
            (
                f"{kind}{i:03d}",
                synth_scene(
                    kind,
                    width,
                    height,
                    seed=config.seed * 1000 + i,
                    color=(config.mode == "cpfa"),
                    **spec,
                ),
            )
        )
    return scenes


def _run_mpfa_scene(config: ExperimentConfig, gt: PolarizationStack):
    raw = mosaic_mpfa(gt, config.pattern)
    results = {}
    for method in config.methods:
        results[method] = demosaick_mpfa(
            raw, config.pattern, method, config.eari_params, config.gf_params
        )
    return results


def _run_cpfa_scene(config: ExperimentConfig, gt: ColorPolarizationStack):
    raw = mosaic_cpfa(gt, config.cpfa_pattern)
    results = {}
    for method in config.methods:
        if method == "bilinear12":
            results[method] = demosaick_cpfa_bilinear12(raw, config.cpfa_pattern)
        else:
            results[method] = demosaick_cpfa(
                raw,
                config.cpfa_pattern,
                color_method=config.color_method,
                mpfa_method=method,
                eari_params=config.eari_params,
                gf_params=config.gf_params,
            )
    return results


def _save_mono_outputs(outdir, scene_id, method, stack: PolarizationStack, depth: int, viz_mode: str):
    d = os.path.join(outdir, "images", scene_id, method)
    os.makedirs(d, exist_ok=True)
    for angle in ANGLES:
        write_image(stack.plane(angle), os.path.join(d, f"i{angle}.png"), bit_depth=depth)
    r, g, b = render_aop_dop(stokes_from_stack(stack), mode=viz_mode)
    write_image_rgb(r, g, b, os.path.join(d, "aop_dop.png"), bit_depth=8)


def _save_color_outputs(outdir, scene_id, method, stack: ColorPolarizationStack, depth: int, viz_mode: str):
    d = os.path.join(outdir, "images", scene_id, method)
    os.makedirs(d, exist_ok=True)
    for angle in ANGLES:
        write_image_rgb(
            stack.plane("R", angle),
            stack.plane("G", angle),
            stack.plane("B", angle),
            os.path.join(d, f"i{angle}.png"),
            bit_depth=depth,
        )
    r, g, b = render_aop_dop(stokes_from_stack(stack.green), mode=viz_mode)
    write_image_rgb(r, g, b, os.path.join(d, "aop_dop.png"), bit_depth=8)


def run_experiment(config: ExperimentConfig):
    """Execute the configured benchmark.

    Returns (MetricsReport, failures) where failures is a list of
    (scene_id, message). Scenes that fail are recorded and skipped; row
    order is scene-major in configuration order regardless of worker count.
    """
    if config.manifest is not None:
        records = load_dataset(config.manifest)
        scenes = [(rec.scene_id, rec) for rec in records]
    else:
        scenes = _synthetic_scenes(config)

    def process(item):
        scene_id, source = item
        if isinstance(source, SceneRecord):
            gt = source.load_mono() if config.mode == "mpfa" else source.load_color()
        else:
            gt = source
        if config.mode == "mpfa":
            results = _run_mpfa_scene(config, gt)
            rows = {m: stack_metrics(gt, out) for m, out in results.items()}
        else:
            results = _run_cpfa_scene(config, gt)
            rows = {m: color_stack_metrics(gt, out) for m, out in results.items()}
        return rows, results

    report = MetricsReport(
        header_lines=[f"# seed: {config.seed}", f"# config: {config.describe()}"]
    )
    failures = []

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = []
            for item in scenes:
                outcomes.append(pool.submit(process, item))
            processed = []
            for item, fut in zip(scenes, outcomes):
                try:
                    processed.append((item[0], fut.result()))
                except Exception as exc:  # isolate per-scene failures
                    processed.append((item[0], exc))
    else:
        processed = []
        for item in scenes:
            try:
                processed.append((item[0], process(item)))
            except Exception as exc:  # isolate per-scene failures
                processed.append((item[0], exc))

    for scene_id, outcome in processed:
        if isinstance(outcome, Exception):
            failures.append((scene_id, f"{type(outcome).__name__}: {outcome}"))
            continue
        rows, results = outcome
        for method in config.methods:
            report.add_row(scene_id, method, rows[method])
        if config.outdir and config.save_images:
            for method in config.methods:
                if config.mode == "mpfa":
                    _save_mono_outputs(
                        config.outdir, scene_id, method, results[method],
                        config.bit_depth, config.viz_mode,
                    )
                else:
                    _save_color_outputs(
                        config.outdir, scene_id, method, results[method],
                        config.bit_depth, config.viz_mode,
                    )

    if config.outdir:
        os.makedirs(config.outdir, exist_ok=True)
        with open(os.path.join(config.outdir, "per_scene.csv"), "w", encoding="utf-8") as fh:
            fh.write(report.per_scene_csv())
        with open(os.path.join(config.outdir, "summary.csv"), "w", encoding="utf-8") as fh:
            fh.write(report.summary_csv())
        if config.save_images:
            legend = aop_dop_legend()
            write_image_rgb(*legend, os.path.join(config.outdir, "legend.png"), bit_depth=8)
    return report, failures
