"""Command-line interface.

Subcommands: demosaick-mpfa, demosaick-cpfa, stokes, viz, synth, bench.
Images are read and written through the declared bit depth (default 10,
carried in 16-bit PNG containers).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .baselines import demosaick_cpfa_bilinear12
from .bench import CPFA_METHODS, SCENE_KINDS, ExperimentConfig, run_experiment, synth_scene
from .cpfa import demosaick_cpfa
from .eari import EariParams, SMOOTHING_MODES, guide_image
from .errors import PolardemError
from .imgcore import read_image, write_image, write_image_rgb
from .methods import MPFA_METHODS, demosaick_mpfa
from .mosaic import ANGLES, CpfaPattern, MpfaPattern, mosaic_cpfa, mosaic_mpfa
from .polar import aop_degrees, dop, stokes_from_stack
from .ri import GuidedFilterParams
from .viz import RENDER_MODES, aop_dop_legend, render_aop_dop


def _parse_colors(text: str):
    return tuple(tuple(tok.strip() for tok in row.split(",")) for row in text.split(";"))


def _add_pattern_args(p: argparse.ArgumentParser, cpfa: bool = False):
    p.add_argument(
        "--pattern",
        default="90,45;135,0",
        help="2x2 angle layout, rows ';'-separated (default: %(default)s)",
    )
    if cpfa:
        p.add_argument(
            "--block-colors",
            default="R,G;G,B",
            help="2x2 Bayer order of the color blocks (default: %(default)s)",
        )


def _add_param_args(p: argparse.ArgumentParser):
    p.add_argument("--epsilon", type=float, default=1e-32, help="edge-weight regularizer")
    p.add_argument("--smoothing", choices=SMOOTHING_MODES, default="onesided")
    p.add_argument("--radius", type=int, default=2, help="guided-filter window radius")
    p.add_argument("--eps-gf", type=float, default=1e-4, help="guided-filter regularization")


def _stokes_products(stack, outdir: str, depth: int, prefix: str = ""):
    """Write encoded Stokes products: s0/2, (s1+1)/2, (s2+1)/2, dop, (aop+90)/180."""
    s = stokes_from_stack(stack)
    encoded = {
        "s0": s.s0 / 2.0,
        "s1": (s.s1 + 1.0) / 2.0,
        "s2": (s.s2 + 1.0) / 2.0,
        "dop": dop(s, clamp=True),
        "aop": (aop_degrees(s) + 90.0) / 180.0,
    }
    for name, plane in encoded.items():
        write_image(plane, os.path.join(outdir, f"{prefix}{name}.png"), bit_depth=depth)


def _cmd_demosaick_mpfa(args) -> int:
    pattern = MpfaPattern.parse(args.pattern)
    eari = EariParams(epsilon=args.epsilon, smoothing=args.smoothing)
    gf = GuidedFilterParams(radius=args.radius, eps=args.eps_gf)
    raw = read_image(args.input, bit_depth=args.bit_depth)
    os.makedirs(args.outdir, exist_ok=True)
    if args.dump_guide:
        write_image(guide_image(raw, eari), args.dump_guide, bit_depth=args.bit_depth)
    stack = demosaick_mpfa(raw, pattern, args.method, eari, gf)
    for angle in ANGLES:
        write_image(
            stack.plane(angle), os.path.join(args.outdir, f"i{angle}.png"), bit_depth=args.bit_depth
        )
    if args.products:
        _stokes_products(stack, args.outdir, args.bit_depth)
    return 0


def _cpfa_pattern_from_args(args) -> CpfaPattern:
    if args.pattern_file:
        with open(args.pattern_file, "r", encoding="utf-8") as fh:
            tables = json.load(fh)
        return CpfaPattern(
            tuple(tuple(row) for row in tables.get("block_colors", (("R", "G"), ("G", "B")))),
            tuple(tuple(row) for row in tables.get("angle_layout", ((90, 45), (135, 0)))),
        )
    return CpfaPattern(_parse_colors(args.block_colors), MpfaPattern.parse(args.pattern).layout)


def _cmd_demosaick_cpfa(args) -> int:
    pattern = _cpfa_pattern_from_args(args)
    eari = EariParams(epsilon=args.epsilon, smoothing=args.smoothing)
    gf = GuidedFilterParams(radius=args.radius, eps=args.eps_gf)
    raw = read_image(args.input, bit_depth=args.bit_depth)
    os.makedirs(args.outdir, exist_ok=True)
    if args.mpfa_method == "bilinear12":
        stack = demosaick_cpfa_bilinear12(raw, pattern)
    else:
        stack = demosaick_cpfa(
            raw,
            pattern,
            color_method=args.color_method,
            mpfa_method=args.mpfa_method,
            eari_params=eari,
            gf_params=gf,
        )
    # twelve per-channel planes, four RGB composites, green-channel products
    for angle in ANGLES:
        for color in ("R", "G", "B"):
            write_image(
                stack.plane(color, angle),
                os.path.join(args.outdir, f"{color.lower()}_i{angle}.png"),
                bit_depth=args.bit_depth,
            )
        write_image_rgb(
            stack.plane("R", angle),
            stack.plane("G", angle),
            stack.plane("B", angle),
            os.path.join(args.outdir, f"i{angle}.png"),
            bit_depth=args.bit_depth,
        )
    _stokes_products(stack.green, args.outdir, args.bit_depth, prefix="g_")
    return 0


def _read_stack(args):
    from .mosaic import PolarizationStack

    planes = [read_image(p, bit_depth=args.bit_depth) for p in (args.i0, args.i45, args.i90, args.i135)]
    return PolarizationStack(*planes)


def _cmd_stokes(args) -> int:
    stack = _read_stack(args)
    os.makedirs(args.outdir, exist_ok=True)
    _stokes_products(stack, args.outdir, args.bit_depth)
    return 0


def _cmd_viz(args) -> int:
    stack = _read_stack(args)
    r, g, b = render_aop_dop(stokes_from_stack(stack), mode=args.mode)
    write_image_rgb(r, g, b, args.output, bit_depth=8)
    if args.legend:
        lr, lg, lb = aop_dop_legend()
        base, ext = os.path.splitext(args.output)
        write_image_rgb(lr, lg, lb, f"{base}_legend{ext}", bit_depth=8)
    return 0


def _cmd_synth(args) -> int:
    os.makedirs(args.outdir, exist_ok=True)
    scene = synth_scene(args.kind, args.width, args.height, args.seed, color=args.color)
    if args.color:
        for angle in ANGLES:
            write_image_rgb(
                scene.plane("R", angle),
                scene.plane("G", angle),
                scene.plane("B", angle),
                os.path.join(args.outdir, f"i{angle}.png"),
                bit_depth=args.bit_depth,
            )
    else:
        for angle in ANGLES:
            write_image(
                scene.plane(angle),
                os.path.join(args.outdir, f"i{angle}.png"),
                bit_depth=args.bit_depth,
            )
    if args.raw:
        raw = mosaic_cpfa(scene) if args.color else mosaic_mpfa(scene)
        write_image(raw, os.path.join(args.outdir, "raw.png"), bit_depth=args.bit_depth)
    return 0


def _load_config_file(path: str) -> dict:
    ext = os.path.splitext(path)[1].lower()
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if ext == ".json":
        return json.loads(text)
    if ext == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError as exc:
            raise PolardemError("TOML configs need Python 3.11+; use JSON instead") from exc
        return tomllib.loads(text)
    raise PolardemError(f"unsupported config extension {ext!r} (json/toml)")


def _cmd_bench(args) -> int:
    raw_cfg = _load_config_file(args.config) if args.config else {}
    if args.outdir:
        raw_cfg["outdir"] = args.outdir
    if args.seed is not None:
        raw_cfg["seed"] = args.seed
    if args.methods:
        raw_cfg["methods"] = args.methods.split(",")
    if args.save_images:
        raw_cfg["save_images"] = True
    if args.viz:
        raw_cfg["viz_mode"] = args.viz
    config = ExperimentConfig.from_dict(raw_cfg)
    report, failures = run_experiment(config)

    sys.stdout.write(report.summary_csv())
    for scene_id, message in failures:
        sys.stderr.write(f"scene {scene_id} failed: {message}\n")
    if failures:
        sys.stderr.write(f"{len(failures)} of {len(failures) + len({r['scene'] for r in report.rows})} scenes failed\n")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polardem",
        description="Polarization filter array demosaicking and benchmarking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demosaick-mpfa", help="demosaick a monochrome PFA mosaic")
    p.add_argument("input")
    p.add_argument("outdir")
    p.add_argument("--method", choices=MPFA_METHODS, default="eari")
    _add_pattern_args(p)
    _add_param_args(p)
    p.add_argument("--bit-depth", type=int, default=10)
    p.add_argument("--dump-guide", metavar="PATH", help="also write the guide image")
    p.add_argument("--products", action="store_true", help="also write Stokes/DoP/AoP images")
    p.set_defaults(fn=_cmd_demosaick_mpfa)

    p = sub.add_parser("demosaick-cpfa", help="demosaick a color (quad-Bayer) PFA mosaic")
    p.add_argument("input")
    p.add_argument("outdir")
    p.add_argument("--mpfa-method", choices=CPFA_METHODS, default="eari")
    p.add_argument("--color-method", choices=("bilinear", "gradient"), default="gradient")
    _add_pattern_args(p, cpfa=True)
    p.add_argument("--pattern-file", help="JSON file with block_colors and angle_layout tables")
    _add_param_args(p)
    p.add_argument("--bit-depth", type=int, default=10)
    p.set_defaults(fn=_cmd_demosaick_cpfa)

    p = sub.add_parser("stokes", help="Stokes/DoP/AoP products from four orientation images")
    for name in ("i0", "i45", "i90", "i135"):
        p.add_argument(name)
    p.add_argument("outdir")
    p.add_argument("--bit-depth", type=int, default=10)
    p.set_defaults(fn=_cmd_stokes)

    p = sub.add_parser("viz", help="false-color AoP-DoP rendering")
    for name in ("i0", "i45", "i90", "i135"):
        p.add_argument(name)
    p.add_argument("output")
    p.add_argument("--mode", choices=RENDER_MODES, default="flat")
    p.add_argument("--legend", action="store_true", help="also write a legend image")
    p.add_argument("--bit-depth", type=int, default=10)
    p.set_defaults(fn=_cmd_viz)

    p = sub.add_parser("synth", help="generate a synthetic ground-truth scene")
    p.add_argument("outdir")
    p.add_argument("--kind", choices=SCENE_KINDS, default="step")
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--color", action="store_true", help="12-channel scene")
    p.add_argument("--raw", action="store_true", help="also write the simulated mosaic")
    p.add_argument("--bit-depth", type=int, default=10)
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("bench", help="run a benchmark experiment")
    p.add_argument("--config", help="JSON or TOML configuration file")
    p.add_argument("--outdir")
    p.add_argument("--seed", type=int)
    p.add_argument("--methods", help="comma-separated method override")
    p.add_argument("--save-images", action="store_true")
    p.add_argument("--viz", choices=RENDER_MODES, help="AoP-DoP render mode for saved images")
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PolardemError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
