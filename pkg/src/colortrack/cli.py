"""Command-line interface: design, segment, track, clock, sweep, render, bench."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import config as cfgmod
from . import harness, imaging, segmentation
from .control import LoopSpec, PlantModel, design_gains
from .harness import Scenario, run_illumination_sweep, run_scenario
from .plant import CameraPose
from .region import ScanParams, locate


def _color(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected R,G,B")
    return tuple(parts)


def _scenario_from_args(args) -> Scenario:
    values = {}
    if getattr(args, "config", None):
        values.update(cfgmod.parse_config(args.config))
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, _, val = item.partition("=")
        values[key.strip()] = val.strip()
    return cfgmod.scenario_from_config(values)


def _load_frame(args) -> imaging.Frame:
    if args.image.endswith(".rgb565"):
        if args.width is None or args.height is None:
            raise ValueError("raw .rgb565 input needs --width and --height")
        return imaging.read_rgb565(args.image, args.width, args.height)
    return imaging.read_ppm(args.image)


def cmd_design(args) -> int:
    gains, diag = design_gains(PlantModel(args.k, args.tau),
                               LoopSpec(args.ts, args.po))
    print(f"kp: {gains.kp:.6g}")
    print(f"ki: {gains.ki:.6g}")
    print(f"xi: {diag.xi:.6g}")
    print(f"wn: {diag.wn:.6g}")
    print(f"poles: {diag.poles[0]:.6g}, {diag.poles[1]:.6g}")
    if args.csv:
        with open(args.csv, "w") as f:
            f.write("kp,ki,xi,wn\n")
            f.write("%.9g,%.9g,%.9g,%.9g\n"
                    % (gains.kp, gains.ki, diag.xi, diag.wn))
    return 0


def cmd_segment(args) -> int:
    frame = _load_frame(args)
    threshold = segmentation.threshold_from_pick(
        args.pick, args.mode, rgb_margin=args.rgb_margin,
        chroma_margin=args.chroma_margin, i_min=args.i_min)
    if args.mode == "chroma":
        mask = segmentation.segment_chroma(frame, threshold)
    else:
        mask = segmentation.segment_rgb(frame, threshold)
    if args.mask_out:
        segmentation.write_pbm(mask, args.mask_out)
    if args.words_out:
        segmentation.write_mask_words(mask, args.words_out)
    reg = locate(mask, ScanParams(args.min_width))
    if reg is None:
        print("no region found")
    else:
        print(reg.report_line())
    return 0


def _run_and_save(scenario: Scenario, args) -> harness.TrackingMetrics:
    rec, metrics = run_scenario(scenario)
    if args.csv:
        harness.write_csv(rec, args.csv)
    if args.report:
        harness.write_report(metrics, args.report)
    return metrics


def cmd_track(args) -> int:
    scenario = _scenario_from_args(args)
    metrics = _run_and_save(scenario, args)
    for line in metrics.report_lines():
        print(line)
    return 0


def cmd_clock(args) -> int:
    scenario = _scenario_from_args(args)
    radius_deg = args.radius_px / scenario.intrinsics.ppd_x
    scenario = replace(
        scenario, kind="clock_motion",
        motion=harness.ObjectMotion(kind="circular", radius=radius_deg,
                                    period=args.period))
    metrics = _run_and_save(scenario, args)
    print(f"mean_radius_px: {metrics.mean_radius:.6g}")
    print(f"radius_std_px: {metrics.radius_std:.6g}")
    print(f"lost_frames: {metrics.lost_frames}")
    return 0


def cmd_sweep(args) -> int:
    scenario = _scenario_from_args(args)
    result = run_illumination_sweep(scenario, tuple(args.levels))
    lines = result.report_lines()
    for line in lines:
        print(line)
    if args.out:
        with open(args.out, "w") as f:
            f.write("\n".join(lines) + "\n")
    return 0


def cmd_render(args) -> int:
    scenario = _scenario_from_args(args)
    frame = imaging.render(scenario.scene_at(args.time), CameraPose(),
                           scenario.intrinsics)
    if args.out.endswith(".rgb565"):
        imaging.write_rgb565(frame, args.out)
    else:
        imaging.write_ppm(frame, args.out)
    print(f"wrote {frame.width}x{frame.height} frame to {args.out}")
    return 0


def cmd_bench(args) -> int:
    scenario = Scenario()
    frame = imaging.render(scenario.scene_at(0.0), CameraPose(),
                           scenario.intrinsics)
    results = harness.bench_segmentation(
        frame, scenario.picked_threshold("rgb"),
        scenario.picked_threshold("chroma"), args.iterations)
    for name, r in results.items():
        print("%s: %.4g px/s (%.3g fps at 320x240)"
              % (name, r["pixels_per_s"], r["fps_qvga"]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colortrack",
        description="Color-object detection, location, and tracking simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="PI gains from pole placement")
    p.add_argument("--k", type=float, required=True, help="plant gain")
    p.add_argument("--tau", type=float, required=True, help="time constant, s")
    p.add_argument("--ts", type=float, required=True, help="settling time, s")
    p.add_argument("--po", type=float, required=True, help="overshoot, %%")
    p.add_argument("--csv", help="also write results as CSV")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("segment", help="segment an image and report the region")
    p.add_argument("image", help="PPM (P6) or raw .rgb565 input")
    p.add_argument("--width", type=int, help="raw input width")
    p.add_argument("--height", type=int, help="raw input height")
    p.add_argument("--pick", type=_color, required=True,
                   help="picked color R,G,B (8-bit)")
    p.add_argument("--mode", choices=("rgb", "chroma"), default="chroma")
    p.add_argument("--rgb-margin", type=int, default=24)
    p.add_argument("--chroma-margin", type=float, default=0.05)
    p.add_argument("--i-min", type=int, default=30)
    p.add_argument("--min-width", type=int, default=3)
    p.add_argument("--mask-out", help="write mask as PBM (P4)")
    p.add_argument("--words-out", help="write raw packed mask words")
    p.set_defaults(func=cmd_segment)

    def add_scenario_args(p):
        p.add_argument("--config", help="flat key = value scenario file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config value (repeatable)")
        p.add_argument("--csv", help="write per-frame trajectory CSV")
        p.add_argument("--report", help="write metrics report")

    p = sub.add_parser("track", help="closed-loop tracking scenario")
    add_scenario_args(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("clock", help="circular motion with tracking disabled")
    add_scenario_args(p)
    p.add_argument("--radius-px", type=float, default=87.57,
                   help="circle radius in pixels")
    p.add_argument("--period", type=float, default=3.82,
                   help="seconds per revolution")
    p.set_defaults(func=cmd_clock)

    p = sub.add_parser("sweep", help="illumination sweep, both segmenters")
    p.add_argument("--config", help="flat key = value scenario file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--levels", type=float, nargs="+",
                   default=[1.0, 0.8, 0.6, 0.4])
    p.add_argument("--out", help="write the sweep table to a file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="render one synthetic frame")
    p.add_argument("--config", help="flat key = value scenario file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--time", type=float, default=0.0,
                   help="trajectory time of the frame, s")
    p.add_argument("--out", required=True, help=".ppm or .rgb565 output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="segmentation throughput")
    p.add_argument("--iterations", type=int, default=20)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
