"""Command-line frontend.

Subcommands: synth, estimate, eval, heatmap, spectrum, convert.
Exit codes: 0 success, 1 usage error, 2 data error, 3 non-detection
(estimate only). The ``bpm=`` / ``ND:`` stdout prefixes of ``estimate``
are stable and meant for scripting.
"""

from __future__ import annotations

import argparse
import json
import sys

from .aoi import aoi_summary, compute_heatmap, find_aoi, tile_aoi, write_heatmap_csv
from .errors import EmptyStream, PulsegramError
from .events import SensorGeometry
from .evaluation import evaluate_manifest, format_report, report_to_dict
from .io import load_events, save_events
from .pipeline import PipelineConfig, estimate_hr
from .spectral import bin_events, periodogram, write_periodogram_csv
from .synth import SynthConfig, generate

USAGE_ERROR, DATA_ERROR, ND_EXIT = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _geometry(text: str) -> SensorGeometry:
    try:
        w, h = text.lower().split("x")
        return SensorGeometry(int(w), int(h))
    except (ValueError, PulsegramError):
        raise argparse.ArgumentTypeError(
            f"geometry must look like 1280x720, got {text!r}") from None


def _xy(text: str) -> tuple[int, int]:
    try:
        x, y = text.split(",")
        return int(x), int(y)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected X,Y integers, got {text!r}") from None


def _load_config(args) -> PipelineConfig:
    mapping = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            mapping.update(json.load(f))
    overrides = {
        "aoi_side": getattr(args, "aoi_side", None),
        "tile_side": getattr(args, "tile_side", None),
        "bin_width_s": getattr(args, "bin_width", None),
        "snr_threshold": getattr(args, "snr_threshold", None),
        "min_tile_events": getattr(args, "min_tile_events", None),
        "min_qualified_tiles": getattr(args, "min_qualified_tiles", None),
        "max_iqr_bpm": getattr(args, "max_iqr_bpm", None),
    }
    band = getattr(args, "band", None)
    if band is not None:
        overrides["band_hz"] = band
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig.from_mapping(mapping)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="JSON",
                   help="pipeline config file (flags override its values)")
    p.add_argument("--aoi-side", type=int)
    p.add_argument("--tile-side", type=int)
    p.add_argument("--bin-width", type=float, metavar="SECONDS")
    p.add_argument("--band", type=float, nargs=2, metavar=("LO_HZ", "HI_HZ"))
    p.add_argument("--snr-threshold", type=float)
    p.add_argument("--min-tile-events", type=int)
    p.add_argument("--min-qualified-tiles", type=int)
    p.add_argument("--max-iqr-bpm", type=float)
    p.add_argument("--threads", type=int, default=None,
                   help="tile-level parallelism (default: all cores)")


def build_parser() -> _Parser:
    parser = _Parser(prog="pulsegram",
                     description="Heart-rate estimation from event-camera "
                                 "recordings")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic recording")
    p.add_argument("--pulse-bpm", type=float, required=True)
    p.add_argument("--duration", type=float, default=15.0, metavar="SECONDS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--geometry", type=_geometry, default=SensorGeometry())
    p.add_argument("--spot-center", type=_xy, default=None, metavar="X,Y")
    p.add_argument("--spot-radius", type=int, default=8)
    p.add_argument("--base-rate", type=float, default=200.0,
                   metavar="EV_S_PX")
    p.add_argument("--depth", type=float, default=0.8,
                   help="pulse modulation depth in [0,1]")
    p.add_argument("--background-rate", type=float, default=0.0)
    p.add_argument("--tremor-hz", type=float, default=0.0)
    p.add_argument("--tremor-rate", type=float, default=0.0)
    p.add_argument("--flicker-hz", type=float, default=0.0)
    p.add_argument("--flicker-rate", type=float, default=0.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("estimate", help="estimate heart rate of a recording")
    p.add_argument("input")
    p.add_argument("--geometry", type=_geometry, default=SensorGeometry())
    p.add_argument("--json", metavar="PATH",
                   help="write the full estimate report as JSON")
    _add_config_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("eval", help="evaluate a manifest of recordings")
    p.add_argument("--manifest", required=True)
    p.add_argument("--mode", choices=("oracle", "blind"), required=True)
    p.add_argument("--geometry", type=_geometry, default=SensorGeometry())
    p.add_argument("--json", metavar="PATH")
    _add_config_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("heatmap", help="export per-pixel activation counts")
    p.add_argument("input")
    p.add_argument("--geometry", type=_geometry, default=SensorGeometry())
    p.add_argument("--aoi-side", type=int, default=100)
    p.add_argument("--json", metavar="PATH",
                   help="write a heatmap/AoI summary as JSON")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("spectrum", help="export one tile's periodogram")
    p.add_argument("input")
    p.add_argument("--tile", type=int, required=True, metavar="K")
    p.add_argument("--geometry", type=_geometry, default=SensorGeometry())
    p.add_argument("--aoi-side", type=int, default=100)
    p.add_argument("--tile-side", type=int, default=5)
    p.add_argument("--bin-width", type=float, default=0.02)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("convert", help="rewrite a recording in another format")
    p.add_argument("input")
    p.add_argument("--from", dest="from_fmt", choices=("csv", "paren"),
                   required=True)
    p.add_argument("--to", dest="to_fmt", choices=("csv", "paren"),
                   required=True)
    p.add_argument("--geometry", type=_geometry, default=SensorGeometry())
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    return parser


def cmd_synth(args) -> int:
    cfg = SynthConfig(pulse_hz=args.pulse_bpm / 60.0,
                      duration_s=args.duration,
                      geometry=args.geometry,
                      spot_center=args.spot_center,
                      spot_radius=args.spot_radius,
                      base_rate=args.base_rate,
                      modulation_depth=args.depth,
                      background_rate=args.background_rate,
                      tremor_hz=args.tremor_hz,
                      tremor_rate=args.tremor_rate,
                      flicker_hz=args.flicker_hz,
                      flicker_rate=args.flicker_rate,
                      seed=args.seed)
    stream = generate(cfg)
    save_events(stream, args.output)
    print(f"wrote {len(stream)} events to {args.output}")
    return 0


def cmd_estimate(args) -> int:
    config = _load_config(args)
    stream = load_events(args.input, args.geometry)
    try:
        estimate = estimate_hr(stream, config, threads=args.threads)
    except EmptyStream:
        print("error: recording contains no events", file=sys.stderr)
        return DATA_ERROR
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(estimate.to_dict(), f, indent=2)
    if estimate.detected:
        print(f"bpm={estimate.bpm:.2f}")
        print(f"confidence={estimate.confidence:.3f} "
              f"qualified_tiles={estimate.qualified_tiles}")
        return 0
    print(f"ND:{estimate.nd_reason.value}")
    return ND_EXIT


def cmd_eval(args) -> int:
    config = _load_config(args)
    report = evaluate_manifest(args.manifest, config, mode=args.mode,
                               geometry=args.geometry, threads=args.threads)
    print(format_report(report))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(report_to_dict(report), f, indent=2)
    return 0


def cmd_heatmap(args) -> int:
    stream = load_events(args.input, args.geometry)
    heatmap = compute_heatmap(stream)
    with open(args.output, "w", encoding="utf-8") as f:
        write_heatmap_csv(heatmap, f)
    if args.json:
        aoi = find_aoi(heatmap, args.aoi_side)
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(aoi_summary(heatmap, aoi), f, indent=2)
    print(f"wrote heatmap of {heatmap.total} events to {args.output}")
    return 0


def cmd_spectrum(args) -> int:
    stream = load_events(args.input, args.geometry)
    heatmap = compute_heatmap(stream)
    grid = tile_aoi(find_aoi(heatmap, args.aoi_side), args.tile_side)
    series = bin_events(stream, grid, args.bin_width)
    if not 0 <= args.tile < len(series):
        print(f"error: tile index {args.tile} outside 0..{len(series) - 1}",
              file=sys.stderr)
        return DATA_ERROR
    p = periodogram(series[args.tile])
    with open(args.output, "w", encoding="utf-8") as f:
        write_periodogram_csv(p, f)
    print(f"wrote periodogram of tile {args.tile} to {args.output}")
    return 0


def cmd_convert(args) -> int:
    stream = load_events(args.input, args.geometry, fmt=args.from_fmt)
    save_events(stream, args.output, fmt=args.to_fmt)
    print(f"wrote {len(stream)} events to {args.output}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except PulsegramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
