"""Command-line interface: solve, verify, bench, convert."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import files
from .quantify import ProxyConfig
from .sampler import SamplerConfig
from .separator import GlsConfig
from .strip import SolverConfig, solve

_TOP_PARAMS = {"r_x", "r_c_start", "r_c_end", "m_x", "n_x", "m_c", "n_c", "tl_split"}
_GLS_PARAMS = {"m_upper", "m_lower", "m_decay", "n_workers"}
_SAMPLER_PARAMS = {
    "n_diverse", "n_focused", "n_refine", "focus_radius_ratio",
    "descent_step_init_ratio", "descent_shrink", "descent_step_min_ratio",
    "uniqueness_ratio",
}


def config_from_overrides(overrides: dict, workers: int | None = None) -> SolverConfig:
    """Build a SolverConfig from a flat {parameter_name: value} dict."""
    top, gls, samp, proxy = {}, {}, {}, {}
    for key, value in overrides.items():
        if key in _TOP_PARAMS:
            top[key] = tuple(value) if key == "tl_split" else value
        elif key in _GLS_PARAMS:
            gls[key] = value
        elif key in _SAMPLER_PARAMS:
            samp[key] = value
        elif key == "r_epsilon":
            proxy[key] = value
        else:
            raise ValueError(f"unknown configuration parameter: {key}")
    if workers is not None:
        gls["n_workers"] = workers
    return SolverConfig(
        gls=GlsConfig(**gls),
        sampler=SamplerConfig(**samp),
        proxy=ProxyConfig(**proxy),
        **top,
    )


def _resolve_workers(args) -> int | None:
    if getattr(args, "workers", None) is not None:
        return args.workers
    env = os.environ.get("NEST_THREADS")
    return int(env) if env else None


def _progress_printer(out):
    def emit(phase, epoch, record):
        print(
            f"epoch={epoch} phase={phase} l={record.strip_length:.6f} "
            f"rho={record.density:.4f} t={record.elapsed:.1f}",
            file=out,
        )

    return emit


def _cmd_solve(args) -> int:
    overrides = {}
    if args.config:
        overrides = json.loads(Path(args.config).read_text())
    cfg = config_from_overrides(overrides, _resolve_workers(args))
    instance = files.load_instance(args.instance, inflate_strip=args.inflate_strip)
    record = solve(
        instance,
        cfg,
        time_limit=args.time_limit,
        seed=args.seed,
        emit=_progress_printer(sys.stdout),
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    sol_path = out_dir / f"{instance.name}_s{args.seed}.json"
    files.save_solution(record, args.time_limit, sol_path)
    print(f"solution: {sol_path} (density {record.density:.4f})")
    if args.svg:
        svg_path = sol_path.with_suffix(".svg")
        files.render_svg(instance, record, svg_path)
        print(f"svg: {svg_path}")
    return 0


def _cmd_verify(args) -> int:
    instance = files.load_instance(args.instance, inflate_strip=args.inflate_strip)
    doc = files.load_solution(args.solution)
    report = files.verify_solution(instance, doc)
    print(report.summary())
    declared = float(doc["density"])
    if abs(declared - report.density) > 1e-6 * max(1.0, abs(report.density)):
        print(
            f"density mismatch: file says {declared}, recomputed {report.density}",
            file=sys.stderr,
        )
        return 1
    return 0 if report.feasible else 1


def _cmd_bench(args) -> int:
    instance_paths = sorted(Path(args.directory).glob("*.json"))
    if not instance_paths:
        print(f"no instance files in {args.directory}", file=sys.stderr)
        return 1
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "seed", "rho", "strip_length", "elapsed_s"])
        for path in instance_paths:
            instance = files.load_instance(path, inflate_strip=args.inflate_strip)
            for seed in range(args.runs):
                record = solve(
                    instance,
                    config_from_overrides({}, _resolve_workers(args)),
                    time_limit=args.time_limit,
                    seed=seed,
                )
                report = files.verify_solution(
                    instance, files.solution_to_dict(record, args.time_limit)
                )
                if not report.feasible:
                    print(f"verification failed: {path} seed {seed}", file=sys.stderr)
                    return 1
                writer.writerow(
                    [instance.name, seed, repr(record.density),
                     repr(record.strip_length), f"{record.elapsed:.3f}"]
                )
                fh.flush()
    print(f"wrote {out}")
    return 0


def _cmd_convert(args) -> int:
    if args.orientations == "continuous":
        default_orient = "continuous"
    else:
        default_orient = [float(v) for v in args.orientations.split(",")]
    doc = files.convert_esicup_text(
        Path(args.input).read_text(),
        name=args.name or Path(args.input).stem,
        default_orientations=default_orient if default_orient != "continuous" else (),
        allow_reflection=args.allow_reflection,
    )
    if default_orient == "continuous":
        for item in doc["items"]:
            if not item["allowed_orientations"]:
                item["allowed_orientations"] = "continuous"
    instance = files.instance_from_dict(doc)  # validates
    files.save_instance(instance, args.output)
    print(
        f"wrote {args.output}: {len(instance.items)} shapes, "
        f"{len(instance.copies)} items, total area {instance.total_item_area:.4f}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stripnest", description="2D irregular strip packing solver"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file of parameter overrides")
    p.add_argument("--inflate-strip", action="store_true",
                   help="inflate strip height by 0.01%% (exact-fit instances)")
    p.add_argument("--out", default=".")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", help="verify a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--inflate-strip", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("bench", help="run the benchmark harness over a directory")
    p.add_argument("directory")
    p.add_argument("--time-limit", type=float, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--inflate-strip", action="store_true")
    p.add_argument("--out", default="bench.csv")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("convert", help="convert a legacy text instance to JSON")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--name", default=None)
    p.add_argument("--orientations", default="0,180",
                   help='comma-separated degrees, or "continuous"')
    p.add_argument("--allow-reflection", action="store_true")
    p.set_defaults(fn=_cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (files.FileFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
