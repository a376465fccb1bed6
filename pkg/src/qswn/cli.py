"""Command-line entry point: seeded sweeps, analysis, and exports.

Subcommands: sweep, lambda-sweep, analyze, profile, graph.  Configs are
INI files with a [run] section; --set key=value overrides individual
fields and the QSWN_SEED environment variable overrides the config seed.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass

from . import __version__, analysis, svgplot
from .ensemble import SweepConfig, run_sweep, run_lambda_sweep, run_realization
from .graph import generate_small_world


class ConfigError(ValueError):
    pass


def _parse_grid(text: str) -> tuple:
    """Grid syntax: either 'start:stop:step' (inclusive stop) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid: expected start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError("grid: step must be positive")
        count = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    return tuple(float(v) for v in text.split(","))


_KNOWN_KEYS = {
    "scenario", "n", "w", "lambda", "grid", "realizations", "seed",
    "t", "t1", "shortcuts", "observables",
}


def load_config(path: str, overrides=(), seed_flag=None) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    if "run" not in parser:
        raise ConfigError(f"{path}: missing [run] section")
    raw = dict(parser["run"])
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        raw[key.strip()] = val.strip()
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")

    seed = raw.get("seed", "0")
    if "QSWN_SEED" in os.environ:
        seed = os.environ["QSWN_SEED"]
    if seed_flag is not None:
        seed = str(seed_flag)

    def need(key):
        if key not in raw:
            raise ConfigError(f"{path}: missing required field {key!r}")
        return raw[key]

    cfg = {
        "scenario": need("scenario"),
        "n": int(need("n")),
        "grid": _parse_grid(need("grid")),
        "realizations": int(raw.get("realizations", "1")),
        "master_seed": int(seed),
        "w": float(raw.get("w", "0")),
        "lam": float(raw.get("lambda", "0")),
        "fixed_shortcuts": int(raw.get("shortcuts", "0")),
        "t": float(raw.get("t", "1")),
        "t1": float(raw.get("t1", "1")),
        "observables": tuple(
            s.strip() for s in raw.get("observables", "entropy").split(",") if s.strip()
        ),
    }
    return cfg


def _build_sweep_config(cfg: dict, sweep_kind: str) -> SweepConfig:
    try:
        return SweepConfig(sweep_kind=sweep_kind, **cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _emit_sweep_outputs(result, out_dir: str, stage_seconds: dict) -> int:
    os.makedirs(out_dir, exist_ok=True)
    _write(os.path.join(out_dir, "sweep.csv"), result.to_csv())
    manifest = result.manifest(software_version=__version__)
    manifest["wall_clock_per_stage_seconds"] = stage_seconds
    _write(os.path.join(out_dir, "manifest.json"), json.dumps(manifest, indent=2) + "\n")
    pts = result.points
    svg = svgplot.line_plot(
        [p.grid_value for p in pts],
        [p.mean_entropy for p in pts],
        yerr=[p.stderr_entropy for p in pts],
        xlabel="p" if result.config.sweep_kind == "p" else "lambda",
        ylabel="mean scaled entropy",
        title=f"{result.config.scenario} sweep, N={result.config.n}",
    )
    _write(os.path.join(out_dir, "sweep.svg"), svg)
    failures = [(p.grid_value, p.failures) for p in pts if not p.complete]
    if failures:
        for gv, errs in failures:
            for ri, msg in errs:
                print(f"error: grid value {gv}, realization {ri}: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_sweep(args, sweep_kind: str) -> int:
    cfg = load_config(args.config, args.set or (), args.seed)
    config = _build_sweep_config(cfg, sweep_kind)
    t0 = time.perf_counter()
    runner = run_lambda_sweep if sweep_kind == "lambda" else run_sweep
    result = runner(config, workers=args.workers)
    return _emit_sweep_outputs(result, args.out, {"sweep": time.perf_counter() - t0})


@dataclass(frozen=True)
class _CsvPoint:
    grid_value: float
    mean_entropy: float
    stderr_entropy: float
    mean_gap_ratio: float | None
    realizations: int
    complete: bool


@dataclass(frozen=True)
class _CsvSweep:
    points: tuple


def read_sweep_csv(path: str) -> _CsvSweep:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError(f"{path}: empty sweep CSV")
    max_real = max(int(r["realizations"]) for r in rows)
    points = []
    for r in rows:
        mean = float(r["mean_entropy"])
        points.append(
            _CsvPoint(
                grid_value=float(r["grid_value"]),
                mean_entropy=mean,
                stderr_entropy=float(r["stderr_entropy"]),
                mean_gap_ratio=float(r["mean_gap_ratio"]) if r["mean_gap_ratio"] else None,
                realizations=int(r["realizations"]),
                complete=not math.isnan(mean) and int(r["realizations"]) == max_real,
            )
        )
    return _CsvSweep(points=tuple(points))


def cmd_analyze(args) -> int:
    sweep = read_sweep_csv(args.sweep_csv)
    try:
        report, curve, est = analysis.analysis_report(
            sweep,
            degree=args.degree,
            absolute=args.absolute,
            allow_incomplete=args.allow_incomplete,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    _write(os.path.join(args.out, "report.txt"), report)
    _write(os.path.join(args.out, "derivative.csv"), analysis.derivative_csv(curve))
    if est.is_transition:
        print(f"p* = {est.p_star!r} window = [{est.window[0]!r}, {est.window[1]!r}]")
    else:
        print(f"no interior transition ({est.flag_reason})")
    return 0


def cmd_profile(args) -> int:
    cfg = load_config(args.config, args.set or (), args.seed)
    cfg["lam"] = args.lam if args.lam is not None else cfg["lam"]
    cfg["fixed_shortcuts"] = args.shortcuts if args.shortcuts is not None else cfg["fixed_shortcuts"]
    cfg["grid"] = (cfg["lam"],)
    cfg["observables"] = ("entropy", "profiles")
    config = _build_sweep_config(cfg, "lambda")
    if config.scenario != "harper":
        print("error: profile runs require the harper scenario", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    t0 = time.perf_counter()
    seeds, means = [], []
    for ri in range(config.realizations):
        try:
            obs = run_realization(config, 0, ri)
        except Exception as exc:
            print(f"error: grid value {config.lam}, realization {ri}: {exc}", file=sys.stderr)
            return 1
        lines = ["eigenvalue,entropy"]
        lines += [f"{e!r},{s!r}" for e, s in obs["profiles"]]
        _write(os.path.join(args.out, f"profile_r{ri}.csv"), "\n".join(lines) + "\n")
        svg = svgplot.scatter_plot(
            [e for e, _ in obs["profiles"]],
            [s for _, s in obs["profiles"]],
            xlabel="eigenvalue",
            ylabel="scaled state entropy",
            title=f"lambda={config.lam}, L={config.fixed_shortcuts}, realization {ri}",
        )
        _write(os.path.join(args.out, f"profile_r{ri}.svg"), svg)
        seeds.append(list(obs["seed"]))
        means.append(obs["entropy"])
    manifest = {
        "config": {
            "scenario": config.scenario,
            "n": config.n,
            "lambda": config.lam,
            "shortcuts": config.fixed_shortcuts,
            "realizations": config.realizations,
            "t": config.t,
            "t1": config.t1,
        },
        "master_seed": config.master_seed,
        "rng_identifier": "numpy.PCG64/SeedSequence",
        "point_seeds": seeds,
        "mean_entropy_per_realization": means,
        "software_version": __version__,
        "wall_clock_per_stage_seconds": {"profile": time.perf_counter() - t0},
    }
    _write(os.path.join(args.out, "manifest.json"), json.dumps(manifest, indent=2) + "\n")
    return 0


def cmd_graph(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("QSWN_SEED", "0"))
    graph = generate_small_world(args.n, args.shortcuts, seed, strict_endpoints=args.strict)
    text = graph.to_edge_list()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write(os.path.join(args.out, "graph.txt"), text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qswn", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="INI config with a [run] section")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config field")

    p = sub.add_parser("sweep", help="density sweep: entropy vs p")
    common(p)

    p = sub.add_parser("lambda-sweep", help="strength sweep: entropy vs lambda at fixed L")
    common(p)

    p = sub.add_parser("analyze", help="fit a sweep CSV and locate the transition")
    p.add_argument("sweep_csv")
    p.add_argument("--out", required=True)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--absolute", action="store_true",
                   help="seek the peak of |derivative| (lambda sweeps)")
    p.add_argument("--allow-incomplete", action="store_true")

    p = sub.add_parser("profile", help="per-eigenstate entropy scatter at fixed (lambda, L)")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--shortcuts", type=int, default=None)

    p = sub.add_parser("graph", help="generate and dump a small-world graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--shortcuts", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--strict", action="store_true", help="all shortcut endpoints distinct")
    p.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return cmd_sweep(args, "p")
        if args.command == "lambda-sweep":
            return cmd_sweep(args, "lambda")
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "profile":
            return cmd_profile(args)
        if args.command == "graph":
            return cmd_graph(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
