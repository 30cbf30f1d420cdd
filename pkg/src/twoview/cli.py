"""Command-line front end.

Subcommands: simulate (write a correspondence file from a scene config),
estimate (run the estimator on a correspondence file, print JSON), crb (print
the constrained bound for a scene config), bench (run a Monte Carlo
experiment and write a report). Exit codes: 0 success, 2 config error,
3 data error, 4 estimation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .bench import (
    EXPERIMENTS,
    RunConfig,
    emit_report,
    ingest_correspondences,
    run_monte_carlo,
    write_correspondences,
)
from .config import (
    estimator_config_from_table,
    parse_kv_file,
    sim_config_from_table,
    RUN_KEYS,
    SIM_KEYS,
    ESTIMATOR_KEYS,
)
from .crb import constrained_crb
from .errors import (
    ConfigError,
    EstimationError,
    IoError,
    ParseError,
    TwoViewError,
    UnitMismatch,
)
from .estimator import estimate_motion
from .synth import EULER_CONVENTION, CameraIntrinsics, generate_scene, make_correspondences

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_ESTIMATION = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="twoview",
        description="Two-view camera motion estimation benchmark tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic correspondence file")
    sim.add_argument("--config", required=True, help="scene config file (sim.* keys)")
    sim.add_argument("--seed", type=int, default=None, help="override sim.seed")
    sim.add_argument("--out", required=True, help="output correspondence file")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--truth-out", default=None, help="also write ground truth JSON")

    est = sub.add_parser("estimate", help="estimate relative pose from a correspondence file")
    est.add_argument("--in", dest="input", required=True, help="correspondence file")
    est.add_argument("--format", choices=("csv", "json"), default="csv")
    est.add_argument("--config", default=None, help="estimator config file (estimator.* keys)")
    est.add_argument("--gn-iters", type=int, default=None, help="override Gauss-Newton steps")
    est.add_argument("--prefilter", action="store_true", help="enable RANSAC prefilter")
    est.add_argument("--pixels", action="store_true", help="input is in pixels")
    est.add_argument("--fx", type=float, default=800.0)
    est.add_argument("--fy", type=float, default=800.0)
    est.add_argument("--u0", type=float, default=320.0)
    est.add_argument("--v0", type=float, default=240.0)
    est.add_argument("--out", default=None, help="write the JSON here instead of stdout")

    crb = sub.add_parser("crb", help="print the constrained Cramer-Rao bound for a scene config")
    crb.add_argument("--config", required=True, help="scene config file (sim.* keys)")
    crb.add_argument("--seed", type=int, default=None, help="override sim.seed")
    crb.add_argument("--out", default=None, help="write the JSON here instead of stdout")

    bench = sub.add_parser("bench", help="run a Monte Carlo experiment and write a report")
    bench.add_argument("--config", required=True, help="run config file")
    bench.add_argument("--seed", type=int, default=None, help="override base_seed")
    bench.add_argument("--out", default=None, help="override the report path")
    bench.add_argument("--format", choices=("csv", "json"), default=None)
    bench.add_argument("--gn-iters", type=int, default=None)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument(
        "--timing",
        action="store_true",
        help="include measured runtimes (breaks byte-identical reruns)",
    )
    return parser


def _load_run_config(path) -> RunConfig:
    table = parse_kv_file(path)
    known = RUN_KEYS | SIM_KEYS | ESTIMATOR_KEYS
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"unknown keys in {path}: {sorted(unknown)}")
    sweep_raw = table.get("sweep_values", "")
    sweep = tuple(float(v) for v in sweep_raw.replace(",", " ").split()) if sweep_raw else ()
    experiment = table.get("experiment", "single_estimate")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {experiment!r}")
    trials_raw = table.get("trials", "1")
    try:
        trials = int(trials_raw)
    except ValueError:
        raise ConfigError(f"trials: expected integer, got {trials_raw!r}")
    base_raw = table.get("base_seed", "0")
    try:
        base_seed = int(base_raw)
    except ValueError:
        raise ConfigError(f"base_seed: expected integer, got {base_raw!r}")
    fmt = table.get("format", "csv")
    return RunConfig(
        experiment=experiment,
        sim=sim_config_from_table(table),
        sweep_values=sweep,
        trials=trials,
        estimator=estimator_config_from_table(table),
        base_seed=base_seed,
        output_path=table.get("out"),
        output_format=fmt,
    )


def _pose_estimate_json(est) -> dict:
    return {
        "rotation": [[float(v) for v in row] for row in est.rotation],
        "bearing": [float(v) for v in est.bearing],
        "sigma2_hat": est.sigma2_hat,
        "degeneracy_ratio": _finite_or_none(est.degeneracy_ratio),
        "used_ransac_fallback": bool(est.used_ransac_fallback),
        "inlier_count": int(est.inlier_mask.sum()),
        "inlier_mask": [bool(b) for b in est.inlier_mask],
        "objective_value": est.objective_value,
        "gn_steps_run": est.gn_steps_run,
    }


def _finite_or_none(x):
    import math

    return x if math.isfinite(x) else None


def _emit_json(doc, out_path):
    payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _cmd_simulate(args):
    table = parse_kv_file(args.config)
    unknown = set(table) - SIM_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in {args.config}: {sorted(unknown)}")
    cfg = sim_config_from_table(table, seed_override=args.seed)
    scene = generate_scene(cfg)
    cset, truth = make_correspondences(scene, cfg.noise, seed=cfg.seed)
    write_correspondences(cset, args.out, format=args.format)
    if args.truth_out:
        _emit_json(
            {
                "euler_convention": EULER_CONVENTION,
                "rotation": [[float(v) for v in row] for row in truth.rotation],
                "bearing": [float(v) for v in truth.bearing],
                "translation_norm": truth.translation_norm,
                "sigma2": truth.sigma2,
                "first_image_points": truth.first_image_points.tolist(),
                "depths": truth.depths.tolist(),
            },
            args.truth_out,
        )
    return EXIT_OK


def _cmd_estimate(args):
    if args.config:
        table = parse_kv_file(args.config)
        unknown = set(table) - ESTIMATOR_KEYS
        if unknown:
            raise ConfigError(f"unknown keys in {args.config}: {sorted(unknown)}")
        cfg = estimator_config_from_table(table)
    else:
        cfg = estimator_config_from_table({})
    if args.gn_iters is not None:
        cfg = replace(cfg, gn_iterations=args.gn_iters)
    if args.prefilter:
        cfg = replace(cfg, enable_prefilter=True)
    intr = None
    if args.pixels:
        # width/height are not used by the unprojection; any positive extent works
        intr = CameraIntrinsics(fx=args.fx, fy=args.fy, u0=args.u0, v0=args.v0,
                                width=max(2 * args.u0, 1.0), height=max(2 * args.v0, 1.0))
    cset = ingest_correspondences(args.input, format=args.format, intrinsics=intr)
    est = estimate_motion(cset, cfg)
    _emit_json(_pose_estimate_json(est), args.out)
    return EXIT_OK


def _cmd_crb(args):
    table = parse_kv_file(args.config)
    unknown = set(table) - SIM_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in {args.config}: {sorted(unknown)}")
    cfg = sim_config_from_table(table, seed_override=args.seed)
    if cfg.noise.kind == "none":
        raise ConfigError("crb needs a noise model (sim.noise = iid or per_point)")
    scene = generate_scene(cfg)
    _, truth = make_correspondences(scene, cfg.noise, seed=cfg.seed)
    report = constrained_crb(truth)
    doc = {
        "euler_convention": EULER_CONVENTION,
        "point_count": len(truth),
        "sigma2": truth.sigma2,
        "crb_total": _finite_or_none(report.crb_total),
        "crb_rotation": _finite_or_none(report.crb_rotation),
        "crb_translation": _finite_or_none(report.crb_translation),
        "fisher_singular": report.fisher_singular,
        "fisher": report.fisher.tolist(),
    }
    _emit_json(doc, args.out)
    return EXIT_OK


def _cmd_bench(args):
    cfg = _load_run_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.format is not None:
        cfg = replace(cfg, output_format=args.format)
    if args.gn_iters is not None:
        cfg = replace(cfg, estimator=replace(cfg.estimator, gn_iterations=args.gn_iters))
    out = args.out or cfg.output_path
    if out is None:
        raise ConfigError("no report path: set 'out' in the config or pass --out")
    series = run_monte_carlo(cfg, threads=max(1, args.threads))
    emit_report(series, cfg, path=out, include_timing=args.timing)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "estimate": _cmd_estimate,
        "crb": _cmd_crb,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, UnitMismatch, IoError, FileNotFoundError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EstimationError as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except TwoViewError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION


if __name__ == "__main__":
    sys.exit(main())
