"""Monte Carlo benchmark harness and report/ingestion plumbing.

Experiments sweep one knob (point count, baseline length, depth squash,
Gauss-Newton count, eigenvector rank, outlier rate) and aggregate rotation /
bearing MSE and bias, the matching constrained Cramer-Rao traces, and
runtime/diagnostic summaries into one MetricSeries per sweep value. Seeds are
derived deterministically from the base seed, so reports are reproducible
byte for byte (timing excluded unless requested).
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .config import estimator_config_to_table, sim_config_to_table
from .correspondences import CorrespondenceSet
from .crb import constrained_crb
from .errors import ConfigError, EstimationError, IoError, ParseError, UnitMismatch
from .estimator import EstimatorConfig, estimate_motion, pure_rotation_statistic
from .synth import (
    EULER_CONVENTION,
    CameraIntrinsics,
    SimConfig,
    generate_scene,
    make_correspondences,
    pixels_to_normalized,
    rescale_translation,
)

EXPERIMENTS = (
    "consistency_sweep",
    "translation_sweep",
    "coplanarity_sweep",
    "gn_count_sweep",
    "eigenvector_ablation",
    "outlier_sweep",
    "noniid_check",
    "single_estimate",
)

# decorrelates the noise stream from the scene stream at equal trial seeds
_NOISE_SEED_SALT = 0x9E3779B97F4A7C15

REPORT_COLUMNS = (
    "sweep_value",
    "mse_rotation",
    "mse_bearing",
    "bias_rotation",
    "bias_bearing",
    "crb_rotation",
    "crb_bearing",
    "mean_runtime_us",
    "mean_degeneracy_ratio",
    "fallback_rate",
    "pure_rotation_stat",
    "effective_trials",
    "failed_trials",
)


@dataclass(frozen=True)
class RunConfig:
    experiment: str = "single_estimate"
    sim: SimConfig = field(default_factory=SimConfig)
    sweep_values: tuple = ()
    trials: int = 1
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    base_seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.experiment != "single_estimate" and not self.sweep_values:
            raise ConfigError(f"{self.experiment} needs nonempty sweep_values")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output_format must be csv or json")


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    rotation_error_frobenius_sq: float
    bearing_error_sq: float
    runtime_microseconds: int
    sigma2_hat: float
    degeneracy_ratio: float
    used_ransac_fallback: bool


@dataclass(frozen=True)
class MetricSeries:
    sweep_value: float
    mse_rotation: float
    mse_bearing: float
    bias_rotation: float
    bias_bearing: float
    crb_rotation: float | None
    crb_bearing: float | None
    mean_runtime_us: float
    mean_degeneracy_ratio: float
    fallback_rate: float
    pure_rotation_stat: float
    effective_trials: int
    failed_trials: int


def mse_bias_metrics(estimates, truth):
    """(MSE_R, MSE_t, Bias_R, Bias_t) over a list of (rotation, bearing).

    MSE_R averages squared Frobenius distances to the true rotation; MSE_t
    averages squared Euclidean distances to the true bearing. The biases sum
    the entrywise absolute deviation of the mean estimate from the truth.
    """
    R_true, t_true = truth
    R_true = np.asarray(R_true, dtype=float)
    t_true = np.asarray(t_true, dtype=float)
    Rs = np.array([np.asarray(R, dtype=float) for R, _ in estimates])
    ts = np.array([np.asarray(t, dtype=float) for _, t in estimates])
    if len(Rs) == 0:
        raise ValueError("need at least one estimate")
    mse_R = float(np.mean(np.sum((Rs - R_true) ** 2, axis=(1, 2))))
    mse_t = float(np.mean(np.sum((ts - t_true) ** 2, axis=1)))
    bias_R = float(np.sum(np.abs(Rs.mean(axis=0) - R_true)))
    bias_t = float(np.sum(np.abs(ts.mean(axis=0) - t_true)))
    return mse_R, mse_t, bias_R, bias_t


def _apply_sweep(cfg: RunConfig, value):
    """Specialize (sim, estimator) for one sweep value."""
    sim, est = cfg.sim, cfg.estimator
    exp = cfg.experiment
    if exp in ("consistency_sweep", "noniid_check"):
        sim = replace(sim, point_count=int(value))
    elif exp == "coplanarity_sweep":
        sim = replace(sim, coplanar_squash=float(value))
    elif exp == "outlier_sweep":
        sim = replace(sim, noise=replace(sim.noise, outlier_rate=float(value)))
    elif exp == "gn_count_sweep":
        est = replace(est, gn_iterations=int(value))
    elif exp == "eigenvector_ablation":
        est = replace(est, init_eigenvector_rank=int(value))
    # translation_sweep rescales per-trial scenes; single_estimate is as-is
    return sim, est


def _run_trial(sim: SimConfig, est_cfg: EstimatorConfig, experiment: str, value, trial_seed: int):
    scene = generate_scene(replace(sim, seed=trial_seed))
    if experiment == "translation_sweep":
        scene = rescale_translation(scene, float(value))
    cset, truth = make_correspondences(scene, sim.noise, seed=trial_seed ^ _NOISE_SEED_SALT)
    start = time.perf_counter_ns()
    est = estimate_motion(cset, est_cfg)
    elapsed_us = (time.perf_counter_ns() - start) // 1000
    record = TrialRecord(
        seed=trial_seed,
        rotation_error_frobenius_sq=float(np.sum((est.rotation - truth.rotation) ** 2)),
        bearing_error_sq=float(np.sum((est.bearing - truth.bearing) ** 2)),
        runtime_microseconds=int(elapsed_us),
        sigma2_hat=est.sigma2_hat,
        degeneracy_ratio=est.degeneracy_ratio,
        used_ransac_fallback=est.used_ransac_fallback,
    )
    stat = pure_rotation_statistic(est.rotation, cset)
    return record, est, truth, stat


def run_monte_carlo(cfg: RunConfig, threads: int = 1):
    """Execute the configured experiment; returns a list of MetricSeries.

    Trial seeds are base_seed XOR trial index (shared across sweep values for
    paired comparisons). The CRB is evaluated once per sweep value on the
    trial-0 truth scene. Failed trials (estimation errors) are excluded from
    the metrics and counted.
    """
    values = cfg.sweep_values if cfg.experiment != "single_estimate" else (0.0,)
    out = []
    for value in values:
        sim, est_cfg = _apply_sweep(cfg, value)
        seeds = [cfg.base_seed ^ k for k in range(cfg.trials)]

        def one(seed, _sim=sim, _est=est_cfg, _v=value):
            try:
                return _run_trial(_sim, _est, cfg.experiment, _v, seed)
            except EstimationError:
                return None

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(one, seeds))
        else:
            results = [one(s) for s in seeds]

        kept = [r for r in results if r is not None]
        failed = len(results) - len(kept)
        if not kept:
            raise EstimationError(
                f"all {cfg.trials} trials failed at sweep value {value!r}"
            )
        records = [r[0] for r in kept]
        estimates = [(r[1].rotation, r[1].bearing) for r in kept]
        truth0 = kept[0][2]
        mse_R, mse_t, bias_R, bias_t = mse_bias_metrics(
            estimates, (truth0.rotation, truth0.bearing)
        )

        crb_R = crb_t = None
        if truth0.sigma2 > 0.0:
            report = constrained_crb(truth0)
            if not report.fisher_singular:
                crb_R, crb_t = report.crb_rotation, report.crb_translation

        out.append(
            MetricSeries(
                sweep_value=float(value),
                mse_rotation=mse_R,
                mse_bearing=mse_t,
                bias_rotation=bias_R,
                bias_bearing=bias_t,
                crb_rotation=crb_R,
                crb_bearing=crb_t,
                mean_runtime_us=float(np.mean([r.runtime_microseconds for r in records])),
                mean_degeneracy_ratio=float(np.mean([r.degeneracy_ratio for r in records])),
                fallback_rate=float(np.mean([r.used_ransac_fallback for r in records])),
                pure_rotation_stat=float(np.mean([r[3] for r in kept])),
                effective_trials=len(kept),
                failed_trials=failed,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Correspondence file ingestion


def ingest_correspondences(path, format="csv", intrinsics: CameraIntrinsics | None = None):
    """Read correspondences from a CSV or JSON file.

    CSV rows are y1, y2, z1, z2 (one correspondence per line; an optional
    non-numeric header line is skipped). JSON is either a list of 4-element
    rows or an object with a "correspondences" field holding one. Values are
    normalized coordinates unless intrinsics are given, in which case they
    are pixels and get unprojected. Coordinates with magnitude above 10 and
    no intrinsics raise UnitMismatch.
    """
    if format == "csv":
        rows = _read_csv_rows(path)
    elif format == "json":
        rows = _read_json_rows(path)
    else:
        raise ConfigError(f"unknown correspondence format {format!r}")
    if not rows:
        raise ParseError(1, "file contains no correspondences")
    arr = np.array(rows, dtype=float)
    y, z = arr[:, :2], arr[:, 2:]
    if intrinsics is None:
        if np.abs(arr).max() > 10.0:
            raise UnitMismatch(
                "coordinate magnitudes exceed 10: looks like pixels; pass intrinsics"
            )
        return CorrespondenceSet(y, z)
    return CorrespondenceSet(
        pixels_to_normalized(y, intrinsics), pixels_to_normalized(z, intrinsics)
    )


def _read_csv_rows(path):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                values = [float(p) for p in parts]
            except ValueError:
                if lineno == 1:
                    continue  # header line
                raise ParseError(lineno, f"cannot parse row {line!r}")
            if len(values) != 4:
                raise ParseError(lineno, f"expected 4 columns, got {len(values)}")
            rows.append(values)
    return rows


def _read_json_rows(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.msg)
    if isinstance(doc, dict):
        doc = doc.get("correspondences")
    if not isinstance(doc, list):
        raise ParseError(1, "expected a list of rows or a 'correspondences' field")
    rows = []
    for i, row in enumerate(doc, start=1):
        if not isinstance(row, (list, tuple)) or len(row) != 4:
            raise ParseError(i, f"row {i} is not a 4-element list")
        try:
            rows.append([float(v) for v in row])
        except (TypeError, ValueError):
            raise ParseError(i, f"row {i} contains non-numeric values")
    return rows


def write_correspondences(cset: CorrespondenceSet, path, format="csv"):
    """Serialize a correspondence set; inverse of ingest_correspondences."""
    if format == "csv":
        lines = ["y1,y2,z1,z2"]
        for i in range(len(cset)):
            lines.append(
                ",".join(
                    repr(float(v))
                    for v in (cset.y[i, 0], cset.y[i, 1], cset.z[i, 0], cset.z[i, 1])
                )
            )
        payload = "\n".join(lines) + "\n"
    elif format == "json":
        rows = [
            [cset.y[i, 0], cset.y[i, 1], cset.z[i, 0], cset.z[i, 1]] for i in range(len(cset))
        ]
        payload = json.dumps({"correspondences": rows}) + "\n"
    else:
        raise ConfigError(f"unknown correspondence format {format!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Report emission


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)  # shortest exact round-trip
    return str(value)


def _series_cells(series: MetricSeries, include_timing: bool):
    return {
        "sweep_value": series.sweep_value,
        "mse_rotation": series.mse_rotation,
        "mse_bearing": series.mse_bearing,
        "bias_rotation": series.bias_rotation,
        "bias_bearing": series.bias_bearing,
        "crb_rotation": series.crb_rotation,
        "crb_bearing": series.crb_bearing,
        "mean_runtime_us": series.mean_runtime_us if include_timing else None,
        "mean_degeneracy_ratio": series.mean_degeneracy_ratio,
        "fallback_rate": series.fallback_rate,
        "pure_rotation_stat": series.pure_rotation_stat,
        "effective_trials": series.effective_trials,
        "failed_trials": series.failed_trials,
    }


def render_report(series_list, cfg: RunConfig, include_timing: bool = False) -> str:
    """Render the report document as a string (csv or json per the config).

    Timing columns are omitted by default so that repeated runs of the same
    config produce byte-identical files.
    """
    if not series_list:
        raise ValueError("series list is empty")
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for s in series_list:
            cells = _series_cells(s, include_timing)
            writer.writerow([_format_cell(cells[c]) for c in REPORT_COLUMNS])
        return buf.getvalue()

    meta = {
        "experiment": cfg.experiment,
        "sweep_values": list(cfg.sweep_values),
        "trials": cfg.trials,
        "base_seed": cfg.base_seed,
        "euler_convention": EULER_CONVENTION,
    }
    meta.update(sim_config_to_table(cfg.sim))
    meta.update(estimator_config_to_table(cfg.estimator))
    rows = []
    for s in series_list:
        cells = _series_cells(s, include_timing)
        rows.append({k: _json_safe(v) for k, v in cells.items()})
    return json.dumps({"config": meta, "series": rows}, indent=2, sort_keys=True) + "\n"


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def emit_report(series_list, cfg: RunConfig, path=None, include_timing: bool = False):
    """Write the rendered report to path (default: cfg.output_path)."""
    target = path or cfg.output_path
    if target is None:
        raise ConfigError("no output path configured")
    payload = render_report(series_list, cfg, include_timing=include_timing)
    try:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IoError(f"cannot write {target}: {exc}") from exc
