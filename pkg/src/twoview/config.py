"""Plain-text key-value config files.

Format: one `key = value` per line, `#` starts a comment, blank lines are
ignored. Lists are whitespace- or comma-separated. Nested sections use dotted
keys (sim.*, estimator.*). See the README for the full schema.
"""

from __future__ import annotations

from .errors import ConfigError
from .estimator import EstimatorConfig, RansacConfig
from .synth import CameraIntrinsics, NoiseSpec, SimConfig

_NOISE_KINDS = {"iid": "iid_gaussian", "per_point": "per_point_uniform_sigma", "none": "none"}
_NOISE_NAMES = {v: k for k, v in _NOISE_KINDS.items()}

SIM_KEYS = {
    "sim.translation", "sim.euler_deg", "sim.fx", "sim.fy", "sim.u0", "sim.v0",
    "sim.width", "sim.height", "sim.depth_min", "sim.depth_max", "sim.points",
    "sim.noise", "sim.sigma_px", "sim.sigma_lo_px", "sim.sigma_hi_px",
    "sim.outlier_rate", "sim.coplanar_squash", "sim.seed",
}
ESTIMATOR_KEYS = {
    "estimator.gn_iterations", "estimator.degeneracy_ratio_threshold",
    "estimator.kernel_sigmas", "estimator.prefilter", "estimator.ransac_iterations",
    "estimator.ransac_threshold", "estimator.ransac_seed", "estimator.eigenvector_rank",
}
RUN_KEYS = {"experiment", "sweep_values", "trials", "base_seed", "format", "out"}


def parse_kv_file(path) -> dict:
    """Read a key-value file into a flat {key: raw-string} dict."""
    table = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = line.split("=", 1)
            key = key.strip()
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if key in table:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            table[key] = value.strip()
    return table


def _floats(raw, key):
    parts = raw.replace(",", " ").split()
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse numbers from {raw!r}") from exc


def _float(raw, key):
    vals = _floats(raw, key)
    if len(vals) != 1:
        raise ConfigError(f"{key}: expected one number, got {raw!r}")
    return vals[0]


def _int(raw, key):
    value = _float(raw, key)
    if value != int(value):
        raise ConfigError(f"{key}: expected an integer, got {raw!r}")
    return int(value)


def _bool(raw, key):
    lowered = raw.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def sim_config_from_table(table: dict, seed_override=None) -> SimConfig:
    """Build a SimConfig from sim.* keys (all optional; defaults apply)."""
    unknown = {k for k in table if k.startswith("sim.")} - SIM_KEYS
    if unknown:
        raise ConfigError(f"unknown sim keys: {sorted(unknown)}")

    def get(key, default=None):
        return table.get(key, default)

    intr = CameraIntrinsics(
        fx=_float(get("sim.fx", "800"), "sim.fx"),
        fy=_float(get("sim.fy", "800"), "sim.fy"),
        u0=_float(get("sim.u0", "320"), "sim.u0"),
        v0=_float(get("sim.v0", "240"), "sim.v0"),
        width=_float(get("sim.width", "640"), "sim.width"),
        height=_float(get("sim.height", "480"), "sim.height"),
    )
    kind_raw = get("sim.noise", "iid")
    if kind_raw not in _NOISE_KINDS:
        raise ConfigError(f"sim.noise must be one of {sorted(_NOISE_KINDS)}, got {kind_raw!r}")
    noise = NoiseSpec(
        kind=_NOISE_KINDS[kind_raw],
        sigma_px=_float(get("sim.sigma_px", "1.0"), "sim.sigma_px"),
        sigma_range_px=(
            _float(get("sim.sigma_lo_px", "0.5"), "sim.sigma_lo_px"),
            _float(get("sim.sigma_hi_px", "1.5"), "sim.sigma_hi_px"),
        ),
        outlier_rate=_float(get("sim.outlier_rate", "0.0"), "sim.outlier_rate"),
    )
    translation = _floats(get("sim.translation", "0.05 0.05 0.05"), "sim.translation")
    euler = _floats(get("sim.euler_deg", "20 20 20"), "sim.euler_deg")
    if len(translation) != 3 or len(euler) != 3:
        raise ConfigError("sim.translation and sim.euler_deg need exactly 3 numbers")
    seed = seed_override if seed_override is not None else _int(get("sim.seed", "0"), "sim.seed")
    return SimConfig(
        translation=translation,
        euler_angles_deg=euler,
        intrinsics=intr,
        depth_range=(
            _float(get("sim.depth_min", "1.0"), "sim.depth_min"),
            _float(get("sim.depth_max", "5.0"), "sim.depth_max"),
        ),
        point_count=_int(get("sim.points", "1000"), "sim.points"),
        noise=noise,
        coplanar_squash=_float(get("sim.coplanar_squash", "1.0"), "sim.coplanar_squash"),
        seed=seed,
    )


def estimator_config_from_table(table: dict) -> EstimatorConfig:
    unknown = {k for k in table if k.startswith("estimator.")} - ESTIMATOR_KEYS
    if unknown:
        raise ConfigError(f"unknown estimator keys: {sorted(unknown)}")

    def get(key, default):
        return table.get(key, default)

    ransac = RansacConfig(
        max_iterations=_int(get("estimator.ransac_iterations", "100"), "estimator.ransac_iterations"),
        inlier_threshold_normalized=_float(
            get("estimator.ransac_threshold", "0.005"), "estimator.ransac_threshold"
        ),
        seed=_int(get("estimator.ransac_seed", "0"), "estimator.ransac_seed"),
    )
    return EstimatorConfig(
        gn_iterations=_int(get("estimator.gn_iterations", "1"), "estimator.gn_iterations"),
        degeneracy_ratio_threshold=_float(
            get("estimator.degeneracy_ratio_threshold", "1.5"),
            "estimator.degeneracy_ratio_threshold",
        ),
        robust_kernel_threshold_sigmas=_float(
            get("estimator.kernel_sigmas", "3.0"), "estimator.kernel_sigmas"
        ),
        ransac=ransac,
        enable_prefilter=_bool(get("estimator.prefilter", "false"), "estimator.prefilter"),
        init_eigenvector_rank=_int(get("estimator.eigenvector_rank", "0"), "estimator.eigenvector_rank"),
    )


def sim_config_to_table(cfg: SimConfig) -> dict:
    """Flatten a SimConfig back to the key-value schema (for report metadata)."""
    return {
        "sim.translation": " ".join(repr(float(v)) for v in cfg.translation),
        "sim.euler_deg": " ".join(repr(float(v)) for v in cfg.euler_angles_deg),
        "sim.fx": repr(float(cfg.intrinsics.fx)),
        "sim.fy": repr(float(cfg.intrinsics.fy)),
        "sim.u0": repr(float(cfg.intrinsics.u0)),
        "sim.v0": repr(float(cfg.intrinsics.v0)),
        "sim.width": repr(float(cfg.intrinsics.width)),
        "sim.height": repr(float(cfg.intrinsics.height)),
        "sim.depth_min": repr(float(cfg.depth_range[0])),
        "sim.depth_max": repr(float(cfg.depth_range[1])),
        "sim.points": str(cfg.point_count),
        "sim.noise": _NOISE_NAMES[cfg.noise.kind],
        "sim.sigma_px": repr(float(cfg.noise.sigma_px)),
        "sim.sigma_lo_px": repr(float(cfg.noise.sigma_range_px[0])),
        "sim.sigma_hi_px": repr(float(cfg.noise.sigma_range_px[1])),
        "sim.outlier_rate": repr(float(cfg.noise.outlier_rate)),
        "sim.coplanar_squash": repr(float(cfg.coplanar_squash)),
        "sim.seed": str(cfg.seed),
    }


def estimator_config_to_table(cfg: EstimatorConfig) -> dict:
    return {
        "estimator.gn_iterations": str(cfg.gn_iterations),
        "estimator.degeneracy_ratio_threshold": repr(float(cfg.degeneracy_ratio_threshold)),
        "estimator.kernel_sigmas": repr(float(cfg.robust_kernel_threshold_sigmas)),
        "estimator.prefilter": "true" if cfg.enable_prefilter else "false",
        "estimator.ransac_iterations": str(cfg.ransac.max_iterations),
        "estimator.ransac_threshold": repr(float(cfg.ransac.inlier_threshold_normalized)),
        "estimator.ransac_seed": str(cfg.ransac.seed),
        "estimator.eigenvector_rank": str(cfg.init_eigenvector_rank),
    }
