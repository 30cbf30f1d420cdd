"""Synthetic scene and measurement generation.

Reproduces the benchmark protocol: 2D points drawn uniformly in the first
image, assigned random depths, kept only when visible in both views; i.i.d.
or per-point Gaussian noise on the second image; optional uniform outliers.
All randomness flows through explicit seeds so runs are repeatable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.transform import Rotation as _ScipyRotation

from .correspondences import CorrespondenceSet
from .crb import GroundTruthScene
from .errors import ConfigError, VisibilityExhausted

# rejection-sampling budget: silent point-count shortfalls would corrupt
# MSE-vs-m sweeps, so running out is a hard error
ATTEMPT_BUDGET_FACTOR = 100

EULER_CONVENTION = "ZYX-intrinsic-degrees"


@dataclass(frozen=True)
class CameraIntrinsics:
    fx: float = 800.0
    fy: float = 800.0
    u0: float = 320.0
    v0: float = 240.0
    width: float = 640.0
    height: float = 480.0

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ConfigError("focal lengths must be positive")
        if self.width <= 0 or self.height <= 0:
            raise ConfigError("image size must be positive")


@dataclass(frozen=True)
class NoiseSpec:
    """Measurement-noise model for the second image.

    kind: "iid_gaussian" (sigma_px), "per_point_uniform_sigma" (one sigma per
    correspondence, uniform in sigma_range_px), or "none". outlier_rate
    replaces that fraction of second-image points with uniform draws over the
    image rectangle.
    """

    kind: str = "iid_gaussian"
    sigma_px: float = 1.0
    sigma_range_px: tuple = (0.5, 1.5)
    outlier_rate: float = 0.0

    def __post_init__(self):
        if self.kind not in ("iid_gaussian", "per_point_uniform_sigma", "none"):
            raise ConfigError(f"unknown noise kind {self.kind!r}")
        if self.sigma_px < 0:
            raise ConfigError("sigma_px must be nonnegative")
        lo, hi = self.sigma_range_px
        if lo < 0 or hi < lo:
            raise ConfigError("sigma_range_px must satisfy 0 <= lo <= hi")
        if not 0.0 <= self.outlier_rate < 1.0:
            raise ConfigError("outlier_rate must be in [0, 1)")


@dataclass(frozen=True)
class SimConfig:
    """Scene recipe: pose, intrinsics, depth profile, point count, noise.

    euler_angles_deg are applied in the Z-Y-X intrinsic convention.
    coplanar_squash scales the depth spread around its midpoint: 1 keeps the
    full range, 0 collapses all depths onto one fronto-parallel plane.
    """

    translation: tuple = (0.05, 0.05, 0.05)
    euler_angles_deg: tuple = (20.0, 20.0, 20.0)
    intrinsics: CameraIntrinsics = field(default_factory=CameraIntrinsics)
    depth_range: tuple = (1.0, 5.0)
    point_count: int = 1000
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    coplanar_squash: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.depth_range[0] <= 0 or self.depth_range[1] < self.depth_range[0]:
            raise ConfigError("depth_range must satisfy 0 < min <= max")
        if self.point_count < 1:
            raise ConfigError("point_count must be >= 1")
        if not 0.0 <= self.coplanar_squash <= 1.0:
            raise ConfigError("coplanar_squash must be in [0, 1]")

    def rotation(self):
        return _ScipyRotation.from_euler(
            "ZYX", self.euler_angles_deg, degrees=True
        ).as_matrix()


@dataclass(frozen=True)
class SimScene:
    """Realized scene: 3D points (first-camera frame) plus the camera pair."""

    points3d: np.ndarray
    rotation: np.ndarray
    translation: np.ndarray
    intrinsics: CameraIntrinsics

    def __len__(self):
        return self.points3d.shape[0]


def generate_scene(cfg: SimConfig) -> SimScene:
    """Sample exactly cfg.point_count points visible in both cameras.

    Deterministic under cfg.seed. Raises VisibilityExhausted when the
    rejection budget (100x the requested count) runs out.
    """
    rng = np.random.default_rng(cfg.seed)
    R = cfg.rotation()
    t = np.asarray(cfg.translation, dtype=float)
    intr = cfg.intrinsics

    d_lo, d_hi = cfg.depth_range
    mid = 0.5 * (d_lo + d_hi)
    half = 0.5 * (d_hi - d_lo) * cfg.coplanar_squash

    m = cfg.point_count
    budget = ATTEMPT_BUDGET_FACTOR * m
    drawn = 0
    chunks = []
    found = 0
    while found < m and drawn < budget:
        nb = min(max(2 * (m - found), 64), budget - drawn)
        drawn += nb
        px = rng.uniform([0.0, 0.0], [intr.width, intr.height], (nb, 2))
        depth = rng.uniform(mid - half, mid + half, nb) if half > 0 else np.full(nb, mid)
        y = pixels_to_normalized(px, intr)
        x = depth[:, None] * np.hstack([y, np.ones((nb, 1))])
        x2 = x @ R.T + t
        zpx = normalized_to_pixels(x2[:, :2] / x2[:, 2:3], intr)
        visible = (
            (x2[:, 2] > 0)
            & (zpx[:, 0] >= 0.0)
            & (zpx[:, 0] <= intr.width)
            & (zpx[:, 1] >= 0.0)
            & (zpx[:, 1] <= intr.height)
        )
        take = x[visible][: m - found]
        chunks.append(take)
        found += take.shape[0]
    if found < m:
        raise VisibilityExhausted(
            f"found {found}/{m} visible points within {budget} draws; "
            "pose or frustum overlap too extreme"
        )
    return SimScene(
        points3d=np.vstack(chunks),
        rotation=R,
        translation=t,
        intrinsics=intr,
    )


def rescale_translation(scene: SimScene, norm: float) -> SimScene:
    """Same 3D points and bearing, new baseline length.

    Supports controlled translation-length sweeps (depths fixed). The
    visibility guarantee of the original scene is only approximate after
    rescaling; keep norms moderate relative to the scene depth.
    """
    t = scene.translation
    n = np.linalg.norm(t)
    if n == 0:
        raise ValueError("cannot rescale a zero translation")
    return replace(scene, translation=t * (norm / n))


def make_correspondences(scene: SimScene, noise: NoiseSpec, seed: int):
    """Project the scene and apply the noise model; returns (set, truth).

    First-image points are exact; Gaussian noise (converted from pixels to
    normalized units by the focal lengths) lands on the second image, and
    outliers replace second-image points with uniform draws over the image
    rectangle. truth.sigma2 carries the noise variance the Cramer-Rao bound
    should be evaluated with: sigma^2 for i.i.d. noise, and the effective
    value 1 / E[1/sigma_i^2] = lo*hi under per-point uniform sigmas.
    """
    rng = np.random.default_rng(seed)
    intr = scene.intrinsics
    x = scene.points3d
    m = x.shape[0]
    y = x[:, :2] / x[:, 2:3]
    x2 = x @ scene.rotation.T + scene.translation
    z_exact = x2[:, :2] / x2[:, 2:3]

    px_to_norm = np.array([1.0 / intr.fx, 1.0 / intr.fy])
    if noise.kind == "none":
        z = z_exact.copy()
        sigma2 = 0.0
    elif noise.kind == "iid_gaussian":
        z = z_exact + rng.standard_normal((m, 2)) * (noise.sigma_px * px_to_norm)
        sigma2 = noise.sigma_px**2 / (intr.fx * intr.fy)
    else:  # per_point_uniform_sigma
        lo, hi = noise.sigma_range_px
        sig_px = rng.uniform(lo, hi, m)
        z = z_exact + rng.standard_normal((m, 2)) * (sig_px[:, None] * px_to_norm)
        # harmonic-mean variance: E[1/sigma^2] over U[lo, hi] is 1/(lo*hi)
        sigma2 = (lo * hi) / (intr.fx * intr.fy)

    if noise.outlier_rate > 0.0:
        bad = rng.random(m) < noise.outlier_rate
        n_bad = int(bad.sum())
        corner_lo = pixels_to_normalized(np.array([0.0, 0.0]), intr)
        corner_hi = pixels_to_normalized(np.array([intr.width, intr.height]), intr)
        z[bad] = rng.uniform(corner_lo, corner_hi, (n_bad, 2))

    t = scene.translation
    t_norm = float(np.linalg.norm(t))
    bearing = t / t_norm if t_norm > 0 else np.array([0.0, 0.0, 1.0])
    truth = GroundTruthScene(
        rotation=scene.rotation,
        bearing=bearing,
        translation_norm=t_norm,
        first_image_points=y,
        depths=x[:, 2].copy(),
        sigma2=sigma2,
    )
    return CorrespondenceSet(y, z), truth


def coplanarity_statistic(points3d) -> float:
    """Smallest eigenvalue of the averaged homogeneous scatter matrix.

    Zero exactly when the points lie on a common plane.
    """
    x = np.atleast_2d(np.asarray(points3d, dtype=float))
    if x.shape[0] < 4:
        raise ValueError("need at least 4 points")
    xh = np.hstack([x, np.ones((x.shape[0], 1))])
    Xbar = xh.T @ xh / x.shape[0]
    return float(np.linalg.eigvalsh(0.5 * (Xbar + Xbar.T))[0])


def pixels_to_normalized(p, intr: CameraIntrinsics):
    """Pinhole unprojection: [(u - u0)/fx, (v - v0)/fy]."""
    p = np.asarray(p, dtype=float)
    return (p - np.array([intr.u0, intr.v0])) / np.array([intr.fx, intr.fy])


def normalized_to_pixels(q, intr: CameraIntrinsics):
    """Inverse of pixels_to_normalized."""
    q = np.asarray(q, dtype=float)
    return q * np.array([intr.fx, intr.fy]) + np.array([intr.u0, intr.v0])
