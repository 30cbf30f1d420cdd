"""Constrained Cramer-Rao bound for two-view motion estimation.

The Fisher information is taken over xi = [vec(R); t_bar] (12 parameters)
with the per-point depth ratios eliminated through their closed form, then
projected onto the tangent space of the 7 constraint equations (rotation
orthonormality and unit bearing). The resulting bound is directly comparable
to Frobenius-squared rotation MSE and Euclidean-squared bearing MSE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateProjection, RankLoss
from .estimator import _k_terms

PROJECTION_TOL = 1e-14
FISHER_COND_LIMIT = 1e12


@dataclass(frozen=True)
class GroundTruthScene:
    """Noise-free scene description the bound is evaluated at.

    first_image_points are the exact normalized coordinates in the first
    image; depths are the point depths in the first camera (meters). sigma2
    is the measurement-noise variance in normalized units squared (under
    per-point noise, the effective value 1 / mean(1 / sigma_i^2)).
    """

    rotation: np.ndarray
    bearing: np.ndarray
    translation_norm: float
    first_image_points: np.ndarray
    depths: np.ndarray
    sigma2: float

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.first_image_points, dtype=float))
        depths = np.asarray(self.depths, dtype=float)
        if pts.shape[0] != depths.shape[0]:
            raise ValueError("first_image_points and depths must have equal length")
        if (depths <= 0).any():
            raise ValueError("depths must be positive")
        if self.translation_norm < 0:
            raise ValueError("translation_norm must be nonnegative")
        object.__setattr__(self, "first_image_points", pts)
        object.__setattr__(self, "depths", depths)
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=float))
        object.__setattr__(self, "bearing", np.asarray(self.bearing, dtype=float))

    def __len__(self):
        return self.first_image_points.shape[0]


@dataclass(frozen=True)
class CrbReport:
    fisher: np.ndarray
    constrained_fim: np.ndarray | None
    crb_total: float
    crb_rotation: float
    crb_translation: float
    fisher_singular: bool


def _noise_free_measurements(scene: GroundTruthScene):
    """(a, k, v, h, z) arrays of the exact forward model at ground truth."""
    m = len(scene)
    yh = np.hstack([scene.first_image_points, np.ones((m, 1))])
    a = yh @ scene.rotation.T
    k = scene.translation_norm / scene.depths
    v = a + k[:, None] * scene.bearing[None, :]
    h = v[:, 2]
    if (np.abs(h) < PROJECTION_TOL).any():
        raise DegenerateProjection("noise-free projection denominator vanishes")
    z = v[:, :2] / h[:, None]
    return yh, a, k, v, h, z


def _jacobians_xi(scene: GroundTruthScene):
    """Stacked (m, 2, 12) derivatives of the noise-free measurements.

    The depth ratios are functions of the pose through their closed-form
    quotient; differentiating through it yields the nuisance-eliminated
    (profile) Jacobian, evaluated at ground truth.
    """
    m = len(scene)
    t = scene.bearing
    yh, a, k_true, v, h, z = _noise_free_measurements(scene)
    p1, p2, q1, q2, w1, w2, num, den = _k_terms(a, t, z)
    if (np.abs(den) < PROJECTION_TOL).any():
        raise DegenerateProjection("depth-ratio denominator vanishes at ground truth")
    k = num / den  # equals k_true up to rounding

    # d a / d vec(R) is y^h.T kron I3, assembled blockwise: L[:, :, 3b:3b+3] = yh[:, b] * I3
    L = np.zeros((m, 3, 9))
    for b in range(3):
        for r in range(3):
            L[:, r, 3 * b + r] = yh[:, b]

    # rotation block of dk
    dp1 = t[0] * L[:, 2, :] - t[2] * L[:, 0, :]
    dp2 = t[1] * L[:, 2, :] - t[2] * L[:, 1, :]
    dq1 = z[:, 0, None] * L[:, 2, :] - L[:, 0, :]
    dq2 = z[:, 1, None] * L[:, 2, :] - L[:, 1, :]
    dnum = -(dq1 * p1[:, None] + q1[:, None] * dp1 + dq2 * p2[:, None] + q2[:, None] * dp2)
    dden = w1[:, None] * dp1 + w2[:, None] * dp2
    dk_R = (den[:, None] * dnum - num[:, None] * dden) / den[:, None] ** 2
    dv_R = L + t[None, :, None] * dk_R[:, None, :]  # (m, 3, 9)

    # bearing block of dk (t unconstrained here; constraints enter via the nullspace)
    dp1_t = np.stack([a[:, 2], np.zeros(m), -a[:, 0]], axis=1)
    dp2_t = np.stack([np.zeros(m), a[:, 2], -a[:, 1]], axis=1)
    dw1_t = np.stack([-np.ones(m), np.zeros(m), z[:, 0]], axis=1)
    dw2_t = np.stack([np.zeros(m), -np.ones(m), z[:, 1]], axis=1)
    dnum_t = -(dp1_t * q1[:, None] + dp2_t * q2[:, None])
    dden_t = (
        dw1_t * p1[:, None] + w1[:, None] * dp1_t + dw2_t * p2[:, None] + w2[:, None] * dp2_t
    )
    dk_t = (den[:, None] * dnum_t - num[:, None] * dden_t) / den[:, None] ** 2
    dv_t = k[:, None, None] * np.eye(3)[None, :, :] + t[None, :, None] * dk_t[:, None, :]

    dv = np.concatenate([dv_R, dv_t], axis=2)  # (m, 3, 12)
    g = v[:, :2]
    du = (h[:, None, None] * dv[:, :2, :] - g[:, :, None] * dv[:, 2:3, :]) / (
        h[:, None, None] ** 2
    )
    return du


def measurement_jacobian_xi(scene: GroundTruthScene, index: int):
    """2x12 derivative of the i-th noise-free measurement w.r.t. [vec(R); t_bar]."""
    if not 0 <= index < len(scene):
        raise IndexError(f"index {index} out of range for {len(scene)} points")
    return _jacobians_xi(scene)[index]


def fisher_information(scene: GroundTruthScene):
    """12x12 Fisher information: sum of J_i.T J_i / sigma2."""
    if scene.sigma2 <= 0:
        raise ValueError("sigma2 must be positive for a Fisher information")
    du = _jacobians_xi(scene)
    F = np.einsum("mia,mib->ab", du, du) / scene.sigma2
    return 0.5 * (F + F.T)


def constraint_nullspace(rotation, bearing):
    """Constraint Jacobian H (7x12) and an orthonormal nullspace basis U (12x5).

    The 7 constraints are the six orthonormality equations on the rotation
    columns and the unit-norm equation on the bearing, differentiated at the
    given point.
    """
    R = np.asarray(rotation, dtype=float)
    t = np.asarray(bearing, dtype=float)
    c1, c2, c3 = R[:, 0], R[:, 1], R[:, 2]
    z3 = np.zeros(3)
    H = np.vstack([
        np.hstack([2 * c1, z3, z3, z3]),
        np.hstack([c2, c1, z3, z3]),
        np.hstack([c3, z3, c1, z3]),
        np.hstack([z3, 2 * c2, z3, z3]),
        np.hstack([z3, c3, c2, z3]),
        np.hstack([z3, z3, 2 * c3, z3]),
        np.hstack([z3, z3, z3, 2 * t]),
    ])
    if np.linalg.matrix_rank(H) < 7:
        raise RankLoss("constraint Jacobian is rank deficient")
    U = scipy.linalg.null_space(H)
    if U.shape != (12, 5):
        raise RankLoss(f"unexpected nullspace dimension {U.shape}")
    return H, U


def constrained_crb(scene: GroundTruthScene) -> CrbReport:
    """Constrained bound: F_c = U (U.T F U)^-1 U.T, split into R and t traces.

    When the projected information U.T F U is numerically singular (e.g. a
    zero baseline) the bound does not exist; fisher_singular is set and the
    traces are +inf.
    """
    F = fisher_information(scene)
    _, U = constraint_nullspace(scene.rotation, scene.bearing)
    M = U.T @ F @ U
    if not np.isfinite(M).all() or np.linalg.cond(M) > FISHER_COND_LIMIT:
        return CrbReport(
            fisher=F,
            constrained_fim=None,
            crb_total=math.inf,
            crb_rotation=math.inf,
            crb_translation=math.inf,
            fisher_singular=True,
        )
    Fc = U @ np.linalg.inv(M) @ U.T
    crb_rot = float(np.trace(Fc[:9, :9]))
    crb_tr = float(np.trace(Fc[9:, 9:]))
    return CrbReport(
        fisher=F,
        constrained_fim=Fc,
        crb_total=crb_rot + crb_tr,
        crb_rotation=crb_rot,
        crb_translation=crb_tr,
        fisher_singular=False,
    )
