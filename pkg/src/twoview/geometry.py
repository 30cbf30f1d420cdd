"""Exact two-view geometry primitives.

Conventions: the first camera frame is the world frame; a 3D point x (in the
first frame) has coordinates R x + t in the second frame. Image points are
normalized (focal length 1), and the bearing t is reported as a unit vector
because the translation scale is unobservable from two views.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .correspondences import CorrespondenceSet
from .errors import (
    AmbiguousCheirality,
    DegenerateRays,
    DepthBehindCamera,
    NotEssential,
    RankDeficient,
)

# Pi/2 rotation about e3; pairs the twisted/untwisted rotations in the
# essential decomposition.
_RZ90 = np.array([
    [0.0, -1.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0],
])

ROTATION_TOL = 1e-9
UNIT_TOL = 1e-12
GIMBAL_TOL = 1e-8
PARALLEL_RAY_TOL = 1e-8


class SphereChart(NamedTuple):
    """Elevation/azimuth chart anchor on the unit sphere."""

    alpha0: float
    beta0: float


class PoseHypothesis(NamedTuple):
    rotation: np.ndarray
    bearing: np.ndarray


def hat(v):
    """Skew-symmetric matrix of v, i.e. hat(v) @ w == cross(v, w)."""
    v = np.asarray(v, dtype=float)
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def hat_stack(v):
    """hat() applied along the first axis of an (m, 3) array -> (m, 3, 3)."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def exp_so3(s):
    """Rodrigues closed form of the matrix exponential of hat(s)."""
    s = np.asarray(s, dtype=float)
    theta2 = float(s @ s)
    theta = np.sqrt(theta2)
    K = hat(s)
    if theta < 1e-8:
        # Taylor terms keep full precision through the sin/cos removable zeros.
        c1 = 1.0 - theta2 / 6.0
        c2 = 0.5 - theta2 / 24.0
    else:
        c1 = np.sin(theta) / theta
        c2 = (1.0 - np.cos(theta)) / theta2
    return np.eye(3) + c1 * K + c2 * (K @ K)


def require_rotation(R, tol=ROTATION_TOL):
    """Validate the SO(3) invariants; returns R as a float array."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got {R.shape}")
    if np.linalg.norm(R.T @ R - np.eye(3)) > tol:
        raise ValueError("matrix is not orthogonal within tolerance")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise ValueError("matrix determinant is not +1 within tolerance")
    return R


def require_unit_bearing(t, tol=1e-6):
    """Validate unit norm; returns t renormalized to machine precision."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3,):
        raise ValueError(f"bearing must be a 3-vector, got {t.shape}")
    n = np.linalg.norm(t)
    if abs(n - 1.0) > tol:
        raise ValueError(f"bearing norm {n} is not 1 within {tol}")
    return t / n


def essential_from_pose(R, t_bar):
    """E = hat(t_bar) @ R; satisfies z^h.T @ E @ y^h = 0 on noise-free pairs."""
    return hat(t_bar) @ np.asarray(R, dtype=float)


def forward_measurement(y, R, t_bar, k):
    """Noise-free second-image point for first-image point y and depth ratio k.

    k is ||t|| divided by the point's depth in the first camera. Raises
    DepthBehindCamera when the point is not in front of the second camera.
    """
    y = np.asarray(y, dtype=float)
    yh = np.array([y[0], y[1], 1.0])
    v = np.asarray(R, dtype=float) @ yh + k * np.asarray(t_bar, dtype=float)
    if v[2] <= 0.0:
        raise DepthBehindCamera(f"second-camera depth {v[2]} is not positive")
    return v[:2] / v[2]


def sphere_chart(t_bar) -> SphereChart:
    """Chart anchor (alpha0, beta0) with chart_point(chart, 0, 0) == t_bar.

    At the poles (|t3| >= 1 - 1e-8) any azimuth is valid; beta0 = 0 by
    convention so charts are deterministic.
    """
    t = np.asarray(t_bar, dtype=float)
    t3 = min(1.0, max(-1.0, t[2]))
    alpha0 = np.arcsin(t3)
    if abs(t3) >= 1.0 - GIMBAL_TOL:
        beta0 = 0.0
    else:
        beta0 = np.arctan2(t[1], t[0])
        if beta0 <= -np.pi:
            beta0 = np.pi  # atan2(-0.0, x<0) returns -pi; keep beta0 in (-pi, pi]
    return SphereChart(float(alpha0), float(beta0))


def chart_point(chart: SphereChart, alpha, beta):
    """Unit vector at offsets (alpha, beta) from the chart anchor."""
    a = chart.alpha0 + alpha
    b = chart.beta0 + beta
    ca = np.cos(a)
    return np.array([ca * np.cos(b), ca * np.sin(b), np.sin(a)])


def chart_tangents(chart: SphereChart):
    """Derivatives of chart_point w.r.t. (alpha, beta) at offset zero."""
    ca, sa = np.cos(chart.alpha0), np.sin(chart.alpha0)
    cb, sb = np.cos(chart.beta0), np.sin(chart.beta0)
    d_alpha = np.array([-sa * cb, -sa * sb, ca])
    d_beta = np.array([-ca * sb, ca * cb, 0.0])
    return d_alpha, d_beta


def decompose_essential(E, pattern_tol=None):
    """Four (R, t_bar) candidates from an essential matrix via SVD.

    The input is projected onto the nearest valid essential matrix (singular
    values set to (1, 1, 0)) before extraction, so estimates that are only
    approximately essential are accepted. Pass pattern_tol to additionally
    enforce the {s, s, 0} singular-value pattern (relative, after
    normalization) and raise NotEssential on violation.
    """
    E = np.asarray(E, dtype=float)
    U, s, Vt = np.linalg.svd(E)
    if s[0] <= 0.0 or s[1] <= 1e-9 * s[0]:
        raise RankDeficient(f"singular values {s} have rank < 2")
    if pattern_tol is not None:
        sn = s / s[0]
        if abs(sn[0] - sn[1]) > pattern_tol or sn[2] > pattern_tol:
            raise NotEssential(f"normalized singular values {sn} violate (1, 1, 0)")
    # SVD sign ambiguity: force det +1 so the candidates are proper rotations.
    if np.linalg.det(U) < 0:
        U = U.copy()
        U[:, 2] = -U[:, 2]
    if np.linalg.det(Vt) < 0:
        Vt = Vt.copy()
        Vt[2, :] = -Vt[2, :]
    R1 = U @ _RZ90 @ Vt
    R2 = U @ _RZ90.T @ Vt
    t = U[:, 2].copy()
    return [
        PoseHypothesis(R1, t),
        PoseHypothesis(R1, -t),
        PoseHypothesis(R2, t),
        PoseHypothesis(R2, -t),
    ]


def triangulate_depths(y, z, R, t_bar):
    """Signed optical-axis depths of the midpoint-triangulated 3D point.

    Linear midpoint method: the closest point between the two viewing rays.
    The returned depths are in units of ||t||; only their signs are needed
    for cheirality decisions.
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    d1, d2 = triangulate_depths_many(
        y.reshape(1, 2), z.reshape(1, 2), R, t_bar, on_parallel="raise"
    )
    return float(d1[0]), float(d2[0])


def triangulate_depths_many(y, z, R, t_bar, on_parallel="nan"):
    """Vectorized midpoint triangulation over (m, 2) point arrays.

    Parallel rays produce NaN depths by default, or raise DegenerateRays
    when on_parallel="raise".
    """
    R = np.asarray(R, dtype=float)
    t = np.asarray(t_bar, dtype=float)
    m = y.shape[0]
    d1 = np.hstack([y, np.ones((m, 1))])            # ray directions, first camera
    d2 = np.hstack([z, np.ones((m, 1))]) @ R        # R.T @ z^h, rows
    o2 = -R.T @ t                                   # second camera center, first frame

    a11 = np.einsum("mi,mi->m", d1, d1)
    a12 = np.einsum("mi,mi->m", d1, d2)
    a22 = np.einsum("mi,mi->m", d2, d2)
    b1 = d1 @ o2
    b2 = d2 @ o2

    cross = np.cross(d1, d2)
    sin_angle = np.linalg.norm(cross, axis=1) / np.sqrt(a11 * a22)
    bad = sin_angle <= PARALLEL_RAY_TOL
    if bad.any() and on_parallel == "raise":
        raise DegenerateRays(f"{int(bad.sum())} ray pairs are parallel")

    # Closest-approach parameters of p = s1*d1 and q = o2 + s2*d2.
    det = -a11 * a22 + a12 * a12
    det = np.where(bad, 1.0, det)
    s1 = (-b1 * a22 + b2 * a12) / det
    s2 = (a11 * b2 - a12 * b1) / det

    mid = 0.5 * (s1[:, None] * d1 + o2[None, :] + s2[:, None] * d2)
    depth_first = mid[:, 2]
    depth_second = mid @ R[2, :] + t[2]
    depth_first = np.where(bad, np.nan, depth_first)
    depth_second = np.where(bad, np.nan, depth_second)
    return depth_first, depth_second


def select_by_cheirality(hypotheses, cset: CorrespondenceSet) -> PoseHypothesis:
    """Pick the hypothesis with the most points in front of both cameras.

    Raises AmbiguousCheirality when the best vote count is tied.
    """
    if len(cset) < 2:
        raise ValueError("cheirality selection needs at least 2 correspondences")
    votes = []
    for hyp in hypotheses:
        df, ds = triangulate_depths_many(cset.y, cset.z, hyp.rotation, hyp.bearing)
        ok = (df > 0.0) & (ds > 0.0)
        votes.append(int(np.count_nonzero(ok & np.isfinite(df) & np.isfinite(ds))))
    order = np.argsort(votes)
    best, second = order[-1], order[-2]
    if votes[best] == votes[second]:
        raise AmbiguousCheirality(f"positive-depth votes tie at {votes[best]}")
    return hypotheses[best]
