"""Consistent two-step relative pose estimation.

Pipeline: build the 9x9 design matrices from the epipolar equations, estimate
the measurement-noise variance from their generalized spectrum, subtract the
noise-induced bias, take the minimal eigenvector as an essential-matrix
estimate, recover the pose by SVD + cheirality, then refine with Gauss-Newton
steps parameterized on the rotation group and the unit sphere. The per-point
depth ratios are eliminated in closed form, so one refinement step costs O(m).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .correspondences import Correspondence, CorrespondenceSet
from .errors import (
    AmbiguousCheirality,
    ConfigError,
    DegenerateDepth,
    IllConditioned,
    NoConsensus,
    TooFewPoints,
)
from .geometry import (
    PoseHypothesis,
    SphereChart,
    chart_point,
    chart_tangents,
    decompose_essential,
    exp_so3,
    hat_stack,
    sphere_chart,
    triangulate_depths_many,
)

logger = logging.getLogger(__name__)

# Q needs 9 generic rows to be invertible; fewer points cannot feed the
# variance estimator or the spectral initializer.
MIN_POINTS = 9

DEPTH_DENOM_TOL = 1e-14
NORMAL_EQ_COND_LIMIT = 1e12

# Selects the first two rows of a homogeneous 3-vector; the covariance of the
# homogeneous noise [eps, 0] is sigma^2 * diag(1, 1, 0).
_W_PATTERN = np.diag([1.0, 1.0, 0.0])


@dataclass(frozen=True)
class DesignMatrices:
    """The 9x9 quadratic-form pair driving variance estimation.

    Q is the averaged outer product of the epipolar equation rows; S is the
    Kronecker structure the measurement noise injects into Q in expectation.
    """

    Q: np.ndarray
    S: np.ndarray
    m: int


@dataclass(frozen=True)
class RansacConfig:
    max_iterations: int = 100
    inlier_threshold_normalized: float = 5e-3
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ConfigError("ransac max_iterations must be >= 1")
        if self.inlier_threshold_normalized <= 0:
            raise ConfigError("ransac inlier threshold must be positive")


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning knobs for the two-step estimator.

    init_eigenvector_rank selects which eigenvector of the bias-eliminated
    spectrum seeds the pose (0 = smallest eigenvalue); nonzero values exist
    for ablation experiments only.
    """

    gn_iterations: int = 1
    degeneracy_ratio_threshold: float = 1.5
    robust_kernel_threshold_sigmas: float = 3.0
    ransac: RansacConfig = field(default_factory=RansacConfig)
    enable_prefilter: bool = False
    init_eigenvector_rank: int = 0

    def __post_init__(self):
        if self.gn_iterations < 0:
            raise ConfigError("gn_iterations must be >= 0")
        if self.degeneracy_ratio_threshold <= 1.0:
            raise ConfigError("degeneracy_ratio_threshold must exceed 1")
        if self.robust_kernel_threshold_sigmas <= 0:
            raise ConfigError("robust_kernel_threshold_sigmas must be positive")
        if not 0 <= self.init_eigenvector_rank <= 8:
            raise ConfigError("init_eigenvector_rank must be in [0, 8]")


# One polish step is enough for the sign arbitration in _recover_pose.
_SIGN_ARBITRATION_CFG = None  # assigned below, after the dataclass exists


@dataclass(frozen=True)
class PoseEstimate:
    rotation: np.ndarray
    bearing: np.ndarray
    sigma2_hat: float
    degeneracy_ratio: float
    used_ransac_fallback: bool
    inlier_mask: np.ndarray
    objective_value: float
    gn_steps_run: int


_SIGN_ARBITRATION_CFG = EstimatorConfig(gn_iterations=1)


def vec(E):
    """Column-stacking vectorization of a 3x3 matrix."""
    return np.asarray(E, dtype=float).reshape(9, order="F")


def unvec(theta):
    """Inverse of vec()."""
    return np.asarray(theta, dtype=float).reshape(3, 3, order="F")


def build_design(cset: CorrespondenceSet) -> DesignMatrices:
    """Averaged epipolar quadratic form Q and its noise-bias pattern S.

    Row i of the underlying linear system is (y_i^h kron z_i^h)^T, so that
    row_i @ vec(E) = z_i^h.T @ E @ y_i^h.
    """
    yh, zh = cset.homogeneous()
    m = len(cset)
    K = np.einsum("mb,ma->mba", yh, zh).reshape(m, 9)
    Q = (K.T @ K) / m
    Yh = (yh.T @ yh) / m
    S = np.kron(Yh, _W_PATTERN)
    return DesignMatrices(Q=_sym(Q), S=_sym(S), m=m)


def estimate_noise_variance(d: DesignMatrices) -> float:
    """Consistent noise-variance estimate from the generalized spectrum.

    Solves S v = mu Q v and returns 1 / mu_max; a numerically singular Q
    means some direction fits the data exactly, which is the zero-noise
    limit, so 0 is returned.
    """
    lam = np.linalg.eigvalsh(d.Q)
    if lam[-1] <= 0.0 or lam[0] <= 1e-12 * lam[-1]:
        return 0.0
    try:
        mu = scipy.linalg.eigh(d.S, d.Q, eigvals_only=True)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise IllConditioned(f"generalized eigenproblem failed: {exc}") from exc
    mu_max = float(mu[-1])
    if not math.isfinite(mu_max) or mu_max <= 0.0:
        raise IllConditioned(f"largest generalized eigenvalue {mu_max} unusable")
    return 1.0 / mu_max


def bias_eliminated_spectrum(d: DesignMatrices, sigma2: float):
    """Eigenvectors of Q - sigma2 * S for the two smallest eigenvalues.

    Returns (eigvec_min, eigvec_second, eigvals_ascending). Slightly negative
    eigenvalues are expected at finite m and are left untouched.
    """
    w, V = _bias_eliminated_eig(d, sigma2)
    return V[:, 0].copy(), V[:, 1].copy(), w


def _bias_eliminated_eig(d: DesignMatrices, sigma2: float):
    Qbe = _sym(d.Q - sigma2 * d.S)
    return np.linalg.eigh(Qbe)


def epipolar_cost(theta, cset: CorrespondenceSet) -> float:
    """Mean squared algebraic epipolar error of a unit-normalized theta."""
    theta = np.asarray(theta, dtype=float)
    n = np.linalg.norm(theta)
    if n == 0.0:
        raise ValueError("theta must be nonzero")
    E = unvec(theta / n)
    yh, zh = cset.homogeneous()
    e = np.einsum("ma,ab,mb->m", zh, E, yh)
    return float(np.mean(e * e))


def consistent_initial_pose(cset: CorrespondenceSet, cfg: EstimatorConfig | None = None):
    """First-step estimate: variance, bias elimination, spectral pose.

    Returns (rotation, bearing, sigma2_hat, degeneracy_ratio, used_fallback).
    When the ratio of the two smallest-eigenvector epipolar costs drops below
    cfg.degeneracy_ratio_threshold the spectrum is untrustworthy (near-
    degenerate scene) and a RANSAC pose is substituted.
    """
    cfg = cfg or EstimatorConfig()
    if len(cset) < MIN_POINTS:
        raise TooFewPoints(f"need at least {MIN_POINTS} correspondences, got {len(cset)}")
    d = build_design(cset)
    sigma2 = estimate_noise_variance(d)
    _, V = _bias_eliminated_eig(d, sigma2)
    c1 = epipolar_cost(V[:, 0], cset)
    c2 = epipolar_cost(V[:, 1], cset)
    ratio = c2 / c1 if c1 > 0.0 else math.inf
    if ratio < cfg.degeneracy_ratio_threshold:
        # The fallback only needs to reject gross outliers; widen the inlier
        # gate to ~10 sigma of the algebraic error so clean-but-noisy data is
        # not truncated into a biased consensus set.
        thr = max(cfg.ransac.inlier_threshold_normalized, 10.0 * math.sqrt(max(sigma2, 0.0)))
        _, rough = ransac_prefilter(cset, cfg, inlier_threshold=thr)
        return rough.rotation, rough.bearing, sigma2, ratio, True
    theta = V[:, cfg.init_eigenvector_rank]
    win = _recover_pose(theta, cset)
    return win.rotation, win.bearing, sigma2, ratio, False


def _clamped_objective(R, t_bar, cset: CorrespondenceSet) -> float:
    """Mean squared residual with depth ratios clamped at zero.

    The unconstrained objective is exactly symmetric under bearing negation
    (k -> -k mirrors the solution), so only the depth-positivity constraint
    carries sign information; clamping negative ratios to zero is the
    constrained profile of the objective.
    """
    R = np.asarray(R, dtype=float)
    t = np.asarray(t_bar, dtype=float)
    yh, _ = cset.homogeneous()
    a = yh @ R.T
    *_, num, den = _k_terms(a, t, cset.z)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / den
    k = np.where(np.isfinite(k), np.maximum(k, 0.0), 0.0)
    v = a + k[:, None] * t[None, :]
    h = v[:, 2]
    ok = np.abs(h) > DEPTH_DENOM_TOL
    if not ok.any():
        return math.inf
    r = cset.z[ok] - v[ok, :2] / v[ok, 2:3]
    return float(np.mean(np.einsum("mi,mi->m", r, r)))


def _recover_pose(theta, cset: CorrespondenceSet) -> PoseHypothesis:
    """Pose from an essential-matrix direction, robust at weak parallax.

    Positive-depth counts reliably separate the twisted-pair rotations, but
    on the bearing sign they degrade into coin flips once the per-point
    parallax is comparable to the combined noise and candidate-rotation
    error. The sign is therefore decided by a likelihood-ratio test: each
    sign branch is polished with one internal Gauss-Newton step (optimizing
    the rotation nuisance out of the comparison) and the branch with the
    smaller depth-positivity-clamped objective wins.
    """
    cands = decompose_essential(unvec(theta))
    votes = []
    for hyp in cands:
        df, ds = triangulate_depths_many(cset.y, cset.z, hyp.rotation, hyp.bearing)
        votes.append(int(np.count_nonzero((df > 0.0) & (ds > 0.0))))
    rot_votes = (votes[0] + votes[1], votes[2] + votes[3])
    if rot_votes[0] == rot_votes[1]:
        raise AmbiguousCheirality(f"twisted-pair rotations tie at {rot_votes[0]} votes")
    base = cands[0] if rot_votes[0] > rot_votes[1] else cands[2]

    scores = []
    for sign in (1.0, -1.0):
        Rs, ts, _ = gn_refine(base.rotation, sign * base.bearing, cset, _SIGN_ARBITRATION_CFG)
        scores.append(_clamped_objective(Rs, ts, cset))
    bearing = base.bearing if scores[0] <= scores[1] else -base.bearing
    return PoseHypothesis(base.rotation, bearing)


# ---------------------------------------------------------------------------
# Closed-form depth ratios and the maximum-likelihood residual


def depth_ratio_matrices(z):
    """The 3x9 coefficient matrices of the closed-form depth-ratio quotient."""
    z1, z2 = float(z[0]), float(z[1])
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    e3 = np.array([0.0, 0.0, 1.0])
    zero = np.zeros(3)
    C1 = np.vstack([
        np.hstack([-e3, zero, z1 * e3]),
        np.hstack([zero, -e3, z2 * e3]),
        np.hstack([e1, e2, -(z1 * e1 + z2 * e2)]),
    ])
    C2 = np.vstack([
        np.hstack([e3, zero, z1 * e3 - e1]),
        np.hstack([zero, e3, z2 * e3 - e2]),
        np.hstack([-z1 * e3, -z2 * e3, zero]),
    ])
    return C1, C2


def k_closed_form(R, t_bar, c: Correspondence) -> float:
    """Stationary depth ratio k for one correspondence at pose (R, t_bar).

    Setting the derivative of the squared reprojection residual with respect
    to k to zero gives a linear equation whose solution is this quotient of
    quadratic forms. On noise-free data at the true pose it equals
    ||t|| / depth.
    """
    R = np.asarray(R, dtype=float)
    t = np.asarray(t_bar, dtype=float)
    yh = np.array([c.y[0], c.y[1], 1.0])
    C1, C2 = depth_ratio_matrices(c.z)
    It = np.kron(np.eye(3), t[:, None])  # (9, 3)
    Ry = R @ yh
    num = float(yh @ R.T @ C1 @ It @ Ry)
    den = float(t @ C2 @ It @ Ry)
    if abs(den) < DEPTH_DENOM_TOL:
        raise DegenerateDepth(f"depth-ratio denominator {den} below {DEPTH_DENOM_TOL}")
    return num / den


def _k_terms(a, t, z):
    """Shared quotient terms of the closed-form depth ratio, vectorized.

    a: (m, 3) rotated homogeneous first-image points R @ y^h
    t: (3,) bearing; z: (m, 2) second-image points.
    Returns (p1, p2, q1, q2, w1, w2, num, den); k = num / den.
    """
    z1, z2 = z[:, 0], z[:, 1]
    p1 = a[:, 2] * t[0] - a[:, 0] * t[2]
    p2 = a[:, 2] * t[1] - a[:, 1] * t[2]
    q1 = a[:, 2] * z1 - a[:, 0]
    q2 = a[:, 2] * z2 - a[:, 1]
    w1 = t[2] * z1 - t[0]
    w2 = t[2] * z2 - t[1]
    num = -(q1 * p1 + q2 * p2)
    den = w1 * p1 + w2 * p2
    return p1, p2, q1, q2, w1, w2, num, den


def depth_ratios_all(R, t_bar, cset: CorrespondenceSet):
    """Vectorized k_closed_form over the whole set; returns (k, den)."""
    yh, _ = cset.homogeneous()
    a = yh @ np.asarray(R, dtype=float).T
    *_, num, den = _k_terms(a, np.asarray(t_bar, dtype=float), cset.z)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / den
    return k, den


def ml_residual(R, t_bar, c: Correspondence):
    """Reprojection residual z - u at the closed-form depth ratio."""
    k = k_closed_form(R, t_bar, c)
    yh = np.array([c.y[0], c.y[1], 1.0])
    v = np.asarray(R, dtype=float) @ yh + k * np.asarray(t_bar, dtype=float)
    return c.z - v[:2] / v[2]


def _residuals_all(R, t_bar, cset: CorrespondenceSet):
    """Vectorized residuals; returns (r, k, den, h, a, v)."""
    R = np.asarray(R, dtype=float)
    t = np.asarray(t_bar, dtype=float)
    yh, _ = cset.homogeneous()
    a = yh @ R.T
    *_, num, den = _k_terms(a, t, cset.z)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / den
        v = a + k[:, None] * t[None, :]
        h = v[:, 2]
        u = v[:, :2] / h[:, None]
    r = cset.z - u
    return r, k, den, h, a, v


def ml_objective(R, t_bar, cset: CorrespondenceSet, kernel_threshold=None) -> float:
    """Mean squared residual norm, optionally truncated per correspondence."""
    r, _, den, h, _, _ = _residuals_all(R, t_bar, cset)
    if (np.abs(den) < DEPTH_DENOM_TOL).any() or (np.abs(h) < DEPTH_DENOM_TOL).any():
        raise DegenerateDepth("depth-ratio denominator vanishes for some correspondence")
    sq = np.einsum("mi,mi->m", r, r)
    if kernel_threshold is not None:
        sq = np.minimum(sq, kernel_threshold**2)
    return float(np.mean(sq))


# ---------------------------------------------------------------------------
# Gauss-Newton on SO(3) x S^2


def gn_system(R, chart: SphereChart, cset: CorrespondenceSet, kernel_threshold=None):
    """Stacked Jacobian (2m x 5) and residual (2m,) at the chart origin.

    Parameters are (s, alpha, beta): a rotation increment applied as
    R @ exp(hat(s)) and sphere-chart offsets for the bearing. The depth
    ratios are functions of the pose through their closed form, and their
    derivatives are included (projected / variable-elimination Jacobian).
    Rows of correspondences with vanishing depth denominators are zeroed
    (counted, not fatal); rows failing the truncation kernel likewise.
    """
    R = np.asarray(R, dtype=float)
    t = chart_point(chart, 0.0, 0.0)
    d_alpha, d_beta = chart_tangents(chart)
    m = len(cset)
    yh, _ = cset.homogeneous()
    z = cset.z

    a = yh @ R.T
    p1, p2, q1, q2, w1, w2, num, den = _k_terms(a, t, z)
    bad = (np.abs(den) < DEPTH_DENOM_TOL) | ~np.isfinite(den)
    den_safe = np.where(bad, 1.0, den)
    k = num / den_safe

    v = a + k[:, None] * t[None, :]
    h = v[:, 2]
    bad |= (np.abs(h) < DEPTH_DENOM_TOL) | ~np.isfinite(h)
    h_safe = np.where(bad, 1.0, h)
    g = v[:, :2]
    u = g / h_safe[:, None]
    r = z - u

    # d a / d s at s = 0: derivative of R exp(hat(s)) y^h is -R hat(y^h).
    A = -np.einsum("ab,mbc->mac", R, hat_stack(yh))

    # rotation block
    dp1 = t[0] * A[:, 2, :] - t[2] * A[:, 0, :]
    dp2 = t[1] * A[:, 2, :] - t[2] * A[:, 1, :]
    dq1 = z[:, 0, None] * A[:, 2, :] - A[:, 0, :]
    dq2 = z[:, 1, None] * A[:, 2, :] - A[:, 1, :]
    dnum = -(dq1 * p1[:, None] + q1[:, None] * dp1 + dq2 * p2[:, None] + q2[:, None] * dp2)
    dden = w1[:, None] * dp1 + w2[:, None] * dp2
    dk_s = (den_safe[:, None] * dnum - num[:, None] * dden) / den_safe[:, None] ** 2
    dv_s = A + t[None, :, None] * dk_s[:, None, :]

    # chart blocks
    dv_ab = np.empty((m, 3, 2))
    for col, d in enumerate((d_alpha, d_beta)):
        dp1c = a[:, 2] * d[0] - a[:, 0] * d[2]
        dp2c = a[:, 2] * d[1] - a[:, 1] * d[2]
        dw1c = d[2] * z[:, 0] - d[0]
        dw2c = d[2] * z[:, 1] - d[1]
        dnumc = -(q1 * dp1c + q2 * dp2c)
        ddenc = dw1c * p1 + w1 * dp1c + dw2c * p2 + w2 * dp2c
        dkc = (den_safe * dnumc - num * ddenc) / den_safe**2
        dv_ab[:, :, col] = k[:, None] * d[None, :] + dkc[:, None] * t[None, :]

    dv = np.concatenate([dv_s, dv_ab], axis=2)  # (m, 3, 5)
    # projective chain rule: du = (h * dv_xy - g * dv_z) / h^2
    du = (h_safe[:, None, None] * dv[:, :2, :] - g[:, :, None] * dv[:, 2:3, :]) / (
        h_safe[:, None, None] ** 2
    )

    if bad.any():
        logger.debug("gn_system dropped %d degenerate rows", int(bad.sum()))
        du[bad] = 0.0
        r[bad] = 0.0
    if kernel_threshold is not None:
        rejected = np.einsum("mi,mi->m", r, r) > kernel_threshold**2
        du[rejected] = 0.0
        r[rejected] = 0.0

    return du.reshape(2 * m, 5), r.reshape(2 * m)


def gn_refine(R, t_bar, cset: CorrespondenceSet, cfg: EstimatorConfig | None = None,
              kernel_threshold=None):
    """Run cfg.gn_iterations Gauss-Newton steps; returns (R, t_bar, steps_run).

    Stops early (keeping the last valid iterate) when the normal equations
    become numerically singular.
    """
    cfg = cfg or EstimatorConfig()
    R = np.asarray(R, dtype=float)
    t = np.asarray(t_bar, dtype=float)
    steps = 0
    for _ in range(cfg.gn_iterations):
        chart = sphere_chart(t)
        J, r = gn_system(R, chart, cset, kernel_threshold=kernel_threshold)
        JtJ = J.T @ J
        if not np.isfinite(JtJ).all() or np.linalg.cond(JtJ) > NORMAL_EQ_COND_LIMIT:
            logger.warning("gn_refine: singular normal equations, keeping last iterate")
            break
        delta = np.linalg.solve(JtJ, J.T @ r)
        R = R @ exp_so3(delta[:3])
        t = chart_point(chart, delta[3], delta[4])
        steps += 1
    return R, t, steps


# ---------------------------------------------------------------------------
# Full pipeline


def estimate_motion(cset: CorrespondenceSet, cfg: EstimatorConfig | None = None) -> PoseEstimate:
    """Two-step consistent estimate of (R, t_bar) from correspondences.

    With cfg.enable_prefilter the set is first cleaned by RANSAC and the
    Gauss-Newton step uses a truncated kernel at
    robust_kernel_threshold_sigmas * sigma_hat.
    """
    cfg = cfg or EstimatorConfig()
    m = len(cset)
    if m < MIN_POINTS:
        raise TooFewPoints(f"need at least {MIN_POINTS} correspondences, got {m}")
    mask = np.ones(m, dtype=bool)
    work = cset
    if cfg.enable_prefilter:
        mask, _ = ransac_prefilter(cset, cfg)
        work = cset.subset(mask)
        if len(work) < MIN_POINTS:
            raise TooFewPoints(f"prefilter kept only {len(work)} correspondences")

    R0, t0, sigma2, ratio, used_fallback = consistent_initial_pose(work, cfg)
    kernel = None
    if cfg.enable_prefilter and sigma2 > 0.0:
        kernel = cfg.robust_kernel_threshold_sigmas * math.sqrt(sigma2)
    R, t, steps = gn_refine(R0, t0, work, cfg, kernel_threshold=kernel)
    objective = ml_objective(R, t, work)
    return PoseEstimate(
        rotation=R,
        bearing=t,
        sigma2_hat=sigma2,
        degeneracy_ratio=ratio,
        used_ransac_fallback=used_fallback,
        inlier_mask=mask,
        objective_value=objective,
        gn_steps_run=steps,
    )


def ransac_prefilter(cset: CorrespondenceSet, cfg: EstimatorConfig | None = None,
                     inlier_threshold=None):
    """Outlier rejection by 9-point spectral RANSAC.

    Minimal samples are solved with the plain (uncorrected) design spectrum
    and scored by absolute algebraic epipolar error against
    cfg.ransac.inlier_threshold_normalized. Returns (inlier_mask, rough_pose)
    where the rough pose comes from a bias-eliminated refit on the winning
    consensus set, so it stays a consistent initializer even when the
    fallback fires on clean but noisy data. Deterministic for a fixed
    cfg.ransac.seed.
    """
    cfg = cfg or EstimatorConfig()
    m = len(cset)
    if m < MIN_POINTS:
        raise TooFewPoints(f"need at least {MIN_POINTS} correspondences, got {m}")
    rng = np.random.default_rng(cfg.ransac.seed)
    yh, zh = cset.homogeneous()
    K = np.einsum("mb,ma->mba", yh, zh).reshape(m, 9)
    thr = cfg.ransac.inlier_threshold_normalized if inlier_threshold is None else inlier_threshold

    best_mask = None
    best_count = -1
    best_score = np.inf
    for _ in range(cfg.ransac.max_iterations):
        idx = rng.choice(m, size=MIN_POINTS, replace=False)
        Ks = K[idx]
        _, V = np.linalg.eigh(_sym(Ks.T @ Ks))
        theta = V[:, 0]
        err = np.abs(K @ theta)  # |z^h.T E y^h| with ||theta|| = 1
        inliers = err <= thr
        count = int(inliers.sum())
        score = float(np.sum(err[inliers] ** 2))
        if count > best_count or (count == best_count and score < best_score):
            best_count = count
            best_score = score
            best_mask = inliers
    if best_count < MIN_POINTS:
        raise NoConsensus(f"best consensus has {best_count} < {MIN_POINTS} inliers")

    consensus = cset.subset(best_mask)
    d = build_design(consensus)
    sigma2 = estimate_noise_variance(d)
    _, V = _bias_eliminated_eig(d, sigma2)
    rough = _recover_pose(V[:, 0], consensus)
    return best_mask, rough


def pure_rotation_statistic(R, cset: CorrespondenceSet) -> float:
    """Mean normalized cross-product magnitude between z^h and R y^h.

    Near zero when the baseline is (near) zero and the rotation is right;
    grows with the translation length, so it grades how much signal the
    bearing estimate has.
    """
    yh, zh = cset.homogeneous()
    Ry = yh @ np.asarray(R, dtype=float).T
    cross = np.cross(zh, Ry)
    denom = np.linalg.norm(zh, axis=1) * np.linalg.norm(yh, axis=1)
    return float(np.mean(np.linalg.norm(cross, axis=1) / denom))


def _sym(M):
    return 0.5 * (M + M.T)
