"""Shared test helpers.

The generators here are deliberately independent of twoview.synth: tests use
them as oracles for the production code paths.
"""

import numpy as np
import pytest


def random_rotation(rng):
    """Uniform-ish random rotation via QR with determinant fix."""
    A = rng.standard_normal((3, 3))
    Q, R = np.linalg.qr(A)
    Q = Q @ np.diag(np.sign(np.diag(R)))
    if np.linalg.det(Q) < 0:
        Q[:, 2] = -Q[:, 2]
    return Q


def random_view_rotation(rng, max_angle=0.6):
    """Moderate random rotation so both cameras see a shared volume.

    Uniform rotations frequently point the second camera away from the
    first camera's frustum, which empties the visible set; two-view data
    generation uses bounded rotation angles instead.
    """
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    angle = rng.uniform(0.05, max_angle)
    c, s = np.cos(angle), np.sin(angle)
    K = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + s * K + (1 - c) * (K @ K)


def random_bearing(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def project(x):
    """Pinhole projection of (m, 3) points: [x1/x3, x2/x3]."""
    x = np.atleast_2d(x)
    return x[:, :2] / x[:, 2:3]


def make_pair_data(rng, m, R, t, sigma=0.0, depth_range=(1.0, 5.0), spread=0.4):
    """Synthetic correspondences by direct projection (oracle path).

    First-image points are drawn uniformly in [-spread, spread] x
    [-0.75*spread, 0.75*spread] (the 4:3 normalized image of the 640x480 /
    f=800 setup when spread=0.4), depths uniformly in depth_range. Noise with
    standard deviation sigma (normalized units) lands on the second image
    only. Returns (y, z, depths) with points guaranteed in front of both
    cameras.
    """
    t = np.asarray(t, dtype=float)
    ys, zs, ds = [], [], []
    need = m
    for _ in range(200):
        if need <= 0:
            break
        nb = max(2 * need, 16)
        y = rng.uniform([-spread, -0.75 * spread], [spread, 0.75 * spread], (nb, 2))
        depth = rng.uniform(depth_range[0], depth_range[1], nb)
        x = depth[:, None] * np.hstack([y, np.ones((nb, 1))])
        x2 = x @ R.T + t
        ok = x2[:, 2] > 1e-6
        take = min(need, int(ok.sum()))
        idx = np.flatnonzero(ok)[:take]
        ys.append(y[idx])
        zs.append(project(x2[idx]))
        ds.append(depth[idx])
        need -= take
    if need > 0:
        raise RuntimeError("pose leaves too little shared visibility for test data")
    y = np.vstack(ys)[:m]
    z = np.vstack(zs)[:m]
    depths = np.hstack(ds)[:m]
    if sigma > 0.0:
        z = z + rng.normal(0.0, sigma, z.shape)
    return y, z, depths


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
