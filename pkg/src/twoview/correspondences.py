"""Matched 2D point pairs in normalized image coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class Correspondence(NamedTuple):
    """One matched pair: y in the first image, z in the second (normalized)."""

    y: np.ndarray
    z: np.ndarray


@dataclass(frozen=True)
class CorrespondenceSet:
    """Ordered set of correspondences stored as (m, 2) arrays.

    Coordinates are normalized image coordinates (focal length 1). Pixel
    inputs must be converted before construction.
    """

    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        y = np.ascontiguousarray(np.asarray(self.y, dtype=float))
        z = np.ascontiguousarray(np.asarray(self.z, dtype=float))
        if y.ndim != 2 or y.shape[1] != 2 or y.shape != z.shape:
            raise ValueError(f"expected matching (m, 2) arrays, got {y.shape} and {z.shape}")
        if not (np.isfinite(y).all() and np.isfinite(z).all()):
            raise ValueError("correspondences must be finite")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    def __len__(self):
        return self.y.shape[0]

    def __getitem__(self, i) -> Correspondence:
        return Correspondence(self.y[i].copy(), self.z[i].copy())

    def subset(self, mask) -> "CorrespondenceSet":
        """Rows selected by a boolean mask or index array, order preserved."""
        return CorrespondenceSet(self.y[mask], self.z[mask])

    def homogeneous(self):
        """Homogeneous lifts (y^h, z^h) as (m, 3) arrays."""
        return _lift(self.y), _lift(self.z)


def _lift(a):
    return np.hstack([a, np.ones((a.shape[0], 1))])
