"""Finite products of manifolds with the l2-combined metric."""

from __future__ import annotations

import numpy as np

from .base import Manifold


class Product(Manifold):
    """Cartesian product; coordinates are part vectors concatenated.

    All maps act part-wise.  Squared distances add.  Curvature bounds
    combine as [min_i kappa_i, max_i K_i], widened to include 0 when
    there is more than one factor (planes spanning two factors are flat).
    """

    def __init__(self, *parts):
        if len(parts) == 1 and not isinstance(parts[0], Manifold):
            parts = tuple(parts[0])
        if not parts:
            raise ValueError("a product needs at least one part")
        if not all(isinstance(p, Manifold) for p in parts):
            raise TypeError("product parts must be manifolds")
        self.parts = tuple(parts)
        self.dim = sum(p.dim for p in parts)
        self.ambient = sum(p.ambient for p in parts)
        lo = min(p.curvature_lo for p in parts)
        hi = max(p.curvature_hi for p in parts)
        if len(parts) > 1:
            lo, hi = min(lo, 0.0), max(hi, 0.0)
        self.curvature_lo = lo
        self.curvature_hi = hi
        self._offsets = np.cumsum([0] + [p.ambient for p in parts])

    def _signature(self):
        return ("Product",) + tuple(p._signature() for p in self.parts)

    def __repr__(self) -> str:
        return " x ".join(repr(p) for p in self.parts)

    def split(self, x: np.ndarray) -> list[np.ndarray]:
        return [x[self._offsets[i]:self._offsets[i + 1]]
                for i in range(len(self.parts))]

    def join(self, pieces) -> np.ndarray:
        return np.concatenate([np.asarray(p, dtype=float).reshape(-1)
                               for p in pieces])

    # -- representation --------------------------------------------------
    def point_defect(self, x):
        return max(p.point_defect(xi) for p, xi in zip(self.parts, self.split(x)))

    def project(self, x):
        return self.join(p.project(xi) for p, xi in zip(self.parts, self.split(x)))

    def tangent_defect(self, x, v):
        return max(p.tangent_defect(xi, vi) for p, xi, vi
                   in zip(self.parts, self.split(x), self.split(v)))

    def project_tangent(self, x, v):
        return self.join(p.project_tangent(xi, vi) for p, xi, vi
                         in zip(self.parts, self.split(x), self.split(v)))

    # -- geometry ---------------------------------------------------------
    def exp(self, x, v):
        return self.join(p.exp(xi, vi) for p, xi, vi
                         in zip(self.parts, self.split(x), self.split(v)))

    def log(self, x, y):
        return self.join(p.log(xi, yi) for p, xi, yi
                         in zip(self.parts, self.split(x), self.split(y)))

    def transport(self, x, y, u):
        return self.join(p.transport(xi, yi, ui) for p, xi, yi, ui
                         in zip(self.parts, self.split(x), self.split(y), self.split(u)))

    def inner(self, x, u, v):
        return sum(p.inner(xi, ui, vi) for p, xi, ui, vi
                   in zip(self.parts, self.split(x), self.split(u), self.split(v)))

    def dist(self, x, y):
        return float(np.sqrt(sum(p.dist(xi, yi) ** 2 for p, xi, yi
                                 in zip(self.parts, self.split(x), self.split(y)))))

    def random_point(self, rng):
        return self.join(p.random_point(rng) for p in self.parts)

    def anchor(self):
        return self.join(p.anchor() for p in self.parts)
