"""The unit sphere S^d embedded in R^{d+1} (constant curvature +1)."""

from __future__ import annotations

import numpy as np

from ..exceptions import InjectivityError
from .base import Manifold

# how close to pi a step/separation may come before we refuse it
_ANTIPODAL_GUARD = 1e-9


class Sphere(Manifold):
    """S^d = {x in R^{d+1} : ||x|| = 1} with the round metric.

    The injectivity radius is pi: exponential steps of length >= pi and
    logarithms/transports between antipodal points are rejected.
    """

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(d)
        self.ambient = int(d) + 1
        self.curvature_lo = 1.0
        self.curvature_hi = 1.0

    def _signature(self):
        return ("Sphere", self.dim)

    # -- representation --------------------------------------------------
    def point_defect(self, x):
        return abs(float(np.linalg.norm(x)) - 1.0)

    def project(self, x):
        return np.asarray(x, dtype=float) / np.linalg.norm(x)

    def tangent_defect(self, x, v):
        return abs(float(np.dot(x, v)))

    def project_tangent(self, x, v):
        return v - np.dot(x, v) * x

    # -- geometry ---------------------------------------------------------
    def exp(self, x, v):
        t = float(np.linalg.norm(v))
        if t >= np.pi:
            raise InjectivityError(
                f"sphere exponential step of length {t:.6f} >= pi")
        if t < 1e-16:
            return np.array(x, dtype=float)
        return np.cos(t) * x + np.sin(t) * (v / t)

    def log(self, x, y):
        c = float(np.clip(np.dot(x, y), -1.0, 1.0))
        w = y - c * x
        s = float(np.linalg.norm(w))
        theta = float(np.arctan2(s, c))
        if theta >= np.pi - _ANTIPODAL_GUARD:
            raise InjectivityError("sphere log undefined near antipodal points")
        if s < 1e-16:
            return np.zeros_like(x)
        return (theta / s) * w

    def transport(self, x, y, u):
        v = self.log(x, y)
        theta = float(np.linalg.norm(v))
        if theta < 1e-16:
            return self.project_tangent(y, np.array(u, dtype=float))
        e = v / theta
        a = float(np.dot(u, e))
        out = u + a * ((np.cos(theta) - 1.0) * e - np.sin(theta) * x)
        return self.project_tangent(y, out)

    def inner(self, x, u, v):
        return float(np.dot(u, v))

    def dist(self, x, y):
        c = float(np.clip(np.dot(x, y), -1.0, 1.0))
        # arctan2 form is accurate for both tiny and near-pi separations
        s = float(np.linalg.norm(y - c * x))
        return float(np.arctan2(s, c))

    def random_point(self, rng):
        g = rng.standard_normal(self.ambient)
        return g / np.linalg.norm(g)

    def anchor(self):
        out = np.zeros(self.ambient)
        out[0] = 1.0
        return out
