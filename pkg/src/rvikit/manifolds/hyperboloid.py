"""Hyperbolic space H^d in the hyperboloid (Minkowski) model, curvature -1.

Points live on the upper sheet {p : <p,p>_L = -1, p_0 > 0} of the unit
hyperboloid in R^{d+1} equipped with the Lorentzian form

    <u, v>_L = -u_0 v_0 + u_1 v_1 + ... + u_d v_d,

which restricts to a Riemannian metric on tangent spaces {v : <p,v>_L = 0}.
"""

from __future__ import annotations

import numpy as np

from .base import Manifold


def minkowski(u: np.ndarray, v: np.ndarray) -> float:
    """The Lorentzian bilinear form <u,v>_L."""
    return float(np.dot(u[1:], v[1:]) - u[0] * v[0])


class Hyperboloid(Manifold):
    """Upper-sheet hyperboloid model of H^d (global injectivity)."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(d)
        self.ambient = int(d) + 1
        self.curvature_lo = -1.0
        self.curvature_hi = -1.0

    def _signature(self):
        return ("Hyperboloid", self.dim)

    # -- representation --------------------------------------------------
    def point_defect(self, x):
        if x[0] <= 0.0:
            return np.inf
        return abs(minkowski(x, x) + 1.0)

    def project(self, x):
        # restore the sheet constraint by recomputing the time coordinate
        out = np.array(x, dtype=float)
        out[0] = np.sqrt(1.0 + float(np.dot(out[1:], out[1:])))
        return out

    def tangent_defect(self, x, v):
        return abs(minkowski(x, v))

    def project_tangent(self, x, v):
        # <x,x>_L = -1, so adding <v,x>_L * x cancels the Lorentzian component
        return v + minkowski(v, x) * x

    # -- geometry ---------------------------------------------------------
    def exp(self, x, v):
        t2 = minkowski(v, v)
        t = float(np.sqrt(max(t2, 0.0)))
        if t < 1e-16:
            return np.array(x, dtype=float)
        return np.cosh(t) * x + np.sinh(t) * (v / t)

    def log(self, x, y):
        w = y + minkowski(x, y) * x          # spacelike, |w|_L = sinh(d)
        s2 = minkowski(w, w)
        s = float(np.sqrt(max(s2, 0.0)))
        if s < 1e-16:
            return np.zeros_like(x)
        d = float(np.arcsinh(s)) if s < 2.0 else self.dist(x, y)
        return (d / s) * w

    def transport(self, x, y, u):
        v = self.log(x, y)
        d = float(np.sqrt(max(minkowski(v, v), 0.0)))
        if d < 1e-16:
            return self.project_tangent(y, np.array(u, dtype=float))
        e = v / d
        a = minkowski(u, e)
        out = u + a * ((np.cosh(d) - 1.0) * e + np.sinh(d) * x)
        return self.project_tangent(y, out)

    def inner(self, x, u, v):
        return minkowski(u, v)

    def dist(self, x, y):
        c = -minkowski(x, y)                 # cosh(d) up to roundoff
        if c < 1.5:
            # near-identical points: arccosh(1+eps) loses digits; use the
            # spacelike difference, whose Lorentz norm is 2*sinh(d/2)
            w = y - x
            half = float(np.sqrt(max(minkowski(w, w), 0.0))) / 2.0
            return 2.0 * float(np.arcsinh(half))
        return float(np.arccosh(c))

    def random_point(self, rng):
        g = rng.standard_normal(self.dim)
        out = np.empty(self.ambient)
        out[1:] = g
        out[0] = np.sqrt(1.0 + float(np.dot(g, g)))
        return out

    def anchor(self) -> np.ndarray:
        out = np.zeros(self.ambient)
        out[0] = 1.0
        return out
