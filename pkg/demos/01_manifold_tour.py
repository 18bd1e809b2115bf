"""A tour of the manifold kernel: points, tangents, and the five ops.

Every solver in this package is built from five primitives -- exp, log,
parallel transport, distance, and the Riemannian inner product -- plus a
strict ownership rule: a Point or Tangent knows its manifold (and base
point), and mixing bases is an error, not a silent bug.
"""

import numpy as np

from rvikit.exceptions import ContractViolation
from rvikit.manifolds import SPD, Euclidean, Hyperboloid, Point, Product, Sphere, ops

rng = np.random.default_rng(0)


def section(title):
    print(f"\n=== {title} ===")


section("The catalog and its curvature intervals")
catalog = [Euclidean(3), Sphere(2), Hyperboloid(2), SPD(2),
           Product(Hyperboloid(2), Sphere(2))]
for m in catalog:
    print(f"  {m!r:30s} sectional curvature in "
          f"[{m.curvature_lo:+.2f}, {m.curvature_hi:+.2f}]")

section("exp and log are mutual inverses")
sphere = Sphere(2)
p = ops.random_point(sphere, rng)
u = ops.random_tangent(p, rng, 0.8)
q = ops.exp_map(p, u)
u_back = ops.log_map(p, q)
print(f"  |u| = {u.norm():.6f}, distance(p, exp_p(u)) = {ops.distance(p, q):.6f}")
print(f"  max |log(exp(u)) - u| = "
      f"{np.max(np.abs(u_back.components - u.components)):.2e}")

section("transport preserves lengths and angles")
v = ops.random_tangent(p, rng, 1.0)
mu, mv = ops.transport(p, q, u), ops.transport(p, q, v)
print(f"  | |Gu| - |u| |          = {abs(mu.norm() - u.norm()):.2e}")
print(f"  | <Gu,Gv> - <u,v> |     = {abs(ops.inner(mu, mv) - ops.inner(u, v)):.2e}")

section("SPD(2): the same five ops on covariance-like matrices")
spd = SPD(2)
a = ops.random_point(spd, rng)
b = ops.ball_point(a, rng, 0.7)
print(f"  d(a, b)             = {ops.distance(a, b):.6f}")
print(f"  |log_a(b)|          = {ops.log_map(a, b).norm():.6f}   (equal by design)")
mid = ops.exp_map(a, ops.log_map(a, b) * 0.5)
print(f"  d(a,mid) - d(mid,b) = {ops.distance(a, mid) - ops.distance(mid, b):+.2e}")

section("streaming geodesic averages")
center = ops.random_point(sphere, rng)
state = ops.GeodesicAverage()
for i in range(200):
    t = 0.5 / (i + 1)
    sign = 1.0 if i % 2 == 0 else -1.0
    step = ops.random_tangent(center, np.random.default_rng(i), 1.0) * (sign * t)
    state = ops.geodesic_average_update(state, ops.exp_map(center, step))
print(f"  after 200 noisy points with shrinking offsets: d(mean, center) = "
      f"{ops.distance(state.mean, center):.2e}  (count={state.count})")

section("the ownership rule: base points are part of the type")
other = ops.random_point(sphere, rng)
try:
    ops.inner(u, ops.random_tangent(other, rng, 1.0))
except ContractViolation as e:
    print(f"  mixing tangents from different base points -> "
          f"{type(e).__name__}: {e}")

section("defect policy: tiny drift is repaired, real drift is rejected")
drifted = np.array(q.coords) * (1.0 + 5e-9)        # violates |x| = 1 slightly
repaired = Point(sphere, drifted)                  # silently reprojected
print(f"  5e-9 radial drift -> accepted, |x| = "
      f"{np.linalg.norm(repaired.coords):.15f}")
try:
    Point(sphere, np.array(q.coords) * 1.001)
except ContractViolation as e:
    print(f"  1e-3 radial drift -> {type(e).__name__}: {e}")
