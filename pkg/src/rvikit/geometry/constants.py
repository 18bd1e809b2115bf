"""Curvature-dependent distortion constants and certified step sizes.

The two workhorse scalars are

    zeta(kappa, tau)  = sqrt(-kappa) tau coth(sqrt(-kappa) tau)   (kappa < 0)
    sigma(K, tau)     = sqrt(K) tau cot(sqrt(K) tau)              (K > 0)

with value 1 for flat/opposite-sign bounds; zeta >= 1 inflates squared
side lengths in negatively curved comparison triangles, sigma <= 1
deflates them in positively curved ones.  Everything downstream (trajectory
caps, step-size formulas, Lyapunov weights) is assembled from these plus the
curvature magnitude K_m = max(|kappa|, |K|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import CertificateError, ContractViolation, DomainError

__all__ = [
    "zeta", "sigma", "jacobi_s", "jacobi_S", "jacobi_ratio",
    "GeometryBounds", "derive_bounds",
    "step_size_reg", "step_size_rpeg", "step_size_rceg", "rho_coefficient",
    "sos_certificate_check",
]


def zeta(kappa: float, tau: float) -> float:
    """Distortion rate for a curvature lower bound ``kappa`` at scale ``tau``.

    Equals 1 when ``kappa >= 0``; otherwise x*coth(x) with x = sqrt(-kappa)*tau.
    Increasing in tau, and >= 1 everywhere.
    """
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    if kappa >= 0.0 or tau == 0.0:
        return 1.0
    x = math.sqrt(-kappa) * tau
    if x < 1e-8:
        return 1.0 + x * x / 3.0
    return x / math.tanh(x)


def sigma(K: float, tau: float) -> float:
    """Distortion rate for a curvature upper bound ``K`` at scale ``tau``.

    Equals 1 when ``K <= 0``; otherwise x*cot(x) with x = sqrt(K)*tau,
    defined for tau < pi/sqrt(K).  Decreasing in tau, and <= 1.
    """
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    if K <= 0.0 or tau == 0.0:
        return 1.0
    x = math.sqrt(K) * tau
    if x >= math.pi:
        raise DomainError(
            f"sigma undefined: sqrt(K)*tau = {x:.6f} must be < pi")
    if x < 1e-8:
        return 1.0 - x * x / 3.0
    return x / math.tan(x)


def jacobi_s(kappa: float, t: float) -> float:
    """Lower-bound Jacobi amplitude: sinh(sqrt(-kappa) t)/sqrt(-kappa), or t."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if kappa >= 0.0:
        return t
    r = math.sqrt(-kappa)
    return math.sinh(r * t) / r


def jacobi_S(K: float, t: float) -> float:
    """Upper-bound Jacobi amplitude: sin(sqrt(K) t)/sqrt(K), or t."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if K <= 0.0:
        return t
    r = math.sqrt(K)
    if r * t >= math.pi:
        raise DomainError("jacobi_S undefined at or beyond the conjugate scale")
    return math.sin(r * t) / r


def jacobi_ratio(kappa: float, K: float, t: float) -> float:
    """The amplitude ratio s(kappa, t)/S(K, t); equals 1 at t = 0.

    On 0 <= t <= 1/sqrt(K_m) (no constraint when K_m = 0) the ratio is
    bounded by 3, which is how transported-difference terms are traded
    against distances.
    """
    if t == 0.0:
        return 1.0
    k_m = max(abs(kappa), abs(K))
    if k_m > 0.0 and t > 1.0 / math.sqrt(k_m) + 1e-12:
        raise DomainError("jacobi_ratio requested beyond t = 1/sqrt(K_m)")
    return jacobi_s(kappa, t) / jacobi_S(K, t)


@dataclass(frozen=True)
class GeometryBounds:
    """Curvature/region package consumed by step-size and Lyapunov formulas.

    kappa <= K are sectional-curvature bounds on the operating region,
    D bounds the initial distance to the solution, L and G bound the
    field's Lipschitz modulus and norm on the (6D/5)-dilated region.
    Derived: K_m = max(|kappa|, |K|), sigma_bar = sigma(K, 91D/81),
    zeta_bar = zeta(kappa, 7D/5).
    """

    kappa: float
    K: float
    D: float
    L: float
    G: float
    K_m: float
    sigma_bar: float
    zeta_bar: float


def derive_bounds(kappa: float, K: float, D: float, L: float, G: float) -> GeometryBounds:
    """Assemble :class:`GeometryBounds`, enforcing the positive-curvature cap.

    When K > 0 the region must satisfy D <= 4*pi/(9*sqrt(K)); this keeps
    sigma_bar = sigma(K, 91D/81) strictly positive.
    """
    if kappa > K:
        raise DomainError(f"kappa = {kappa} must not exceed K = {K}")
    if D <= 0:
        raise DomainError("region radius D must be positive")
    if L <= 0 or G < 0:
        raise DomainError("need L > 0 and G >= 0")
    if K > 0.0 and D > 4.0 * math.pi / (9.0 * math.sqrt(K)) + 1e-12:
        raise DomainError(
            f"positive curvature cap violated: D = {D:.6f} exceeds "
            f"4*pi/(9*sqrt(K)) = {4.0 * math.pi / (9.0 * math.sqrt(K)):.6f}")
    k_m = max(abs(kappa), abs(K))
    return GeometryBounds(
        kappa=float(kappa), K=float(K), D=float(D), L=float(L), G=float(G),
        K_m=float(k_m),
        sigma_bar=sigma(K, 91.0 * D / 81.0),
        zeta_bar=zeta(kappa, 7.0 * D / 5.0),
    )


def step_size_reg(b: GeometryBounds) -> float:
    """Extragradient step size; reduces to 1/(9L) in flat space.

    min{ 1/sqrt(8 L^2 + 306 K_m G^2),
         sigma_bar / (56 sqrt(K_m) D L + 8 zeta_bar L + sigma_bar L) }

    The flat-space value is often quoted loosely as "about 1/(8L)"; the
    exact minimum of the two branches at K_m = 0 is 1/(9L), which is what
    this function returns.
    """
    t1 = 1.0 / math.sqrt(8.0 * b.L ** 2 + 306.0 * b.K_m * b.G ** 2)
    t2 = b.sigma_bar / (56.0 * math.sqrt(b.K_m) * b.D * b.L
                        + 8.0 * b.zeta_bar * b.L + b.sigma_bar * b.L)
    return min(t1, t2)


def step_size_rpeg(b: GeometryBounds) -> float:
    """Past-extragradient step size; reduces to 1/(35L) in flat space.

    min{ sigma_bar / (152 L D sqrt(K_m) + 35 zeta_bar L),
         1/sqrt(36 L^2 + 648 K_m G^2 + 72 sqrt(2 K_m) G L) }
    """
    t1 = b.sigma_bar / (152.0 * b.L * b.D * math.sqrt(b.K_m)
                        + 35.0 * b.zeta_bar * b.L)
    t2 = 1.0 / math.sqrt(36.0 * b.L ** 2 + 648.0 * b.K_m * b.G ** 2
                         + 72.0 * math.sqrt(2.0 * b.K_m) * b.G * b.L)
    return min(t1, t2)


def step_size_rceg(b: GeometryBounds) -> float:
    """Corrected-extragradient step size: sqrt(sigma_c / (4 zeta_c L^2)).

    This method's analysis works at scale 3D/2, so its distortion rates
    are evaluated there rather than at 91D/81 and 7D/5.
    """
    zeta_c = zeta(b.kappa, 1.5 * b.D)
    sigma_c = sigma(b.K, 1.5 * b.D)
    if sigma_c <= 0:
        raise DomainError("corrected-extragradient scale 3D/2 leaves sigma > 0 domain")
    return math.sqrt(sigma_c / (4.0 * zeta_c * b.L ** 2))


def rho_coefficient(b: GeometryBounds, eta: float) -> float:
    """The descent coefficient (24L^2+432K_mG^2+48GL sqrt(2K_m)) eta^2 - 2/3.

    Negative under the past-extragradient step size; appears as a
    diagnostic column in solver traces.
    """
    return ((24.0 * b.L ** 2 + 432.0 * b.K_m * b.G ** 2
             + 48.0 * b.G * b.L * math.sqrt(2.0 * b.K_m)) * eta ** 2 - 2.0 / 3.0)


def sos_certificate_check(a, b, c, L_eta: float, tol: float = 1e-10) -> bool:
    """Check the hypotheses of the norm-contraction certificate.

    For vectors (or same-base tangents) a, b, c and L_eta <= 1, the two
    hypotheses are

        <a - c, b> >= 0      and      ||b - c||^2 <= L_eta^2 ||b - a||^2.

    Returns ``True`` exactly when both hold; in that case the conclusion
    ||c|| <= ||a|| is asserted (within ``tol``) and a
    :class:`~rvikit.exceptions.CertificateError` is raised if it fails.
    """
    if not 0.0 <= L_eta <= 1.0 + 1e-15:
        raise DomainError("certificate requires L_eta in [0, 1]")
    from ..manifolds.base import Tangent  # local import to avoid a cycle

    if isinstance(a, Tangent):
        base = a.base
        if not (b.base.same_base(base) and c.base.same_base(base)):
            raise ContractViolation("certificate tangents must share a base point")
        man, x = base.manifold, base.coords
        av, bv, cv = a.components, b.components, c.components
        ip = lambda u, v: man.inner(x, u, v)
    else:
        av = np.asarray(a, dtype=float).reshape(-1)
        bv = np.asarray(b, dtype=float).reshape(-1)
        cv = np.asarray(c, dtype=float).reshape(-1)
        ip = lambda u, v: float(np.dot(u, v))

    hyp1 = ip(av - cv, bv) >= -1e-12
    hyp2 = ip(bv - cv, bv - cv) <= L_eta ** 2 * ip(bv - av, bv - av) + 1e-12
    if not (hyp1 and hyp2):
        return False
    na = math.sqrt(max(ip(av, av), 0.0))
    nc = math.sqrt(max(ip(cv, cv), 0.0))
    if nc > na + tol:
        raise CertificateError(
            f"certificate conclusion failed: ||c|| = {nc!r} > ||a|| = {na!r}")
    return True
