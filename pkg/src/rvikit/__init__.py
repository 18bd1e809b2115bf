"""Toolkit for variational inequalities on Riemannian manifolds.

The package bundles four layers:

* :mod:`rvikit.manifolds` -- geometry kernel (sphere, hyperboloid, SPD,
  Euclidean, products) with exponential/logarithm maps, parallel transport,
  and strict representation contracts.
* :mod:`rvikit.geometry` -- curvature-dependent trigonometric constants,
  comparison-inequality probes, holonomy defect bounds, and the algebraic
  norm-contraction certificate used by the solver analysis.
* :mod:`rvikit.problems` -- a catalog of monotone vector-field problems
  (saddle problems, Fréchet means, bilinear games) with certified
  assumptions and gap metrics.
* :mod:`rvikit.solvers` -- extragradient-family iterations driven purely by
  manifold primitives, with per-iteration invariant instrumentation.

The :mod:`rvikit.harness` layer adds config-driven experiment execution and
a small command-line front end.
"""

from . import geometry, harness, manifolds, problems, solvers
from .exceptions import (
    AveragingError,
    CertificateError,
    ConfigError,
    ContractViolation,
    DomainError,
    InjectivityError,
    RvikitError,
    SolverAbort,
)

__version__ = "0.1.0"

__all__ = [
    "manifolds", "geometry", "problems", "solvers", "harness",
    "RvikitError", "ContractViolation", "InjectivityError", "DomainError",
    "AveragingError", "CertificateError", "SolverAbort", "ConfigError",
    "__version__",
]
