from .constants import (
    GeometryBounds,
    derive_bounds,
    jacobi_S,
    jacobi_ratio,
    jacobi_s,
    rho_coefficient,
    sigma,
    sos_certificate_check,
    step_size_rceg,
    step_size_reg,
    step_size_rpeg,
    zeta,
)
from .probes import (
    CHECKS,
    RESIDUAL_TOL,
    ProbeReport,
    SweepSummary,
    cosine_law_lower_check,
    cosine_law_upper_check,
    distance_comparison_check,
    hessian_comparison_check,
    holonomy_defect,
    run_sweep,
    sample_triangle,
    write_sweep_csv,
)

__all__ = [
    "zeta", "sigma", "jacobi_s", "jacobi_S", "jacobi_ratio",
    "GeometryBounds", "derive_bounds", "rho_coefficient",
    "step_size_reg", "step_size_rpeg", "step_size_rceg",
    "sos_certificate_check",
    "ProbeReport", "SweepSummary", "RESIDUAL_TOL", "CHECKS",
    "holonomy_defect", "cosine_law_lower_check", "cosine_law_upper_check",
    "hessian_comparison_check", "distance_comparison_check",
    "sample_triangle", "run_sweep", "write_sweep_csv",
]
