from .config import (
    ExperimentConfig,
    ValidatorSpec,
    apply_overrides,
    load_config_file,
    parse_mapping,
)
from .rates import (
    MIN_FIT_POINTS,
    RateFit,
    default_burn_in,
    fit_rate,
    fit_rate_points,
    load_trace_csv,
)
from .runner import (
    EXIT_ABORT,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_VIOLATION,
    ExperimentResult,
    ValidatorReport,
    run_experiment,
    run_validators,
)

__all__ = [
    "ExperimentConfig", "ValidatorSpec", "load_config_file", "apply_overrides",
    "parse_mapping", "RateFit", "fit_rate", "fit_rate_points", "load_trace_csv",
    "MIN_FIT_POINTS", "default_burn_in",
    "ExperimentResult", "ValidatorReport", "run_experiment",
    "run_validators", "EXIT_OK", "EXIT_CONFIG", "EXIT_VIOLATION", "EXIT_ABORT",
]
