"""Optimistic mirror descent over pluggable Bregman geometries.

The library couples three layers:

* geometries (distance-generating functions, divergences, prox-mappings and
  their Legendre exponents),
* the optimistic mirror descent / mirror-prox recursions with a replayable
  stochastic oracle,
* an experiment harness that measures last-iterate convergence exponents and
  checks them against the closed-form rate predictions, plus numerical
  verifiers for the underlying sequence bounds.
"""

__version__ = "0.1.0"

from .domains import (Domain, full_space, get_domain, half_line, simplex,
                      unit_ball, unit_interval)
from .errors import (ConfigError, DivergenceError, DomainError,
                     InsufficientDataError, LegendreOmdError,
                     NonPositiveValuesError, NumericalError,
                     PreconditionError, ProxDomainError)
from .geometry import (DEFAULT_RADII, GeometrySpec, LegendreExponent,
                       divergence, estimate_legendre_exponent, eval_h,
                       get_geometry, grad_h, legendre_exponent, prox,
                       registry_cases)
from .problems import (OracleSpec, ProblemSpec, affine_diag, bilinear,
                       eval_field, get_problem, linear1d, oracle_gaussian,
                       oracle_none, query_oracle, verify_constants)
from .algorithms import (StepSchedule, Trajectory, check_descent_inequality,
                         estimate_stability, run_mirror_prox, run_omd,
                         stability_lower_bound)
from .sequences import (LEMMA_IDS, RecursionSpec, c_const,
                        iterate_equality_recursion, power_condition_constant,
                        run_lemma_suite, sample_spec, step_exponent_forms,
                        verify_lemma_bound)
from .harness import (ExperimentConfig, RateEstimate, RatePrediction,
                      estimate_rate, predict_rate, reproduce_table,
                      run_trials)

__all__ = [
    "__version__",
    "Domain", "full_space", "get_domain", "half_line", "simplex", "unit_ball",
    "unit_interval",
    "ConfigError", "DivergenceError", "DomainError", "InsufficientDataError",
    "LegendreOmdError", "NonPositiveValuesError", "NumericalError",
    "PreconditionError", "ProxDomainError",
    "DEFAULT_RADII", "GeometrySpec", "LegendreExponent", "divergence",
    "estimate_legendre_exponent", "eval_h", "get_geometry", "grad_h",
    "legendre_exponent", "prox", "registry_cases",
    "OracleSpec", "ProblemSpec", "affine_diag", "bilinear", "eval_field",
    "get_problem", "linear1d", "oracle_gaussian", "oracle_none",
    "query_oracle", "verify_constants",
    "StepSchedule", "Trajectory", "check_descent_inequality",
    "estimate_stability", "run_mirror_prox", "run_omd",
    "stability_lower_bound",
    "LEMMA_IDS", "RecursionSpec", "c_const", "iterate_equality_recursion",
    "power_condition_constant", "run_lemma_suite", "sample_spec",
    "step_exponent_forms", "verify_lemma_bound",
    "ExperimentConfig", "RateEstimate", "RatePrediction", "estimate_rate",
    "predict_rate", "reproduce_table", "run_trials",
]
