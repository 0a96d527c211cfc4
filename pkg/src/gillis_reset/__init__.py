"""First-hitting-time statistics for the centrally biased lattice walk
(the Gillis model) under geometric stochastic resetting.

Layering: `hypergeom` (special-function kernel) -> `gillis` (exact
reset-free generating functions and oracles) -> `resetting` (generic
renewal dressing) -> `asymptotics` / `optimize` (limit laws, optimal
and threshold resetting probabilities) -> `montecarlo` (seeded
trajectory simulation) -> `cli` / `validate` (machine-readable surface
and cross-check suites).
"""

from . import asymptotics, errors, gillis, hypergeom, montecarlo, optimize, resetting
from .asymptotics import (
    AsymptoteLaw,
    LogForm,
    SlowlyVaryingExpansion,
    TailCase,
    appendix_b_case,
    coeff_A,
    coeff_B,
    coeff_C,
    coeff_K,
    coeff_calB,
    coeff_small_c,
    large_r_mean_law,
    log_case_constant,
    slowly_varying_L,
    small_r_mean_law,
    small_r_std_law,
)
from .gillis import (
    GenFunPoint,
    GillisHittingGf,
    PmfPrefix,
    RegimeClass,
    RegimeKind,
    WalkSpec,
    classify_regime,
    free_mean_fht,
    hit_probability,
    hitting_gf,
    hitting_gf_coefficients,
    hitting_gf_point,
    hitting_pmf_prefix,
    occupation_gf,
    return_gf,
    transition_probability,
)
from .hypergeom import (
    DEFAULT_POLICY,
    EvalPolicy,
    HypergeomParams,
    digamma,
    gauss_2f1,
    gauss_2f1_derivative,
    gauss_2f1_log_equal,
    gauss_2f1_log_minus_one,
    gauss_2f1_near_one,
    gauss_2f1_series,
    log_gamma,
    pochhammer,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    TrajectoryStream,
    empirical_pmf,
    estimate,
    read_samples,
    sample_hitting_times,
    simulate_one,
    write_samples,
)
from .optimize import (
    Benefit,
    OptimizationResult,
    ThresholdResult,
    cv_optimality_residual,
    find_optimal_r,
    find_threshold_r,
    optimal_r_eps1,
    optimal_r_eps_minus1,
    resetting_beneficial,
    threshold_eps1,
)
from .resetting import (
    FreeProcessGf,
    MomentSummary,
    ResetParams,
    cv_identity_residual,
    mean_fht,
    moment_summary,
    reset_gf,
    reset_gf_coefficients,
    reset_pmf_prefix,
    second_moment_fht,
    survival_gf,
)

__version__ = "0.1.0"
