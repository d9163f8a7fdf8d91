"""Calibration diagnostics and surrogate regret bounds for binary
classification with label-dependent costs."""

from .calibration import (
    CalibrationReport,
    calibration_fn,
    check_calibrated_analytic,
    check_calibrated_numeric,
    mu_curve,
    uniform_calibration_fn,
)
from .curves import (
    ConvexEnvelope,
    Knot,
    SampledCurve,
    biconjugate,
    envelope_eval,
    envelope_invert,
    jump_at_bmin,
    nu_curve,
    psi_costinsensitive,
    regret_bound,
)
from .errors import (
    CostcalError,
    DomainError,
    PreconditionError,
    UnsupportedFamilyError,
    UnsupportedLimitError,
    VacuousBoundError,
)
from .families import (
    ALPHA_SIGMOID_GAMMA2,
    FAMILIES,
    ClosedForms,
    UnevenMarginSpec,
    alpha_of_gamma,
    closed_forms,
    make_uneven_loss,
    sigmoid_c_minus,
    sigmoid_t_minus,
)
from .losses import (
    CostParam,
    Loss,
    PartialLoss,
    alpha_transform,
    conditional_risk,
    constrained_optimal_risk,
    cost_regret,
    h_alpha,
    h_cc,
    optimal_conditional_risk,
    theta_alpha,
)
from .oracle import (
    BoundTrialRecord,
    DecisionAssignment,
    FiniteDistribution,
    brute_force_min,
    empirical_regrets,
    finite_diff_check,
    fuzz_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_SIGMOID_GAMMA2",
    "FAMILIES",
    "BoundTrialRecord",
    "CalibrationReport",
    "ClosedForms",
    "ConvexEnvelope",
    "CostParam",
    "CostcalError",
    "DecisionAssignment",
    "DomainError",
    "FiniteDistribution",
    "Knot",
    "Loss",
    "PartialLoss",
    "PreconditionError",
    "SampledCurve",
    "UnevenMarginSpec",
    "UnsupportedFamilyError",
    "UnsupportedLimitError",
    "VacuousBoundError",
    "alpha_of_gamma",
    "alpha_transform",
    "biconjugate",
    "brute_force_min",
    "calibration_fn",
    "check_calibrated_analytic",
    "check_calibrated_numeric",
    "closed_forms",
    "conditional_risk",
    "constrained_optimal_risk",
    "cost_regret",
    "empirical_regrets",
    "envelope_eval",
    "envelope_invert",
    "finite_diff_check",
    "fuzz_bound",
    "h_alpha",
    "h_cc",
    "jump_at_bmin",
    "make_uneven_loss",
    "mu_curve",
    "nu_curve",
    "optimal_conditional_risk",
    "psi_costinsensitive",
    "regret_bound",
    "sigmoid_c_minus",
    "sigmoid_t_minus",
    "theta_alpha",
    "uniform_calibration_fn",
]
