"""
Risk-sensitive integrals, ambiguity-set bounds and the optimal-c search.
"""

from riskbound.riskbounds.conditional import (
    TRANSFORMS,
    Dependence,
    TransformedEvaluator,
    conditional_config,
    conditional_epistemic_rules,
    lambda1_bar_c,
    lambda2_bar_c,
    shift,
    shift_dependence,
)
from riskbound.riskbounds.curve import RiskCurve, bound, relative_errors, sign_changes, sweep
from riskbound.riskbounds.duality import (
    DualityReport,
    MonteCarloEstimate,
    ambiguity_radius,
    mc_estimate,
    verify_duality_bound,
)
from riskbound.riskbounds.integrals import (
    LAMBDA_FORMS,
    RiskConfig,
    lambda1_c,
    lambda2_c,
    lambda_c,
    lambda_form,
    log_c_grid,
    risk_config,
)
from riskbound.riskbounds.limits import lambda1_infinity
from riskbound.riskbounds.optimize import (
    OptimalC,
    finite_minimum_criterion,
    finite_minimum_predicted,
    minimize_bound,
    optimal_c,
)

__all__ = [
    'Dependence',
    'DualityReport',
    'LAMBDA_FORMS',
    'MonteCarloEstimate',
    'OptimalC',
    'RiskConfig',
    'RiskCurve',
    'TRANSFORMS',
    'TransformedEvaluator',
    'ambiguity_radius',
    'bound',
    'conditional_config',
    'conditional_epistemic_rules',
    'finite_minimum_criterion',
    'finite_minimum_predicted',
    'lambda1_bar_c',
    'lambda1_c',
    'lambda1_infinity',
    'lambda2_bar_c',
    'lambda2_c',
    'lambda_c',
    'lambda_form',
    'log_c_grid',
    'mc_estimate',
    'minimize_bound',
    'optimal_c',
    'relative_errors',
    'risk_config',
    'shift',
    'shift_dependence',
    'sign_changes',
    'sweep',
    'verify_duality_bound',
]
