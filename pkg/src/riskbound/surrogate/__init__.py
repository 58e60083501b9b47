"""
Stochastic-collocation gPC surrogates.
"""

from riskbound.surrogate.collocation import CollocationGrid, collocation_rule, solve_at_nodes
from riskbound.surrogate.convergence import ConvergenceRow, convergence_study
from riskbound.surrogate.expansion import (
    Surrogate,
    compute_coefficients,
    evaluate,
    mean,
    second_moment,
    surrogate_evaluator,
    variance,
)

__all__ = [
    'CollocationGrid',
    'ConvergenceRow',
    'Surrogate',
    'collocation_rule',
    'compute_coefficients',
    'convergence_study',
    'evaluate',
    'mean',
    'second_moment',
    'solve_at_nodes',
    'surrogate_evaluator',
    'variance',
]
