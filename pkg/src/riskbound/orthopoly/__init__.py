"""
Orthonormal polynomial families and Gauss quadrature rules.
"""

from riskbound.orthopoly.families import (
    FamilyKind,
    PolynomialFamily,
    basis_table,
    evaluate_basis,
    recurrence_coefficients,
)
from riskbound.orthopoly.quadrature import QuadratureRule, TensorRule, gauss_rule, tensor_rule

__all__ = [
    'FamilyKind',
    'PolynomialFamily',
    'QuadratureRule',
    'TensorRule',
    'basis_table',
    'evaluate_basis',
    'gauss_rule',
    'recurrence_coefficients',
    'tensor_rule',
]
