"""
Risk-sensitive integrals over a tensor quadrature.

With F_ij = F(x_i, y_j), aleatoric weights w1 and epistemic weights w2:

    lambda  = (1/c) log sum_ij e^{c F_ij} w1_i w2_j
    lambda1 = (1/c) log sum_j e^{c sum_i F_ij w1_i} w2_j
    lambda2 = sum_i w1_i (1/c) log sum_j e^{c F_ij} w2_j

Every exponential sum goes through a max-shifted log-sum-exp, so any c > 0
is safe. For each c, lambda1 <= lambda2 <= lambda.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import logsumexp

from riskbound.config import C_MAX, C_MIN, C_POINTS, RISK_QUADRATURE_ORDER, logger
from riskbound.distributions import Distribution, basis_for
from riskbound.errors import InputError, ParameterDomainError
from riskbound.orthopoly import QuadratureRule, gauss_rule

Evaluator = Callable[[NDArray, NDArray], NDArray]


def log_c_grid(c_min: float = C_MIN, c_max: float = C_MAX, points: int = C_POINTS) -> NDArray:
    """Logarithmically spaced risk-sensitivity grid, both ends included."""
    if not (0 < c_min < c_max) or not math.isfinite(c_max):
        raise ParameterDomainError(f"c grid needs 0 < c_min < c_max < inf, got [{c_min}, {c_max}]")
    if points < 2:
        raise ParameterDomainError(f"c grid needs at least 2 points, got {points}")
    return np.geomspace(c_min, c_max, int(points))


def _check_rule(rule: QuadratureRule, name: str):
    total = math.fsum(rule.weights)
    if abs(total - 1.0) > 1e-12 or np.any(rule.weights <= 0):
        raise ParameterDomainError(f"{name} rule weights must be positive and sum to 1, got sum {total!r}")


def _check_c(c: float) -> float:
    c = float(c)
    if not (c > 0 and math.isfinite(c)):
        raise ParameterDomainError(f"Risk sensitivity c must be positive and finite, got {c}")
    return c


def inner_means(weights: NDArray, matrix: NDArray) -> NDArray:
    """Column averages sum_i w_i M_ij, each compensated and in index order."""
    weighted = weights[:, None] * matrix
    return np.array([math.fsum(weighted[:, j]) for j in range(matrix.shape[1])])


def integrand_matrix(evaluator: Evaluator, first: ArrayLike, second: ArrayLike) -> NDArray:
    """F on the outer grid first x second as an (n1, n2) matrix; non-finite values are rejected."""
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    values = np.asarray(evaluator(first[:, None], second[None, :]), dtype=float)
    values = np.array(np.broadcast_to(values, (first.size, second.size)))
    bad = ~np.isfinite(values)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise InputError(f"Non-finite integrand {values[i, j]} at (z1={first[i]:.6g}, z2={second[j]:.6g})")
    return values


@dataclass(frozen=True, eq=False)
class RiskConfig:
    """
    Integrand, quadrature rules for mu (aleatoric) and gamma (epistemic
    nominal), and the c grid. The integrand matrix is computed once.
    """
    evaluator: Evaluator
    aleatoric: QuadratureRule
    epistemic: QuadratureRule
    c_grid: NDArray = field(default_factory=log_c_grid)
    aleatoric_law: Distribution | None = None
    epistemic_law: Distribution | None = None

    def __post_init__(self):
        _check_rule(self.aleatoric, 'Aleatoric')
        _check_rule(self.epistemic, 'Epistemic')
        grid = np.ascontiguousarray(self.c_grid, dtype=float).ravel()
        if grid.size == 0 or np.any(~np.isfinite(grid)) or np.any(grid <= 0):
            raise ParameterDomainError("c grid values must be positive and finite")
        grid.setflags(write=False)
        object.__setattr__(self, 'c_grid', grid)

    @cached_property
    def F(self) -> NDArray:
        """Integrand on the (aleatoric x epistemic) grid, shape (n1, n2)."""
        matrix = integrand_matrix(self.evaluator, self.aleatoric.nodes, self.epistemic.nodes)
        matrix.setflags(write=False)
        logger.debug(f"[Risk] Integrand on {matrix.shape[0]}x{matrix.shape[1]} nodes, range [{matrix.min():.6g}, {matrix.max():.6g}]")
        return matrix

    @cached_property
    def weights(self) -> NDArray:
        return np.outer(self.aleatoric.weights, self.epistemic.weights)

    @cached_property
    def epistemic_means(self) -> NDArray:
        """sum_i F_ij w1_i for every epistemic node j."""
        return inner_means(self.aleatoric.weights, self.F)

    def mean(self) -> float:
        """Nominal expectation of F under mu x gamma."""
        return math.fsum((self.F * self.weights).ravel())

    def with_evaluator(self, evaluator: Evaluator) -> 'RiskConfig':
        return RiskConfig(evaluator, self.aleatoric, self.epistemic, self.c_grid, self.aleatoric_law, self.epistemic_law)


def risk_config(
    evaluator: Evaluator,
    aleatoric_law: Distribution,
    epistemic_law: Distribution,
    orders: tuple[int, int] | None = None,
    c_grid: ArrayLike | None = None,
) -> RiskConfig:
    """
    RiskConfig with Gauss rules of the laws' gPC bases.

    Args:
        evaluator: Vectorized F(z1, z2)
        aleatoric_law: Law mu of Z1
        epistemic_law: Nominal law gamma of Z2
        orders: Quadrature orders per dimension (default RISK_QUADRATURE_ORDER each)
        c_grid: Risk-sensitivity grid (default log grid 0.01..1000, 200 points)

    Returns:
        RiskConfig ready for the lambda functions
    """
    n1, n2 = orders or (RISK_QUADRATURE_ORDER, RISK_QUADRATURE_ORDER)
    return RiskConfig(
        evaluator=evaluator,
        aleatoric=gauss_rule(basis_for(aleatoric_law), n1),
        epistemic=gauss_rule(basis_for(epistemic_law), n2),
        c_grid=log_c_grid() if c_grid is None else np.asarray(c_grid, dtype=float),
        aleatoric_law=aleatoric_law,
        epistemic_law=epistemic_law,
    )


def log_mean_exp(values: NDArray, weights: NDArray, c: float) -> float:
    """(1/c) log sum_k w_k e^{c v_k}, max-shifted."""
    return float(logsumexp(c * values, b=weights)) / c


def lambda_c(cfg: RiskConfig, c: float) -> float:
    """Ordinary risk-sensitive integral over mu x gamma."""
    c = _check_c(c)
    return log_mean_exp(cfg.F.ravel(), cfg.weights.ravel(), c)


def lambda1_c(cfg: RiskConfig, c: float) -> float:
    """Risk-sensitive in Z2 applied to the mu-average of F."""
    c = _check_c(c)
    return log_mean_exp(cfg.epistemic_means, cfg.epistemic.weights, c)


def row_log_mean_exp(matrix: NDArray, weights: NDArray, c: float) -> NDArray:
    """(1/c) log sum_j w_j e^{c M_ij} for every row i."""
    return logsumexp(c * matrix, b=weights[None, :], axis=1) / c


def lambda2_c(cfg: RiskConfig, c: float) -> float:
    """mu-average of the per-aleatoric-node risk-sensitive integral over Z2."""
    c = _check_c(c)
    return math.fsum(cfg.aleatoric.weights * row_log_mean_exp(cfg.F, cfg.epistemic.weights, c))


# --which selector -> integral
LAMBDA_FORMS: dict[int, Callable[[RiskConfig, float], float]] = {
    0: lambda_c,
    1: lambda1_c,
    2: lambda2_c,
}


def lambda_form(which: int) -> Callable[[RiskConfig, float], float]:
    try:
        return LAMBDA_FORMS[int(which)]
    except (KeyError, ValueError):
        raise ParameterDomainError(f"Integral selector must be 0, 1 or 2, got {which!r}")
