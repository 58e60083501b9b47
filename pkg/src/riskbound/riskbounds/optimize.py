"""
Optimal risk sensitivity: minimize c -> B/c + lambda_c over c in (c_min, inf].

The objective has a unique local minimum, so a discrete minimum on the
log grid brackets it and golden-section search in log(c) refines it. A
minimum at the right end of the grid is chased by doubling c; when lambda
stops changing the minimizer is reported as c* = inf.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import logsumexp

from riskbound.config import GOLDEN_TOLERANCE, MAX_DOUBLINGS, PLATEAU_TOLERANCE, logger
from riskbound.errors import DomainError, ParameterDomainError
from riskbound.riskbounds.integrals import RiskConfig, _check_c, lambda_form

PHI_RATIO = 2 / (1 + math.sqrt(5))
MAX_GOLDEN_ITERATIONS = 200


@dataclass(frozen=True)
class OptimalC:
    c_star: float  # math.inf when the infimum is approached as c -> inf
    bound_value: float
    iterations: int
    converged: bool

    @property
    def finite(self) -> bool:
        return math.isfinite(self.c_star)


def _golden(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float, int, bool]:
    """Golden-section minimum of a unimodal f on [lo, hi]; returns (argmin, minimum, iterations, converged)."""
    x1 = hi - PHI_RATIO * (hi - lo)
    x2 = lo + PHI_RATIO * (hi - lo)
    f1, f2 = f(x1), f(x2)
    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    iteration = 0
    while iteration < MAX_GOLDEN_ITERATIONS and abs(b - a) > tol:
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = b - PHI_RATIO * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + PHI_RATIO * (b - a)
            f2 = f(x2)
        iteration += 1

    x, fx = (x1, f1) if f1 <= f2 else (x2, f2)
    if f_lo < fx:
        x, fx = lo, f_lo
    elif f_hi < fx:
        x, fx = hi, f_hi
    converged = not (math.isnan(f1) or math.isnan(f2) or iteration == MAX_GOLDEN_ITERATIONS)
    return x, fx, iteration, converged


def _grid_lambdas(lam: Callable[[float], float], c_grid: NDArray) -> NDArray:
    values = np.empty(c_grid.size)
    for k, c in enumerate(c_grid):
        values[k] = lam(float(c))
        if not math.isfinite(values[k]):
            largest = float(c_grid[k - 1]) if k > 0 else None
            raise DomainError(f"lambda is non-finite at c={c:g}", largest)
    return values


def minimize_bound(
    lam: Callable[[float], float],
    B: float,
    c_grid: ArrayLike,
    tol: float = GOLDEN_TOLERANCE,
    plateau_tol: float = PLATEAU_TOLERANCE,
) -> OptimalC:
    """
    Minimize B/c + lam(c) for an arbitrary lambda function.

    Args:
        lam: c -> lambda_c
        B: Relative entropy budget (B = 0 degenerates to the smallest grid c)
        c_grid: Increasing positive grid used for bracketing
        tol: Golden-section tolerance in log(c), i.e. relative in c
        plateau_tol: |lam(2c) - lam(c)| below this reports c* = inf

    Returns:
        OptimalC with c_star = inf and bound = last lambda when no finite minimizer exists

    Raises:
        DomainError: If lambda is non-finite at an evaluated c
    """
    if B < 0 or not math.isfinite(B):
        raise ParameterDomainError(f"B must be nonnegative and finite, got {B}")
    grid = np.asarray(c_grid, dtype=float)
    lambdas = _grid_lambdas(lam, grid)
    objective = B / grid + lambdas
    k = int(np.argmin(objective))
    logger.debug(f"[Optimize] Grid minimum {objective[k]:.12g} at c={grid[k]:g} (index {k} of {grid.size})")

    if B == 0:
        return OptimalC(float(grid[k]), float(objective[k]), 0, True)

    if k == grid.size - 1:
        return _chase_to_infinity(lam, B, float(grid[-1]), float(lambdas[-1]), tol, plateau_tol)

    lo, hi = grid[max(k - 1, 0)], grid[k + 1]
    return _refine(lam, B, lo, hi, tol)


def _refine(lam: Callable[[float], float], B: float, lo: float, hi: float, tol: float) -> OptimalC:
    def objective(log_c: float) -> float:
        c = math.exp(log_c)
        value = lam(c)
        if not math.isfinite(value):
            raise DomainError(f"lambda is non-finite at c={c:g}")
        return B / c + value

    log_c, value, iterations, converged = _golden(objective, math.log(lo), math.log(hi), tol)
    logger.debug(f"[Optimize] Golden search on [{lo:g}, {hi:g}]: c*={math.exp(log_c):.9g} after {iterations} iterations")
    return OptimalC(math.exp(log_c), value, iterations, converged)


def _chase_to_infinity(
    lam: Callable[[float], float], B: float, c: float, lam_c: float, tol: float, plateau_tol: float,
) -> OptimalC:
    previous = c / 2
    for doubling in range(1, MAX_DOUBLINGS + 1):
        lam_2c = lam(2 * c)
        if not math.isfinite(lam_2c):
            raise DomainError(f"lambda is non-finite at c={2 * c:g}", c)
        if B / (2 * c) + lam_2c > B / c + lam_c:
            logger.debug(f"[Optimize] Objective turns up between c={c:g} and c={2 * c:g}")
            result = _refine(lam, B, previous, 2 * c, tol)
            return OptimalC(result.c_star, result.bound_value, result.iterations + doubling, result.converged)
        if abs(lam_2c - lam_c) < plateau_tol:
            logger.debug(f"[Optimize] lambda plateaus at {lam_2c:.12g} (c={2 * c:g}); c* = inf")
            return OptimalC(math.inf, lam_2c, doubling, True)
        previous, c, lam_c = c, 2 * c, lam_2c
    logger.warning(f"[Optimize] No plateau after {MAX_DOUBLINGS} doublings (c={c:g})")
    return OptimalC(math.inf, B / c + lam_c, MAX_DOUBLINGS, False)


def optimal_c(cfg: RiskConfig, which: int, B: float, tol: float = GOLDEN_TOLERANCE) -> OptimalC:
    """Minimizer of B/c + lambda^which_c, bracketed on cfg.c_grid."""
    form = lambda_form(which)
    result = minimize_bound(lambda c: form(cfg, c), B, cfg.c_grid, tol)
    logger.debug(f"[Optimize] form {which}: c*={result.c_star:.9g}, bound={result.bound_value:.12g}")
    return result


def _tilted_entropy(values: NDArray, weights: NDArray, c: float) -> NDArray:
    """Relative entropy of the exponentially tilted law w e^{c v} / Z against w, along the last axis."""
    log_z = logsumexp(c * values, b=weights, axis=-1, keepdims=True)
    tilted = weights * np.exp(c * values - log_z)
    return np.sum(tilted * (c * values - log_z), axis=-1)


def finite_minimum_criterion(cfg: RiskConfig, which: int, c: float) -> float:
    """
    f(c) = c H'(c) - H(c) with H(c) = c lambda_c.

    For these integrals f(c) is the relative entropy of the tilted law,
    computed from tilted quadrature weights. f is nondecreasing in c and
    d/dc (B/c + lambda_c) = (f(c) - B) / c^2, so B/c + lambda_c has a finite
    minimizer if and only if B < sup_c f(c).
    """
    c = _check_c(c)
    which = int(which)
    lambda_form(which)
    if which == 0:
        value = _tilted_entropy(cfg.F.ravel(), cfg.weights.ravel(), c)
    elif which == 1:
        value = _tilted_entropy(cfg.epistemic_means, cfg.epistemic.weights, c)
    else:
        value = math.fsum(cfg.aleatoric.weights * _tilted_entropy(cfg.F, cfg.epistemic.weights[None, :], c))
    return max(float(value), 0.0)


def finite_minimum_predicted(cfg: RiskConfig, which: int, B: float) -> bool:
    """B below the largest f(c) on the grid, i.e. the minimizer is finite."""
    return B < max(finite_minimum_criterion(cfg, which, c) for c in cfg.c_grid)
