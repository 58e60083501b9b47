"""
The c -> inf limit of lambda1 for a uniform epistemic nominal on [lo, hi]:

    lim lambda1_c = sup_{y in [lo, hi]} int F(x, y) mu(dx)

found by a grid search over y, refined around the best point.
"""

import numpy as np
from numpy.typing import ArrayLike

from riskbound.config import (
    LIMIT_COARSE_POINTS,
    LIMIT_MAX_PASSES,
    LIMIT_REFINE_POINTS,
    LIMIT_TOLERANCE,
    MSG_NON_UNIFORM_NOMINAL,
    logger,
)
from riskbound.distributions import DistKind
from riskbound.errors import ConfigurationError
from riskbound.riskbounds.integrals import RiskConfig, inner_means, integrand_matrix


def epistemic_interval(cfg: RiskConfig) -> tuple[float, float]:
    law = cfg.epistemic_law
    if law is None or law.kind != DistKind.UNIFORM:
        raise ConfigurationError(MSG_NON_UNIFORM_NOMINAL.format(kind='unknown' if law is None else law.kind.value))
    return law.lo, law.hi


def lambda1_infinity(cfg: RiskConfig, y_search_grid: ArrayLike | None = None) -> float:
    """
    Supremum over the epistemic interval of the mu-average of F(., y).

    Args:
        cfg: Risk configuration with a uniform epistemic nominal
        y_search_grid: Initial search points (default LIMIT_COARSE_POINTS evenly spaced)

    Returns:
        The limit value

    Raises:
        ConfigurationError: If the epistemic nominal is not uniform on a bounded interval
    """
    lo, hi = epistemic_interval(cfg)
    ys = np.linspace(lo, hi, LIMIT_COARSE_POINTS) if y_search_grid is None else np.sort(np.asarray(y_search_grid, dtype=float))

    def averages(points):
        return inner_means(cfg.aleatoric.weights, integrand_matrix(cfg.evaluator, cfg.aleatoric.nodes, points))

    values = averages(ys)
    k = int(np.argmax(values))
    best = float(values[k])
    for refinement in range(LIMIT_MAX_PASSES):
        left, right = ys[max(k - 2, 0)], ys[min(k + 2, ys.size - 1)]
        if right <= left:
            break
        ys = np.linspace(left, right, LIMIT_REFINE_POINTS)
        values = averages(ys)
        k = int(np.argmax(values))
        change = float(values[k]) - best
        best = max(best, float(values[k]))
        logger.debug(f"[Risk] Limit pass {refinement + 1}: sup {best:.12g} near y={ys[k]:.9g}")
        if abs(change) < LIMIT_TOLERANCE:
            break
    return best
