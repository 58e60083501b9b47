"""
Checks of the duality bound and a nested Monte Carlo estimator of the integrals.
"""

import math
from dataclasses import dataclass

import numpy as np

from riskbound.config import logger
from riskbound.distributions import (
    Distribution,
    basis_for,
    relative_entropy_closed,
    relative_entropy_numeric,
    sample,
)
from riskbound.errors import ConfigurationError, IncompatiblePairError, InputError
from riskbound.orthopoly import gauss_rule
from riskbound.riskbounds.integrals import RiskConfig, inner_means, integrand_matrix, lambda1_c, lambda_form


def ambiguity_radius(alternative: Distribution, nominal: Distribution) -> float:
    """R(alternative || nominal): closed form when one exists, numerical oracle otherwise."""
    try:
        return relative_entropy_closed(alternative, nominal)
    except IncompatiblePairError:
        logger.debug(f"[Entropy] No closed form for {alternative} vs {nominal}, using the oracle")
        return relative_entropy_numeric(alternative, nominal)


@dataclass(frozen=True)
class DualityReport:
    lhs: float  # E[F] under mu x theta
    rhs: float  # R(theta || gamma) / c + lambda1_c
    relative_entropy: float
    satisfied: bool


def verify_duality_bound(cfg: RiskConfig, c: float, alternative: Distribution, tol: float = 1e-9) -> DualityReport:
    """
    Compare E_{mu x theta}[F] with R(theta || gamma)/c + lambda1_c.

    The expectation under theta uses a Gauss rule of theta's own basis with
    the epistemic rule's order.

    Raises:
        ConfigurationError: If cfg does not carry the epistemic nominal law
    """
    if cfg.epistemic_law is None:
        raise ConfigurationError("Duality check needs the epistemic nominal law")
    radius = ambiguity_radius(alternative, cfg.epistemic_law)

    rule = gauss_rule(basis_for(alternative), cfg.epistemic.order)
    means = inner_means(cfg.aleatoric.weights, integrand_matrix(cfg.evaluator, cfg.aleatoric.nodes, rule.nodes))
    lhs = math.fsum(rule.weights * means)

    rhs = math.inf if math.isinf(radius) else radius / c + lambda1_c(cfg, c)
    report = DualityReport(lhs, rhs, radius, lhs <= rhs + tol)
    logger.debug(f"[Risk] Duality at c={c:g}, theta={alternative}: {lhs:.9g} <= {rhs:.9g} ({report.satisfied})")
    return report


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float


def _log_mean_exp_estimate(values: np.ndarray, c: float, groups: int) -> MonteCarloEstimate:
    """(1/c) log mean e^{c v} with a delta-method error from `groups` independent group means."""
    shift = float(np.max(values))
    scaled = np.exp(c * (values - shift))
    group_means = scaled.reshape(groups, -1).mean(axis=1)
    total = float(group_means.mean())
    estimate = shift + math.log(total) / c
    stderr = float(group_means.std(ddof=1)) / (math.sqrt(groups) * total * c)
    return MonteCarloEstimate(estimate, stderr)


def mc_estimate(cfg: RiskConfig, which: int, c: float, n_outer: int, n_inner: int, seed: int) -> MonteCarloEstimate:
    """
    Nested Monte Carlo estimate of lambda^which_c.

    Form 0 draws n_outer epistemic values and n_inner aleatoric values for
    each, and pools all n_outer * n_inner pairs; pairs sharing an epistemic
    value form one group. Form 1 draws the same samples and averages F over
    the n_inner aleatoric draws of each group.
    Form 2 draws n_outer aleatoric values and applies the risk-sensitive
    average over n_inner epistemic draws for each. The standard error comes
    from the variance across outer samples, so at least two are needed.

    Args:
        cfg: Risk configuration carrying both laws
        which: Integral selector 0, 1 or 2
        c: Risk sensitivity
        n_outer: Outer sample count
        n_inner: Inner sample count per outer sample
        seed: Seed of the numpy Generator (reproducible)

    Returns:
        MonteCarloEstimate(estimate, stderr)
    """
    lambda_form(which)
    if cfg.aleatoric_law is None or cfg.epistemic_law is None:
        raise ConfigurationError("Monte Carlo estimation needs both input laws")
    if n_outer < 2 or n_inner < 1:
        raise InputError(f"Monte Carlo needs n_outer >= 2 and n_inner >= 1, got n_outer={n_outer}, n_inner={n_inner}")

    rng = np.random.default_rng(seed)
    if int(which) == 2:
        x = sample(cfg.aleatoric_law, n_outer, rng)
        y = sample(cfg.epistemic_law, (n_outer, n_inner), rng)
        values = np.asarray(cfg.evaluator(x[:, None], y), dtype=float)
    else:
        y = sample(cfg.epistemic_law, n_outer, rng)
        x = sample(cfg.aleatoric_law, (n_outer, n_inner), rng)
        values = np.asarray(cfg.evaluator(x, y[:, None]), dtype=float)
    values = np.broadcast_to(values, (n_outer, n_inner))
    if not np.all(np.isfinite(values)):
        raise InputError("Non-finite integrand in Monte Carlo samples")

    if int(which) == 0:
        result = _log_mean_exp_estimate(values.ravel(), c, n_outer)
    elif int(which) == 1:
        result = _log_mean_exp_estimate(values.mean(axis=1), c, n_outer)
    else:
        shift = values.max(axis=1, keepdims=True)
        per_outer = (shift + np.log(np.mean(np.exp(c * (values - shift)), axis=1, keepdims=True)) / c).ravel()
        stderr = float(per_outer.std(ddof=1)) / math.sqrt(n_outer)
        result = MonteCarloEstimate(float(per_outer.mean()), stderr)

    logger.debug(f"[Risk] Monte Carlo lambda{int(which) or ''}(c={c:g}) = {result.estimate:.9g} +- {result.stderr:.3g}")
    return result
