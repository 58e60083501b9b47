"""
Conditional variants of the hybrid integrals for dependent inputs.

lambda1_bar: Z1 depends on Z2 through Z1 = T(Z, Z2) with Z independent of
Z2, so G(z, z2) = F(T(z, z2), z2) is integrated by lambda1 with Z's rule.

lambda2_bar: the epistemic nominal depends on the aleatoric value,
gamma(dy | x), given as one quadrature rule per aleatoric node.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.config import RISK_QUADRATURE_ORDER, logger
from riskbound.distributions import Distribution, basis_for
from riskbound.errors import ConfigurationError, NodeEvaluationError
from riskbound.orthopoly import QuadratureRule, gauss_rule
from riskbound.riskbounds.integrals import (
    Evaluator,
    RiskConfig,
    _check_c,
    _check_rule,
    lambda1_c,
    log_mean_exp,
)


def shift(z: ArrayLike, z2: ArrayLike) -> NDArray:
    """Z1 = Z + Z2."""
    return np.asarray(z, dtype=float) + np.asarray(z2, dtype=float)


# JSON dependence "kind" -> transform
TRANSFORMS: dict[str, Callable[[NDArray, NDArray], NDArray]] = {
    'shift': shift,
}


@dataclass(frozen=True, eq=False)
class Dependence:
    """Z1 = transform(Z, Z2), Z independent of Z2 and integrated by `base`."""
    transform: Callable[[NDArray, NDArray], NDArray]
    base: QuadratureRule
    base_law: Distribution | None = None


def shift_dependence(base_law: Distribution, order: int = RISK_QUADRATURE_ORDER) -> Dependence:
    return Dependence(shift, gauss_rule(basis_for(base_law), order), base_law)


@dataclass(frozen=True)
class TransformedEvaluator:
    """G(z, z2) = F(T(z, z2), z2); non-finite values are reported with their (z, z2) node."""
    evaluator: Evaluator
    transform: Callable[[NDArray, NDArray], NDArray]

    def __call__(self, z: ArrayLike, z2: ArrayLike) -> NDArray:
        z, z2 = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(z2, dtype=float))
        z1 = np.broadcast_to(np.asarray(self.transform(z, z2), dtype=float), z.shape)
        values = np.broadcast_to(np.asarray(self.evaluator(z1, z2), dtype=float), z.shape)
        bad = ~np.isfinite(values)
        if np.any(bad):
            k = int(np.flatnonzero(bad.ravel())[0])
            raise NodeEvaluationError(
                f"Non-finite integrand {values.ravel()[k]} under the dependence transform (z1={z1.ravel()[k]:.6g})",
                (float(z.ravel()[k]), float(z2.ravel()[k])),
            )
        return values


def conditional_config(cfg: RiskConfig, dependence: Dependence) -> RiskConfig:
    """RiskConfig over (Z, Z2) whose lambda1 is lambda1_bar of cfg; build once and reuse across c."""
    return RiskConfig(
        evaluator=TransformedEvaluator(cfg.evaluator, dependence.transform),
        aleatoric=dependence.base,
        epistemic=cfg.epistemic,
        c_grid=cfg.c_grid,
        aleatoric_law=dependence.base_law,
        epistemic_law=cfg.epistemic_law,
    )


def lambda1_bar_c(cfg: RiskConfig, dependence: Dependence, c: float) -> float:
    return lambda1_c(conditional_config(cfg, dependence), c)


def conditional_epistemic_rules(
    cfg: RiskConfig,
    law_given: Callable[[float], Distribution],
    order: int | None = None,
) -> list[QuadratureRule]:
    """One Gauss rule of gamma(. | x_i) per aleatoric node x_i."""
    order = order or cfg.epistemic.order
    return [gauss_rule(basis_for(law_given(float(x))), order) for x in cfg.aleatoric.nodes]


def lambda2_bar_c(cfg: RiskConfig, rules: Sequence[QuadratureRule | None], c: float) -> float:
    """
    mu-average over aleatoric nodes of the risk-sensitive integral under gamma(. | x_i).

    Args:
        cfg: Supplies F and the aleatoric rule (its epistemic rule is unused)
        rules: Conditional epistemic rule for each aleatoric node, in node order
        c: Risk sensitivity

    Raises:
        ConfigurationError: If a node has no conditional rule
        NodeEvaluationError: If F is non-finite at a conditional node
    """
    c = _check_c(c)
    nodes = cfg.aleatoric.nodes
    if len(rules) != nodes.size:
        raise ConfigurationError(f"Need one conditional epistemic rule per aleatoric node ({nodes.size}), got {len(rules)}")

    per_node = np.empty(nodes.size)
    for i, (x, rule) in enumerate(zip(nodes, rules)):
        if rule is None:
            raise ConfigurationError(f"Missing conditional epistemic rule for aleatoric node {i} (z1={x:.6g})")
        _check_rule(rule, f"Conditional epistemic (node {i})")
        values = np.broadcast_to(np.asarray(cfg.evaluator(x, rule.nodes), dtype=float), rule.nodes.shape)
        bad = ~np.isfinite(values)
        if np.any(bad):
            j = int(np.flatnonzero(bad)[0])
            raise NodeEvaluationError(f"Non-finite integrand {values[j]}", (float(x), float(rule.nodes[j])))
        per_node[i] = log_mean_exp(values, rule.weights, c)

    value = math.fsum(cfg.aleatoric.weights * per_node)
    logger.debug(f"[Risk] lambda2_bar(c={c:g}) = {value:.12g} over {nodes.size} conditional rules")
    return value
