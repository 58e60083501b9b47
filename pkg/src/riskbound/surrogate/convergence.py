"""
Spectral convergence of surrogate moments against reference values.
"""

from dataclasses import dataclass

from riskbound.config import logger
from riskbound.distributions import Distribution
from riskbound.models import Model
from riskbound.surrogate.collocation import collocation_rule, solve_at_nodes
from riskbound.surrogate.expansion import compute_coefficients, mean, second_moment


@dataclass(frozen=True)
class ConvergenceRow:
    order: int
    mean: float
    second_moment: float
    mean_error: float
    second_moment_error: float


def _relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference) if reference != 0 else abs(value)


def convergence_study(
    model: Model,
    orders: list[int],
    reference: tuple[float, float],
    laws: tuple[Distribution, Distribution],
    second_order: int | None = None,
    mode: str = 'output',
    workers: int | None = None,
) -> list[ConvergenceRow]:
    """
    Relative errors of surrogate mean and second moment per collocation order.

    Args:
        model: Model whose output is expanded
        orders: Collocation orders to sweep (applied to both dimensions)
        reference: Exact (mean, second moment) of the output
        laws: Nominal laws of (Z1, Z2)
        second_order: Fixed order for Z2 (1 for scalar problems independent of z2)
        mode: Collocation mode passed to solve_at_nodes
        workers: Process count for non-vectorized models

    Returns:
        One ConvergenceRow per order, in the given order
    """
    ref_mean, ref_second = reference
    rows = []
    for order in orders:
        rule = collocation_rule(laws[0], laws[1], (order, order if second_order is None else second_order))
        surrogate = compute_coefficients(solve_at_nodes(model, rule, mode, workers))
        m, s2 = mean(surrogate), second_moment(surrogate)
        row = ConvergenceRow(order, m, s2, _relative_error(m, ref_mean), _relative_error(s2, ref_second))
        logger.debug(f"[Surrogate] order {order}: mean error {row.mean_error:.3e}, second moment error {row.second_moment_error:.3e}")
        rows.append(row)
    return rows
