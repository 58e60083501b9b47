"""
Risk curves: all three integrals and their ambiguity-set bounds over a c grid.
"""

import time
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.config import CSV_HEADER, CURVE_TOLERANCE, logger
from riskbound.errors import ConfigurationError, ParameterDomainError
from riskbound.riskbounds.integrals import RiskConfig, lambda1_c, lambda2_c, lambda_c


def bound(B: float, c: float, lambda_value: float) -> float:
    """B/c + lambda: bound on E_theta[F] for every theta within relative entropy B of the nominal."""
    return B / c + lambda_value


@dataclass(frozen=True, eq=False)
class RiskCurve:
    """Columns c, lambda, lambda1, lambda2 plus the bounds B/c + lambda^i."""
    c: NDArray
    lambdas: NDArray  # (rows, 3): lambda, lambda1, lambda2
    B: float = 0.0
    mean: float | None = None  # nominal E[F], when known

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        lambdas = np.asarray(self.lambdas, dtype=float).reshape(c.size, 3)
        if self.B < 0:
            raise ParameterDomainError(f"B must be nonnegative, got {self.B}")
        object.__setattr__(self, 'c', c)
        object.__setattr__(self, 'lambdas', lambdas)

    @property
    def bounds(self) -> NDArray:
        return self.B / self.c[:, None] + self.lambdas

    @property
    def columns(self) -> list[str]:
        return CSV_HEADER.split(',')

    def rows(self) -> NDArray:
        """(rows, 7) array in CSV column order."""
        return np.column_stack((self.c, self.lambdas, self.bounds))

    def ordering_violations(self, tol: float = CURVE_TOLERANCE) -> list[int]:
        """Row indices breaking E[F] <= lambda1 <= lambda2 <= lambda."""
        lam, lam1, lam2 = self.lambdas.T
        bad = (lam1 > lam2 + tol) | (lam2 > lam + tol)
        if self.mean is not None:
            bad |= self.mean > lam1 + tol
        return [int(k) for k in np.flatnonzero(bad)]

    def monotonicity_violations(self, tol: float = CURVE_TOLERANCE) -> dict[str, list[int]]:
        """Per lambda column, row indices k where column[k] < column[k-1] - tol."""
        result = {}
        for name, column in zip(self.columns[1:4], self.lambdas.T):
            drops = np.flatnonzero(np.diff(column) < -tol) + 1
            if drops.size:
                result[name] = [int(k) for k in drops]
        return result

    def unimodality_violations(self, tol: float = CURVE_TOLERANCE) -> dict[str, int]:
        """Per bound column, sign changes of the discrete differences beyond the single allowed one."""
        result = {}
        for name, column in zip(self.columns[4:], self.bounds.T):
            extra = sign_changes(column, tol) - 1
            if extra > 0:
                result[name] = extra
        return result


def sign_changes(values: ArrayLike, tol: float = CURVE_TOLERANCE) -> int:
    """Number of sign changes in the differences of a sequence, ignoring steps within tol."""
    steps = np.diff(np.asarray(values, dtype=float))
    signs = np.sign(steps[np.abs(steps) > tol])
    return int(np.count_nonzero(signs[1:] != signs[:-1])) if signs.size else 0


def sweep(cfg: RiskConfig, B: float = 0.0, c_grid: ArrayLike | None = None) -> RiskCurve:
    """
    Evaluate lambda, lambda1 and lambda2 at every c of the grid.

    Ordering, monotonicity and unimodality are checked at grid resolution;
    violations are logged as warnings and the curve is returned unchanged.

    Args:
        cfg: Risk configuration
        B: Relative entropy budget for the bound columns
        c_grid: Overrides cfg.c_grid

    Returns:
        RiskCurve with one row per c
    """
    grid = cfg.c_grid if c_grid is None else np.asarray(c_grid, dtype=float)
    started = time.perf_counter()
    lambdas = np.array([(lambda_c(cfg, c), lambda1_c(cfg, c), lambda2_c(cfg, c)) for c in grid])
    curve = RiskCurve(grid, lambdas, B, cfg.mean())
    logger.debug(f"[Risk] Swept {grid.size} values of c in {time.perf_counter() - started:.3f}s")

    ordering = curve.ordering_violations()
    if ordering:
        logger.warning(f"[Risk] Ordering E[F] <= lambda1 <= lambda2 <= lambda broken at {len(ordering)} rows (first c={grid[ordering[0]]:g})")
    for name, rows in curve.monotonicity_violations().items():
        logger.warning(f"[Risk] {name} decreases at {len(rows)} grid steps (first c={grid[rows[0]]:g})")
    for name, extra in curve.unimodality_violations().items():
        logger.warning(f"[Risk] {name} has {extra} extra local extrema on the grid")
    return curve


def relative_errors(curve: RiskCurve, reference: RiskCurve) -> NDArray:
    """
    |lambda - lambda_ref| / |lambda_ref| per column.

    Returns:
        (rows, 4) array: c, err_lambda, err_lambda1, err_lambda2

    Raises:
        ConfigurationError: If the curves were computed on different c grids
    """
    if curve.c.shape != reference.c.shape or not np.allclose(curve.c, reference.c, rtol=1e-12, atol=0):
        raise ConfigurationError("Relative errors need both curves on the same c grid")
    scale = np.abs(reference.lambdas)
    diff = np.abs(curve.lambdas - reference.lambdas)
    errors = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), diff)
    return np.column_stack((curve.c, errors))
