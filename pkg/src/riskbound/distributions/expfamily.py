"""
Exponential-family representation p(x) = h(t) exp(eta . T(t) - A) / scale,
with t = (x - shift) / scale the standardized variable.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import betaln, gammaln

from riskbound.distributions.laws import Distribution, DistKind

STATISTICS = {
    'x': lambda t: t,
    'x^2': lambda t: t * t,
    'log(x)': lambda t: np.log(t),
    'log(1-x)': lambda t: np.log1p(-t),
}


@dataclass(frozen=True)
class ExponentialFamilyForm:
    natural_parameters: tuple[float, ...]
    statistics: tuple[str, ...]
    log_partition: float
    base_measure: str
    shift: float = 0.0
    scale: float = 1.0
    n: int = 0

    def standardize(self, x: ArrayLike) -> NDArray:
        return (np.asarray(x, dtype=float) - self.shift) / self.scale

    def sufficient_statistics(self, x: ArrayLike) -> NDArray:
        """T(t) stacked along the first axis."""
        t = self.standardize(x)
        return np.stack([STATISTICS[tag](t) for tag in self.statistics])

    def log_base_measure(self, x: ArrayLike) -> NDArray:
        t = self.standardize(x)
        if self.base_measure == '1/sqrt(2pi)':
            return np.full_like(t, -0.5 * np.log(2 * np.pi))
        if self.base_measure == '1/x!':
            return -gammaln(t + 1)
        if self.base_measure == 'binom(n,x)':
            return gammaln(self.n + 1) - gammaln(t + 1) - gammaln(self.n - t + 1)
        return np.zeros_like(t)

    def log_density(self, x: ArrayLike) -> NDArray:
        eta = np.asarray(self.natural_parameters)
        with np.errstate(divide='ignore', invalid='ignore'):
            exponent = np.tensordot(eta, self.sufficient_statistics(x), axes=1)
        return self.log_base_measure(x) + exponent - self.log_partition - np.log(self.scale)

    def density(self, x: ArrayLike) -> float | NDArray:
        values = np.exp(self.log_density(x))
        return float(values) if np.ndim(values) == 0 else values

    def same_family(self, other: 'ExponentialFamilyForm') -> bool:
        return (
            self.statistics == other.statistics
            and self.base_measure == other.base_measure
            and self.shift == other.shift
            and self.scale == other.scale
            and self.n == other.n
        )


def exponential_family_form(d: Distribution) -> ExponentialFamilyForm:
    """Natural parameters, statistics, log-partition and base measure of d."""
    if d.kind == DistKind.GAUSSIAN:
        var = d.sigma**2
        return ExponentialFamilyForm(
            natural_parameters=(d.mu / var, -0.5 / var),
            statistics=('x', 'x^2'),
            log_partition=d.mu**2 / (2 * var) + np.log(d.sigma),
            base_measure='1/sqrt(2pi)',
        )
    if d.kind in (DistKind.UNIFORM, DistKind.BETA):
        alpha, beta = (1.0, 1.0) if d.kind == DistKind.UNIFORM else (d.alpha, d.beta)
        return ExponentialFamilyForm(
            natural_parameters=(alpha - 1.0, beta - 1.0),
            statistics=('log(x)', 'log(1-x)'),
            log_partition=float(betaln(alpha, beta)),
            base_measure='1',
            shift=d.lo,
            scale=d.hi - d.lo,
        )
    if d.kind == DistKind.GAMMA:
        return ExponentialFamilyForm(
            natural_parameters=(-d.rate, d.shape - 1.0),
            statistics=('x', 'log(x)'),
            log_partition=float(gammaln(d.shape) - d.shape * np.log(d.rate)),
            base_measure='1',
        )
    if d.kind == DistKind.BINOMIAL:
        return ExponentialFamilyForm(
            natural_parameters=(float(np.log(d.p / (1 - d.p))),),
            statistics=('x',),
            log_partition=float(-d.n * np.log1p(-d.p)),
            base_measure='binom(n,x)',
            n=int(d.n),
        )
    return ExponentialFamilyForm(
        natural_parameters=(float(np.log(d.lam)),),
        statistics=('x',),
        log_partition=d.lam,
        base_measure='1/x!',
    )
