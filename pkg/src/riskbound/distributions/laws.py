"""
Nominal and alternative probability laws.

A Distribution is an immutable value: kind plus the parameters that kind
uses. Densities and sampling go through the matching frozen scipy.stats law.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from riskbound.errors import ParameterDomainError, UnsupportedError
from riskbound.orthopoly import PolynomialFamily


class DistKind(str, Enum):
    GAUSSIAN = 'gaussian'
    UNIFORM = 'uniform'
    BETA = 'beta'
    GAMMA = 'gamma'
    BINOMIAL = 'binomial'
    POISSON = 'poisson'


# Parameters each kind reads (also the JSON field names)
PARAMETER_NAMES: dict[DistKind, tuple[str, ...]] = {
    DistKind.GAUSSIAN: ('mu', 'sigma'),
    DistKind.UNIFORM: ('lo', 'hi'),
    DistKind.BETA: ('alpha', 'beta', 'lo', 'hi'),
    DistKind.GAMMA: ('shape', 'rate'),
    DistKind.BINOMIAL: ('n', 'p'),
    DistKind.POISSON: ('lam',),
}

DISCRETE_KINDS = frozenset({DistKind.BINOMIAL, DistKind.POISSON})


@dataclass(frozen=True)
class Distribution:
    kind: DistKind
    mu: float = 0.0
    sigma: float = 1.0
    lo: float = 0.0
    hi: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    shape: float = 1.0
    rate: float = 1.0
    n: int = 1
    p: float = 0.5
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', DistKind(self.kind))
        checks = {
            DistKind.GAUSSIAN: self.sigma > 0 and np.isfinite(self.mu),
            DistKind.UNIFORM: self.hi > self.lo,
            DistKind.BETA: self.alpha > 0 and self.beta > 0 and self.hi > self.lo,
            DistKind.GAMMA: self.shape > 0 and self.rate > 0,
            DistKind.BINOMIAL: int(self.n) == self.n and self.n >= 1 and 0 < self.p < 1,
            DistKind.POISSON: self.lam > 0,
        }
        if not checks[self.kind]:
            raise ParameterDomainError(f"Invalid parameters for {self.kind.value}: {self.parameters()}")

    # Named constructors

    @classmethod
    def gaussian(cls, mu: float = 0.0, sigma: float = 1.0) -> 'Distribution':
        return cls(DistKind.GAUSSIAN, mu=mu, sigma=sigma)

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> 'Distribution':
        return cls(DistKind.UNIFORM, lo=lo, hi=hi)

    @classmethod
    def beta_law(cls, alpha: float, beta: float, lo: float = 0.0, hi: float = 1.0) -> 'Distribution':
        return cls(DistKind.BETA, alpha=alpha, beta=beta, lo=lo, hi=hi)

    @classmethod
    def gamma(cls, shape: float, rate: float = 1.0) -> 'Distribution':
        return cls(DistKind.GAMMA, shape=shape, rate=rate)

    @classmethod
    def binomial(cls, n: int, p: float) -> 'Distribution':
        return cls(DistKind.BINOMIAL, n=n, p=p)

    @classmethod
    def poisson(cls, lam: float) -> 'Distribution':
        return cls(DistKind.POISSON, lam=lam)

    @property
    def discrete(self) -> bool:
        return self.kind in DISCRETE_KINDS

    @property
    def support(self) -> tuple[float, float]:
        """Closed hull of the support."""
        if self.kind == DistKind.GAUSSIAN:
            return (-np.inf, np.inf)
        if self.kind in (DistKind.UNIFORM, DistKind.BETA):
            return (self.lo, self.hi)
        if self.kind == DistKind.BINOMIAL:
            return (0.0, float(self.n))
        return (0.0, np.inf)

    def parameters(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAMETER_NAMES[self.kind]}

    def frozen(self):
        """Matching frozen scipy.stats law."""
        if self.kind == DistKind.GAUSSIAN:
            return stats.norm(loc=self.mu, scale=self.sigma)
        if self.kind == DistKind.UNIFORM:
            return stats.uniform(loc=self.lo, scale=self.hi - self.lo)
        if self.kind == DistKind.BETA:
            return stats.beta(self.alpha, self.beta, loc=self.lo, scale=self.hi - self.lo)
        if self.kind == DistKind.GAMMA:
            return stats.gamma(self.shape, scale=1.0 / self.rate)
        if self.kind == DistKind.BINOMIAL:
            return stats.binom(int(self.n), self.p)
        return stats.poisson(self.lam)

    def to_dict(self) -> dict:
        return {'kind': self.kind.value, **self.parameters()}

    @classmethod
    def from_dict(cls, data: dict) -> 'Distribution':
        """Build from {"kind": ..., parameters...}; unknown keys are rejected."""
        data = dict(data)
        try:
            kind = DistKind(data.pop('kind'))
        except (KeyError, ValueError):
            raise ParameterDomainError(f"Unknown distribution kind in {data}")
        allowed = set(PARAMETER_NAMES[kind])
        unknown = set(data) - allowed
        if unknown:
            raise ParameterDomainError(f"Unknown fields for {kind.value}: {sorted(unknown)}")
        if kind == DistKind.BINOMIAL and 'n' in data:
            data['n'] = int(data['n'])
        return cls(kind, **{k: v for k, v in data.items()})

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v:g}" for k, v in self.parameters().items())
        return f"{self.kind.value}({params})"


def pdf(d: Distribution, x: ArrayLike) -> float | NDArray:
    """Density (pmf for discrete kinds) at x; zero outside the support."""
    law = d.frozen()
    values = law.pmf(x) if d.discrete else law.pdf(x)
    return float(values) if np.ndim(values) == 0 else values


def logpdf(d: Distribution, x: ArrayLike) -> NDArray:
    law = d.frozen()
    return law.logpmf(x) if d.discrete else law.logpdf(x)


def basis_for(d: Distribution) -> PolynomialFamily:
    """
    gPC basis of a continuous law.

    Gaussian -> Hermite, Uniform -> Legendre, Beta(a, b) -> Jacobi(b - 1, a - 1)
    on [lo, hi], Gamma(shape) -> Laguerre(shape - 1).

    Raises:
        UnsupportedError: For discrete kinds
    """
    if d.kind == DistKind.GAUSSIAN:
        return PolynomialFamily.hermite(d.mu, d.sigma)
    if d.kind == DistKind.UNIFORM:
        return PolynomialFamily.legendre(d.lo, d.hi)
    if d.kind == DistKind.BETA:
        return PolynomialFamily.jacobi(d.beta - 1.0, d.alpha - 1.0, d.lo, d.hi)
    if d.kind == DistKind.GAMMA:
        return PolynomialFamily.laguerre(d.shape - 1.0, d.rate)
    raise UnsupportedError(f"No continuous gPC basis for {d.kind.value}; only its relative entropy is available")


def affine_image(d: Distribution, scale: float, shift: float) -> Distribution:
    """
    Law of scale * X + shift.

    Raises:
        ParameterDomainError: If scale == 0
        UnsupportedError: If the kind is not closed under this map
    """
    if scale == 0 or not np.isfinite(scale):
        raise ParameterDomainError(f"Affine scale must be non-zero and finite, got {scale}")

    if d.kind == DistKind.GAUSSIAN:
        return Distribution.gaussian(shift + scale * d.mu, abs(scale) * d.sigma)
    if d.kind in (DistKind.UNIFORM, DistKind.BETA):
        ends = sorted((shift + scale * d.lo, shift + scale * d.hi))
        if d.kind == DistKind.UNIFORM:
            return Distribution.uniform(*ends)
        alpha, beta = (d.alpha, d.beta) if scale > 0 else (d.beta, d.alpha)
        return Distribution.beta_law(alpha, beta, *ends)
    if scale == 1 and shift == 0:
        return d
    if d.kind == DistKind.GAMMA and shift == 0 and scale > 0:
        return Distribution.gamma(d.shape, d.rate / scale)
    raise UnsupportedError(f"{d.kind.value} is not closed under x -> {scale:g} * x + {shift:g}")


def sample(d: Distribution, size: int | tuple[int, ...], rng: np.random.Generator) -> NDArray:
    """Draw from d with the given numpy Generator."""
    return np.asarray(d.frozen().rvs(size=size, random_state=rng), dtype=float)
