"""
Output functionals h applied to a model state u: identity, square, indicator.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.errors import ParameterDomainError


class OutputKind(str, Enum):
    IDENTITY = 'identity'
    SQUARE = 'square'
    INDICATOR = 'indicator'


@dataclass(frozen=True)
class OutputFunctional:
    """h(u); the indicator is 1 on the closed interval [lower, upper]."""
    kind: OutputKind = OutputKind.IDENTITY
    lower: float = -np.inf
    upper: float = np.inf

    def __post_init__(self):
        object.__setattr__(self, 'kind', OutputKind(self.kind))
        object.__setattr__(self, 'lower', -np.inf if self.lower is None else float(self.lower))
        object.__setattr__(self, 'upper', np.inf if self.upper is None else float(self.upper))
        if self.lower > self.upper:
            raise ParameterDomainError(f"Indicator bounds need lower <= upper, got [{self.lower}, {self.upper}]")

    @classmethod
    def indicator(cls, lower: float | None = None, upper: float | None = None) -> 'OutputFunctional':
        return cls(OutputKind.INDICATOR, lower, upper)

    @property
    def smooth(self) -> bool:
        return self.kind != OutputKind.INDICATOR

    def __call__(self, u: ArrayLike) -> float | NDArray:
        return apply_output(self, u)

    def to_dict(self) -> dict:
        data = {'kind': self.kind.value}
        if self.kind == OutputKind.INDICATOR:
            data['lower'] = None if np.isneginf(self.lower) else self.lower
            data['upper'] = None if np.isposinf(self.upper) else self.upper
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'OutputFunctional':
        unknown = set(data) - {'kind', 'lower', 'upper'}
        if unknown:
            raise ParameterDomainError(f"Unknown output fields: {sorted(unknown)}")
        try:
            kind = OutputKind(data.get('kind', 'identity'))
        except ValueError:
            raise ParameterDomainError(f"Unknown output kind {data.get('kind')!r}")
        return cls(kind, data.get('lower'), data.get('upper'))


def apply_output(h: OutputFunctional, u: ArrayLike) -> float | NDArray:
    """h(u) elementwise; the indicator returns exactly 0.0 or 1.0."""
    u = np.asarray(u, dtype=float)
    if h.kind == OutputKind.IDENTITY:
        values = u
    elif h.kind == OutputKind.SQUARE:
        values = u * u
    else:
        values = ((u >= h.lower) & (u <= h.upper)).astype(float)
    return float(values) if values.ndim == 0 else values
