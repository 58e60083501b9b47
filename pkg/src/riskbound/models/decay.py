"""
Linear decay du/dt = -k(z1) u, u(0) = g(z2), solved exactly.
"""

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.errors import ParameterDomainError
from riskbound.models.base import AffineMap, Model


def decay_solution(z1: ArrayLike, z2: ArrayLike, t: float, k_map=None, g_map=None) -> float | NDArray:
    """
    u(t) = g(z2) * exp(-k(z1) * t).

    Args:
        z1: Decay-rate variable
        z2: Initial-value variable
        t: Time (>= 0)
        k_map: Callable k(z1), identity when None
        g_map: Callable g(z2), identity when None
    """
    if t < 0:
        raise ParameterDomainError(f"Decay time must be non-negative, got {t}")
    k = np.asarray(z1, dtype=float) if k_map is None else k_map(z1)
    g = np.asarray(z2, dtype=float) if g_map is None else g_map(z2)
    values = g * np.exp(-k * t)
    return float(values) if np.ndim(values) == 0 else values


@dataclass(frozen=True)
class DecayModel(Model):
    kind: ClassVar[str] = 'decay'

    t: float = 1.0
    k: AffineMap = field(default_factory=AffineMap)
    g: AffineMap = field(default_factory=AffineMap)

    def __post_init__(self):
        if self.t < 0:
            raise ParameterDomainError(f"Decay time must be non-negative, got {self.t}")

    @classmethod
    def _coerce(cls, params: dict) -> dict:
        params = dict(params)
        for name in ('k', 'g'):
            if name in params:
                params[name] = AffineMap.from_value(params[name])
        return params

    def state(self, z1: ArrayLike, z2: ArrayLike) -> NDArray:
        return np.asarray(decay_solution(z1, z2, self.t, self.k, self.g))
