"""
Damped driven oscillator u'' + gamma(z2) u' + k(z1) u = f(t),
f(t) = amplitude * cos(frequency * t) + offset, integrated by fixed-step RK4.

The integrator advances every (z1, z2) pair of a broadcast grid at once.
"""

import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.config import OSCILLATOR_STEP
from riskbound.errors import ParameterDomainError, SolverError
from riskbound.models.base import AffineMap, Model

# Steps between finiteness checks
_CHECK_EVERY = 100


@dataclass(frozen=True)
class OscillatorModel(Model):
    kind: ClassVar[str] = 'oscillator'

    t_critical: float = 4.0
    k: AffineMap = field(default_factory=lambda: AffineMap(4.0, 0.0))
    gamma: AffineMap = field(default_factory=lambda: AffineMap(0.2, 0.0))
    amplitude: float = 10.0
    frequency: float = 10.0
    offset: float = 3.0
    u0: float = 0.0
    v0: float = 0.0
    step: float = OSCILLATOR_STEP

    def __post_init__(self):
        if self.t_critical < 0:
            raise ParameterDomainError(f"t_critical must be non-negative, got {self.t_critical}")
        if not self.step > 0:
            raise ParameterDomainError(f"Integrator step must be positive, got {self.step}")

    @classmethod
    def _coerce(cls, params: dict) -> dict:
        params = dict(params)
        for name in ('k', 'gamma'):
            if name in params:
                params[name] = AffineMap.from_value(params[name])
        return params

    def forcing(self, t: float) -> float:
        return self.amplitude * math.cos(self.frequency * t) + self.offset

    def state(self, z1: ArrayLike, z2: ArrayLike) -> NDArray:
        return integrate_oscillator(self, z1, z2, self.t_critical)


def integrate_oscillator(model: OscillatorModel, z1: ArrayLike, z2: ArrayLike, t_end: float) -> NDArray:
    """
    Position u(t_end) for every broadcast (z1, z2) pair.

    The step is shrunk to t_end / ceil(t_end / step) so the last step lands on t_end.

    Raises:
        ParameterDomainError: If gamma(z2) < 0 anywhere
        SolverError: If the state becomes non-finite
    """
    z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float))
    k = model.k(z1)
    damping = model.gamma(z2)
    if np.any(damping < 0):
        raise ParameterDomainError(f"Damping gamma(z2) must be non-negative, min {damping.min():.6g}")

    u = np.full(z1.shape, float(model.u0))
    v = np.full(z1.shape, float(model.v0))
    if t_end == 0:
        return u

    n_steps = math.ceil(t_end / model.step - 1e-9)
    h = t_end / n_steps

    def rhs(t, u, v):
        return v, model.forcing(t) - damping * v - k * u

    t = 0.0
    for n in range(n_steps):
        k1u, k1v = rhs(t, u, v)
        k2u, k2v = rhs(t + h / 2, u + h / 2 * k1u, v + h / 2 * k1v)
        k3u, k3v = rhs(t + h / 2, u + h / 2 * k2u, v + h / 2 * k2v)
        k4u, k4v = rhs(t + h, u + h * k3u, v + h * k3v)
        u = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = (n + 1) * h
        if (n + 1) % _CHECK_EVERY == 0 or n + 1 == n_steps:
            bad = ~(np.isfinite(u) & np.isfinite(v))
            if np.any(bad):
                i = int(np.flatnonzero(bad.ravel())[0])
                raise SolverError("Oscillator state became non-finite", float(z1.ravel()[i]), float(z2.ravel()[i]), t)
    return u


def oscillator_solution(z1: float, z2: float, t_critical: float, params: OscillatorModel) -> float:
    """Position u(t_critical; z1, z2) before the output functional."""
    return float(integrate_oscillator(params, z1, z2, t_critical))
