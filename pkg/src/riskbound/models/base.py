"""
Model contract: a pure, deterministic map (z1, z2) -> state u, composed with
an output functional h to give F(z1, z2) = h(u(z1, z2)).
"""

from dataclasses import dataclass, field, fields
from typing import Callable, ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.errors import ParameterDomainError
from riskbound.models.output import OutputFunctional, apply_output


@dataclass(frozen=True)
class AffineMap:
    """x -> scale * x + shift, used for k(z1), g(z2), gamma(z2), m(z2)."""
    scale: float = 1.0
    shift: float = 0.0

    def __call__(self, x: ArrayLike) -> NDArray:
        return self.scale * np.asarray(x, dtype=float) + self.shift

    @classmethod
    def from_value(cls, value) -> 'AffineMap':
        """Accept a number (pure scale) or {"scale", "shift"}."""
        if isinstance(value, AffineMap):
            return value
        if isinstance(value, (int, float)):
            return cls(float(value), 0.0)
        unknown = set(value) - {'scale', 'shift'}
        if unknown:
            raise ParameterDomainError(f"Unknown affine map fields: {sorted(unknown)}")
        return cls(float(value.get('scale', 1.0)), float(value.get('shift', 0.0)))


@dataclass(frozen=True)
class Model:
    """
    Base class for the example systems.

    Subclasses implement state(z1, z2) over broadcast arrays. Models with
    vectorized = False are solved node by node (and may be farmed out to a
    process pool by the surrogate layer).
    """
    kind: ClassVar[str] = 'model'
    vectorized: ClassVar[bool] = True

    output: OutputFunctional = field(default_factory=OutputFunctional, kw_only=True)

    def state(self, z1: ArrayLike, z2: ArrayLike) -> NDArray:
        raise NotImplementedError

    def __call__(self, z1: ArrayLike, z2: ArrayLike) -> float | NDArray:
        return apply_output(self.output, self.state(z1, z2))

    @classmethod
    def from_params(cls, params: dict, output: OutputFunctional) -> 'Model':
        """Build from the JSON "params" block; unknown keys are rejected."""
        names = {f.name for f in fields(cls)} - {'output'}
        unknown = set(params) - names
        if unknown:
            raise ParameterDomainError(f"Unknown {cls.kind} parameters: {sorted(unknown)}")
        return cls(**cls._coerce(params), output=output)

    @classmethod
    def _coerce(cls, params: dict) -> dict:
        return dict(params)

    def describe(self) -> str:
        values = ", ".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self) if f.name != 'output')
        return f"{self.kind}({values})"


@dataclass(frozen=True)
class ConstantModel(Model):
    """u(z1, z2) = value everywhere."""
    kind: ClassVar[str] = 'constant'

    value: float = 0.0

    def state(self, z1: ArrayLike, z2: ArrayLike) -> NDArray:
        shape = np.broadcast_shapes(np.shape(z1), np.shape(z2))
        return np.full(shape, float(self.value))


@dataclass(frozen=True)
class AnalyticModel(Model):
    """Wraps a closure u = function(z1, z2); picklable only if the function is."""
    kind: ClassVar[str] = 'analytic'

    function: Callable[[NDArray, NDArray], NDArray] = None

    def state(self, z1: ArrayLike, z2: ArrayLike) -> NDArray:
        z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float))
        return np.asarray(self.function(z1, z2), dtype=float)
