"""
gPC surrogate in the full tensor space of orthonormal polynomials.

Coefficients come from the discrete projection
    v_j = sum_k v(z_k) Phi_j(z_k) w_k
over the collocation grid; no Vandermonde system is solved. The flat
coefficient index is j = j2 * (P1 + 1) + j1 (j1 fastest).
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.config import logger
from riskbound.errors import ConfigurationError
from riskbound.models import OutputFunctional, apply_output
from riskbound.orthopoly import PolynomialFamily, basis_table
from riskbound.surrogate.collocation import CollocationGrid


@dataclass(frozen=True, eq=False)
class Surrogate:
    coefficients: NDArray
    families: tuple[PolynomialFamily, PolynomialFamily]
    degrees: tuple[int, int]
    orders: tuple[int, int]
    mode: str = 'output'
    output: OutputFunctional | None = None

    def __post_init__(self):
        coefficients = np.ascontiguousarray(self.coefficients, dtype=float).ravel()
        expected = (self.degrees[0] + 1) * (self.degrees[1] + 1)
        if coefficients.size != expected:
            raise ConfigurationError(f"Degrees {self.degrees} need {expected} coefficients, got {coefficients.size}")
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)
        object.__setattr__(self, 'degrees', tuple(int(p) for p in self.degrees))
        object.__setattr__(self, 'orders', tuple(int(n) for n in self.orders))

    @property
    def matrix(self) -> NDArray:
        """Coefficients as a (P2 + 1, P1 + 1) array indexed [j2, j1]."""
        return self.coefficients.reshape(self.degrees[1] + 1, self.degrees[0] + 1)

    def coefficient(self, j1: int, j2: int) -> float:
        return float(self.coefficients[j2 * (self.degrees[0] + 1) + j1])

    def __call__(self, z1: ArrayLike, z2: ArrayLike) -> float | NDArray:
        return evaluate(self, z1, z2)

    def to_dict(self) -> dict:
        return {
            'families': [family.to_dict() for family in self.families],
            'degrees': list(self.degrees),
            'orders': list(self.orders),
            'mode': self.mode,
            'output': None if self.output is None else self.output.to_dict(),
            'coefficients': [repr(float(c)) for c in self.coefficients],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Surrogate':
        output = data.get('output')
        return cls(
            coefficients=np.array([float(c) for c in data['coefficients']]),
            families=tuple(PolynomialFamily.from_dict(f) for f in data['families']),
            degrees=tuple(data['degrees']),
            orders=tuple(data['orders']),
            mode=data.get('mode', 'output'),
            output=None if output is None else OutputFunctional.from_dict(output),
        )


def compute_coefficients(grid: CollocationGrid, degrees: tuple[int, int] | None = None) -> Surrogate:
    """
    Project grid values onto the orthonormal tensor basis.

    Args:
        grid: Collocation grid (Gauss nodes and model values)
        degrees: Per-dimension degrees (P1, P2); defaults to order - 1

    Returns:
        Surrogate with (P1 + 1) * (P2 + 1) coefficients

    Raises:
        ConfigurationError: If an order is below degree + 1
    """
    n1, n2 = grid.orders
    p1, p2 = (n1 - 1, n2 - 1) if degrees is None else degrees
    if p1 < 0 or p2 < 0:
        raise ConfigurationError(f"Degrees must be non-negative, got ({p1}, {p2})")
    if n1 < p1 + 1 or n2 < p2 + 1:
        raise ConfigurationError(
            f"Collocation orders ({n1}, {n2}) cannot resolve degrees ({p1}, {p2}); "
            f"need orders >= ({p1 + 1}, {p2 + 1})"
        )

    first, second = grid.rule.first, grid.rule.second
    phi1 = basis_table(first.family, p1, first.nodes)
    phi2 = basis_table(second.family, p2, second.nodes)
    weighted = grid.as_matrix() * np.outer(first.weights, second.weights)
    coefficients = phi1 @ weighted @ phi2.T

    logger.debug(f"[Surrogate] Degrees ({p1}, {p2}) from orders ({n1}, {n2}), mean {coefficients[0, 0]:.12g}")
    return Surrogate(
        coefficients=coefficients.T.ravel(),
        families=(first.family, second.family),
        degrees=(p1, p2),
        orders=(n1, n2),
        mode=grid.mode,
        output=grid.output,
    )


def evaluate(s: Surrogate, z1: ArrayLike, z2: ArrayLike) -> float | NDArray:
    """
    Expansion value at (z1, z2) over broadcast arrays.

    Outside the bases' supports the value is an extrapolation and not trusted.
    """
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    ndim = max(z1.ndim, z2.ndim)
    z1 = z1.reshape((1,) * (ndim - z1.ndim) + z1.shape)
    z2 = z2.reshape((1,) * (ndim - z2.ndim) + z2.shape)

    phi1 = basis_table(s.families[0], s.degrees[0], z1)
    phi2 = basis_table(s.families[1], s.degrees[1], z2)
    # sum_j2 c[j2, j1] phi2_j2, then contract j1 against phi1 (outer grids stay factored)
    partial = np.tensordot(s.matrix, phi2, axes=(0, 0))
    values = np.sum(phi1 * partial, axis=0)
    return float(values) if np.ndim(values) == 0 else values


def mean(s: Surrogate) -> float:
    return float(s.coefficients[0])


def second_moment(s: Surrogate) -> float:
    """Sum of squared coefficients (orthonormality)."""
    return math.fsum(s.coefficients**2)


def variance(s: Surrogate) -> float:
    return second_moment(s) - mean(s) ** 2


def surrogate_evaluator(s: Surrogate, output: OutputFunctional | None = None) -> Callable[[NDArray, NDArray], NDArray]:
    """
    Vectorized F(z1, z2) for risk integration.

    A state-mode surrogate approximates u, so h is applied after evaluation
    (output overrides the functional stored with the surrogate).
    """
    h = output if output is not None else s.output
    if s.mode != 'state' or h is None:
        return lambda z1, z2: evaluate(s, z1, z2)
    return lambda z1, z2: apply_output(h, evaluate(s, z1, z2))
