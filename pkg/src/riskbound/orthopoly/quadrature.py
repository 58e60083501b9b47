"""
Gauss quadrature rules (Golub-Welsch) and their 2-D tensor products.

Nodes are eigenvalues of the symmetric tridiagonal Jacobi matrix, weights are
the squared first components of its eigenvectors, or equivalently the
Christoffel numbers 1 / sum_j phi_j(z_k)^2. The latter keep full relative
accuracy at the extreme nodes of long unbounded rules and are used wherever
they are finite. Because every family's weight has unit mass, rule weights
sum to 1 and the rule computes expectations.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.linalg import LinAlgError
from numpy.typing import NDArray
from scipy.linalg import eigh_tridiagonal

from riskbound.config import logger
from riskbound.errors import NumericalError, ParameterDomainError
from riskbound.orthopoly.families import PolynomialFamily, basis_table, recurrence_coefficients


def _frozen(array: NDArray) -> NDArray:
    array = np.ascontiguousarray(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes (strictly increasing) and positive unit-sum weights of a Gauss rule."""
    nodes: NDArray
    weights: NDArray
    family: PolynomialFamily

    def __post_init__(self):
        object.__setattr__(self, 'nodes', _frozen(self.nodes))
        object.__setattr__(self, 'weights', _frozen(self.weights))

    @property
    def order(self) -> int:
        return int(self.nodes.size)

    def expectation(self, f: Callable[[NDArray], NDArray]) -> float:
        """Sum of w_k f(z_k), compensated."""
        return math.fsum(self.weights * np.asarray(f(self.nodes), dtype=float))


@dataclass(frozen=True, eq=False)
class TensorRule:
    """Full tensor product of two 1-D rules, r1-major (z1 varies slowest)."""
    first: QuadratureRule
    second: QuadratureRule
    nodes: NDArray = field(init=False)
    weights: NDArray = field(init=False)

    def __post_init__(self):
        n1, n2 = self.first.order, self.second.order
        nodes = np.column_stack((
            np.repeat(self.first.nodes, n2),
            np.tile(self.second.nodes, n1),
        ))
        object.__setattr__(self, 'nodes', _frozen(nodes))
        object.__setattr__(self, 'weights', _frozen(np.outer(self.first.weights, self.second.weights).ravel()))

    @property
    def orders(self) -> tuple[int, int]:
        return (self.first.order, self.second.order)

    @property
    def size(self) -> int:
        return self.first.order * self.second.order

    def expectation(self, f: Callable[[NDArray, NDArray], NDArray]) -> float:
        """Sum of w_k f(z1_k, z2_k) over the product grid; f must broadcast."""
        values = np.asarray(f(self.first.nodes[:, None], self.second.nodes[None, :]), dtype=float)
        values = np.broadcast_to(values, self.orders)
        return math.fsum((values * np.outer(self.first.weights, self.second.weights)).ravel())


def gauss_rule(family: PolynomialFamily, order: int) -> QuadratureRule:
    """
    Gauss rule with `order` nodes for the family's unit-mass weight.

    Exact for polynomials up to degree 2 * order - 1.

    Args:
        family: Polynomial family defining the weight
        order: Number of nodes (>= 1)

    Returns:
        QuadratureRule with ascending nodes and weights summing to 1

    Raises:
        ParameterDomainError: If order < 1
        NumericalError: If the tridiagonal eigen-solve fails
    """
    if order < 1:
        raise ParameterDomainError(f"Quadrature order must be positive, got {order}")

    a, b = recurrence_coefficients(family, order)
    if order == 1:
        return QuadratureRule(a[:1], np.ones(1), family)

    try:
        nodes, vectors = eigh_tridiagonal(a, np.sqrt(b[1:]))
    except (LinAlgError, ValueError) as e:
        raise NumericalError(f"Gauss rule eigen-solve failed for {family}, order {order}: {e}")

    with np.errstate(over='ignore', invalid='ignore'):
        christoffel = 1.0 / np.sum(basis_table(family, order - 1, nodes) ** 2, axis=0)
    usable = np.isfinite(christoffel) & (christoffel > 0)
    weights = np.where(usable, christoffel, vectors[0] ** 2)
    weights = weights / math.fsum(weights)

    if not (np.all(np.isfinite(nodes)) and np.all(weights > 0)):
        raise NumericalError(f"Gauss rule for {family}, order {order} has non-finite nodes or non-positive weights")

    logger.debug(f"[Quadrature] {family}: order {order}, nodes [{nodes[0]:.6g}, {nodes[-1]:.6g}]")
    return QuadratureRule(nodes, weights, family)


def tensor_rule(r1: QuadratureRule, r2: QuadratureRule) -> TensorRule:
    """Lexicographic product grid of two rules (r1-major)."""
    return TensorRule(r1, r2)
