"""
Orthonormal polynomial families for the continuous gPC weights.

Each family is a standard weight (Hermite: N(0,1), Legendre: U[-1,1],
Jacobi: (1-t)^alpha (1+t)^beta on [-1,1], Laguerre: t^alpha e^-t on [0,inf))
pushed through the affine map x = shift + scale * t. Weights are always
normalized to unit mass, so phi_0 = 1 and quadrature approximates expectations.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from riskbound.errors import ParameterDomainError


class FamilyKind(str, Enum):
    HERMITE = 'hermite'
    LEGENDRE = 'legendre'
    JACOBI = 'jacobi'
    LAGUERRE = 'laguerre'


@dataclass(frozen=True)
class PolynomialFamily:
    """
    Orthonormal polynomial family attached to a unit-mass weight.

    Use the named constructors (hermite, legendre, jacobi, laguerre) rather
    than building shift/scale by hand.
    """
    kind: FamilyKind
    alpha: float = 0.0
    beta: float = 0.0
    shift: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.scale) or self.scale <= 0:
            raise ParameterDomainError(f"Family scale must be positive and finite, got {self.scale}")
        if not np.isfinite(self.shift):
            raise ParameterDomainError(f"Family shift must be finite, got {self.shift}")
        if self.kind == FamilyKind.JACOBI and (self.alpha <= -1 or self.beta <= -1):
            raise ParameterDomainError(
                f"Jacobi parameters must exceed -1, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.kind == FamilyKind.LAGUERRE and self.alpha <= -1:
            raise ParameterDomainError(f"Laguerre alpha must exceed -1, got {self.alpha}")

    @classmethod
    def hermite(cls, mu: float = 0.0, sigma: float = 1.0) -> 'PolynomialFamily':
        return cls(FamilyKind.HERMITE, shift=mu, scale=sigma)

    @classmethod
    def legendre(cls, lo: float = -1.0, hi: float = 1.0) -> 'PolynomialFamily':
        return cls(FamilyKind.LEGENDRE, shift=0.5 * (lo + hi), scale=0.5 * (hi - lo))

    @classmethod
    def jacobi(cls, alpha: float, beta: float, lo: float = -1.0, hi: float = 1.0) -> 'PolynomialFamily':
        return cls(FamilyKind.JACOBI, alpha=alpha, beta=beta, shift=0.5 * (lo + hi), scale=0.5 * (hi - lo))

    @classmethod
    def laguerre(cls, alpha: float = 0.0, rate: float = 1.0) -> 'PolynomialFamily':
        if rate <= 0:
            raise ParameterDomainError(f"Laguerre rate must be positive, got {rate}")
        return cls(FamilyKind.LAGUERRE, alpha=alpha, scale=1.0 / rate)

    @property
    def support(self) -> tuple[float, float]:
        """Support interval of the weight (possibly unbounded)."""
        if self.kind == FamilyKind.HERMITE:
            return (-np.inf, np.inf)
        if self.kind == FamilyKind.LAGUERRE:
            return (self.shift, np.inf)
        return (self.shift - self.scale, self.shift + self.scale)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'alpha': self.alpha,
            'beta': self.beta,
            'shift': self.shift,
            'scale': self.scale,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'PolynomialFamily':
        return cls(
            FamilyKind(data['kind']),
            alpha=float(data.get('alpha', 0.0)),
            beta=float(data.get('beta', 0.0)),
            shift=float(data.get('shift', 0.0)),
            scale=float(data.get('scale', 1.0)),
        )

    def __str__(self) -> str:
        lo, hi = self.support
        if self.kind in (FamilyKind.JACOBI, FamilyKind.LAGUERRE):
            return f"{self.kind.value}(alpha={self.alpha:g}, beta={self.beta:g}) on [{lo:g}, {hi:g}]"
        return f"{self.kind.value} on [{lo:g}, {hi:g}]"


def _standard_jacobi(alpha: float, beta: float, n: int) -> tuple[NDArray, NDArray]:
    """Monic recurrence of the unit-mass Jacobi weight on [-1, 1] (closed form)."""
    a = np.empty(n)
    b = np.empty(n)
    ab = alpha + beta
    a[0] = (beta - alpha) / (ab + 2.0)
    b[0] = 1.0
    if n > 1:
        k = np.arange(1, n, dtype=float)
        a[1:] = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2))
        b[1] = 4.0 * (alpha + 1) * (beta + 1) / ((ab + 2) ** 2 * (ab + 3))
    if n > 2:
        k = np.arange(2, n, dtype=float)
        b[2:] = (
            4.0 * k * (k + alpha) * (k + beta) * (k + ab)
            / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1))
        )
    return a, b


def recurrence_coefficients(family: PolynomialFamily, n: int) -> tuple[NDArray, NDArray]:
    """
    Three-term recurrence coefficients of the family's monic orthogonal polynomials.

    p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x), with b_0 = 1 the mass of
    the weight. The orthonormal polynomials use sqrt(b_k) as normalizers and
    the Jacobi matrix has diagonal a and off-diagonal sqrt(b[1:]).

    Args:
        family: Polynomial family (includes its affine placement)
        n: Number of coefficients (n >= 1)

    Returns:
        Tuple (a, b) of arrays of length n

    Raises:
        ParameterDomainError: If n < 1
    """
    if n < 1:
        raise ParameterDomainError(f"Need at least one recurrence coefficient, got n={n}")

    k = np.arange(n, dtype=float)
    if family.kind == FamilyKind.HERMITE:
        a, b = np.zeros(n), k.copy()
    elif family.kind == FamilyKind.LEGENDRE:
        a, b = _standard_jacobi(0.0, 0.0, n)
    elif family.kind == FamilyKind.JACOBI:
        a, b = _standard_jacobi(family.alpha, family.beta, n)
    else:
        a, b = 2 * k + family.alpha + 1, k * (k + family.alpha)
    b[0] = 1.0

    return family.shift + family.scale * a, np.concatenate(([1.0], family.scale**2 * b[1:]))


def basis_table(family: PolynomialFamily, max_degree: int, z: ArrayLike) -> NDArray:
    """
    Evaluate orthonormal phi_0..phi_max_degree at z by forward recurrence.

    Returns:
        Array of shape (max_degree + 1,) + shape(z)
    """
    if max_degree < 0:
        raise ParameterDomainError(f"Degree must be non-negative, got {max_degree}")

    z = np.asarray(z, dtype=float)
    a, b = recurrence_coefficients(family, max_degree + 1)
    root_b = np.sqrt(b)

    table = np.empty((max_degree + 1,) + z.shape)
    table[0] = 1.0
    if max_degree >= 1:
        table[1] = (z - a[0]) / root_b[1]
    for k in range(1, max_degree):
        table[k + 1] = ((z - a[k]) * table[k] - root_b[k] * table[k - 1]) / root_b[k + 1]
    return table


def evaluate_basis(family: PolynomialFamily, degree: int, z: ArrayLike) -> float | NDArray:
    """Value of the degree-m orthonormal polynomial phi_m at z (phi_0 = 1)."""
    values = basis_table(family, degree, z)[degree]
    return float(values) if values.ndim == 0 else values
