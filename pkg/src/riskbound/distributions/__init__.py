"""
Probability laws, their gPC bases and relative entropy.
"""

from riskbound.distributions.entropy import (
    compare_with_oracle,
    differential_entropy,
    printed_closed_form,
    register_closed_form,
    relative_entropy_closed,
    relative_entropy_expfam,
    relative_entropy_numeric,
)
from riskbound.distributions.expfamily import ExponentialFamilyForm, exponential_family_form
from riskbound.distributions.laws import (
    DistKind,
    Distribution,
    affine_image,
    basis_for,
    logpdf,
    pdf,
    sample,
)

__all__ = [
    'DistKind',
    'Distribution',
    'ExponentialFamilyForm',
    'affine_image',
    'basis_for',
    'compare_with_oracle',
    'differential_entropy',
    'exponential_family_form',
    'logpdf',
    'pdf',
    'printed_closed_form',
    'register_closed_form',
    'relative_entropy_closed',
    'relative_entropy_expfam',
    'relative_entropy_numeric',
    'sample',
]
