"""
Relative entropy R(P || Q) = E_P[log(dP/dQ)].

P is the alternative law, Q the nominal. Closed forms dispatch through a
(kind, kind) registry; relative_entropy_numeric is the quadrature / series
oracle every closed form is checked against.
"""

import math
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import betaln, digamma, gammaln, xlogy

from riskbound.config import RE_RESOLUTION, RE_TAIL_MASS, logger
from riskbound.distributions.expfamily import STATISTICS, exponential_family_form
from riskbound.distributions.laws import Distribution, DistKind, logpdf
from riskbound.errors import IncompatiblePairError, UnsupportedError

_CLOSED_FORMS: dict[tuple[DistKind, DistKind], Callable[[Distribution, Distribution], float]] = {}

# Relative slack when comparing interval endpoints
_SUPPORT_SLACK = 1e-12


def register_closed_form(kind_p: DistKind, kind_q: DistKind):
    """
    Decorator registering a closed form for R(P || Q) with P of kind_p, Q of kind_q.

        @register_closed_form(DistKind.GAUSSIAN, DistKind.GAUSSIAN)
        def _re_gaussian_gaussian(p, q): ...
    """
    def decorator(fun):
        _CLOSED_FORMS[kind_p, kind_q] = fun
        return fun
    return decorator


def _support_inside(p: Distribution, q: Distribution) -> bool:
    p_lo, p_hi = p.support
    q_lo, q_hi = q.support
    slack = _SUPPORT_SLACK * max(1.0, abs(q_lo) if np.isfinite(q_lo) else 1.0, abs(q_hi) if np.isfinite(q_hi) else 1.0)
    return p_lo >= q_lo - slack and p_hi <= q_hi + slack


def _same_interval(p: Distribution, q: Distribution) -> bool:
    scale = max(1.0, abs(q.lo), abs(q.hi))
    return abs(p.lo - q.lo) <= _SUPPORT_SLACK * scale and abs(p.hi - q.hi) <= _SUPPORT_SLACK * scale


def _beta_beta(a2: float, b2: float, a1: float, b1: float) -> float:
    """R(Beta(a2, b2) || Beta(a1, b1)) on a common interval."""
    total = digamma(a2 + b2)
    return float(
        (a2 - a1) * (digamma(a2) - total)
        + (b2 - b1) * (digamma(b2) - total)
        + betaln(a1, b1) - betaln(a2, b2)
    )


def _mean_log_uniform(s0: float, s1: float) -> float:
    """Mean of log(s) for s ~ U[s0, s1], 0 <= s0 < s1."""
    return float((xlogy(s1, s1) - s1 - xlogy(s0, s0) + s0) / (s1 - s0))


@register_closed_form(DistKind.GAUSSIAN, DistKind.GAUSSIAN)
def _re_gaussian_gaussian(p: Distribution, q: Distribution) -> float:
    ratio = (p.sigma / q.sigma) ** 2
    return 0.5 * (ratio + ((p.mu - q.mu) / q.sigma) ** 2 - 1.0 - math.log(ratio))


@register_closed_form(DistKind.UNIFORM, DistKind.UNIFORM)
def _re_uniform_uniform(p: Distribution, q: Distribution) -> float:
    if not _support_inside(p, q):
        return math.inf
    return math.log((q.hi - q.lo) / (p.hi - p.lo))


@register_closed_form(DistKind.BETA, DistKind.BETA)
def _re_beta_beta(p: Distribution, q: Distribution) -> float:
    if not _support_inside(p, q):
        return math.inf
    if not _same_interval(p, q):
        raise IncompatiblePairError(f"Beta laws on different intervals have no common standardization: {p} vs {q}")
    return _beta_beta(p.alpha, p.beta, q.alpha, q.beta)


@register_closed_form(DistKind.BETA, DistKind.UNIFORM)
def _re_beta_uniform(p: Distribution, q: Distribution) -> float:
    if not _support_inside(p, q):
        return math.inf
    return math.log(q.hi - q.lo) - differential_entropy(p)


@register_closed_form(DistKind.UNIFORM, DistKind.BETA)
def _re_uniform_beta(p: Distribution, q: Distribution) -> float:
    if not _support_inside(p, q):
        return math.inf
    if _same_interval(p, q):
        return _beta_beta(1.0, 1.0, q.alpha, q.beta)
    width = q.hi - q.lo
    s0, s1 = (p.lo - q.lo) / width, (p.hi - q.lo) / width
    mean_log_q = (
        (q.alpha - 1.0) * _mean_log_uniform(s0, s1)
        + (q.beta - 1.0) * _mean_log_uniform(1.0 - s1, 1.0 - s0)
        - betaln(q.alpha, q.beta) - math.log(width)
    )
    return float(-math.log(p.hi - p.lo) - mean_log_q)


@register_closed_form(DistKind.GAMMA, DistKind.GAMMA)
def _re_gamma_gamma(p: Distribution, q: Distribution) -> float:
    return float(
        q.shape * math.log(p.rate / q.rate)
        + gammaln(q.shape) - gammaln(p.shape)
        + (p.shape - q.shape) * digamma(p.shape)
        + (q.rate - p.rate) * p.shape / p.rate
    )


@register_closed_form(DistKind.BINOMIAL, DistKind.BINOMIAL)
def _re_binomial_binomial(p: Distribution, q: Distribution) -> float:
    if p.n > q.n:
        return math.inf
    if p.n < q.n:
        raise IncompatiblePairError(f"Binomial closed form needs equal n (got {p.n} and {q.n}); use the numerical oracle")
    return float(p.n * (xlogy(p.p, p.p / q.p) + xlogy(1 - p.p, (1 - p.p) / (1 - q.p))))


@register_closed_form(DistKind.POISSON, DistKind.POISSON)
def _re_poisson_poisson(p: Distribution, q: Distribution) -> float:
    return float(q.lam - p.lam + xlogy(p.lam, p.lam / q.lam))


def relative_entropy_closed(p: Distribution, q: Distribution) -> float:
    """
    Closed-form relative entropy R(P || Q).

    Args:
        p: Alternative law P
        q: Nominal law Q

    Returns:
        Non-negative value, or inf when P is not absolutely continuous w.r.t. Q

    Raises:
        IncompatiblePairError: If no closed form exists for the pair
    """
    if p.discrete != q.discrete or not _support_inside(p, q):
        return math.inf
    fun = _CLOSED_FORMS.get((p.kind, q.kind))
    if fun is None:
        raise IncompatiblePairError(f"No closed-form relative entropy for {p.kind.value} vs {q.kind.value}")
    value = fun(p, q)
    return value if math.isinf(value) else max(value, 0.0)


def _discrete_oracle(p: Distribution, q: Distribution, resolution: int) -> float:
    law = p.frozen()
    if p.kind == DistKind.BINOMIAL:
        k = np.arange(0, int(p.n) + 1)
    else:
        last = max(int(resolution), int(law.isf(RE_TAIL_MASS)) + 1)
        k = np.arange(0, last + 1)
    log_p = law.logpmf(k)
    log_q = logpdf(q, k)
    mass = np.exp(log_p)
    if np.any((mass > 0) & np.isneginf(log_q)):
        return math.inf
    terms = np.where(mass > 0, mass * (log_p - np.where(np.isfinite(log_q), log_q, 0.0)), 0.0)
    return math.fsum(terms)


def _integration_bounds(p: Distribution) -> tuple[float, float]:
    law = p.frozen()
    lo, hi = p.support
    if not np.isfinite(lo):
        lo = float(law.ppf(RE_TAIL_MASS))
    if not np.isfinite(hi):
        hi = float(law.isf(RE_TAIL_MASS))
    return lo, hi


def _expectation(p: Distribution, g: Callable[[float], float], resolution: int) -> float:
    """E_P[g] by adaptive quadrature over P's support (tails beyond RE_TAIL_MASS dropped)."""
    lo, hi = _integration_bounds(p)
    law = p.frozen()
    median = float(law.median())
    value, _ = quad(
        lambda x: law.pdf(x) * g(x),
        lo, hi,
        points=[median] if lo < median < hi else None,
        limit=resolution,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    return value


def relative_entropy_numeric(p: Distribution, q: Distribution, resolution: int = RE_RESOLUTION) -> float:
    """
    Oracle for R(P || Q): adaptive quadrature (continuous) or tail-truncated series (discrete).

    Returns inf when P's support is not contained in Q's.
    """
    if p.discrete != q.discrete or not _support_inside(p, q):
        return math.inf
    if p.discrete:
        return _discrete_oracle(p, q, resolution)

    log_p_law, log_q_law = p.frozen(), q.frozen()
    value = _expectation(p, lambda x: log_p_law.logpdf(x) - log_q_law.logpdf(x), resolution)
    return value


def relative_entropy_expfam(p: Distribution, q: Distribution, resolution: int = RE_RESOLUTION) -> float:
    """
    sum_i (eta_i(P) - eta_i(Q)) E_P[T_i] - A(P) + A(Q) with E_P[T_i] integrated numerically.

    Raises:
        IncompatiblePairError: If P and Q do not share statistics and standardization
    """
    form_p, form_q = exponential_family_form(p), exponential_family_form(q)
    if not form_p.same_family(form_q):
        raise IncompatiblePairError(f"{p} and {q} are not members of one exponential family")

    means = []
    for tag in form_p.statistics:
        statistic = STATISTICS[tag]
        if p.discrete:
            law = p.frozen()
            k = np.arange(0, int(law.isf(RE_TAIL_MASS)) + 2)
            means.append(math.fsum(law.pmf(k) * statistic(form_p.standardize(k))))
        else:
            means.append(_expectation(p, lambda x, s=statistic: s(form_p.standardize(x)), resolution))

    cross = math.fsum(
        (eta_p - eta_q) * mean
        for eta_p, eta_q, mean in zip(form_p.natural_parameters, form_q.natural_parameters, means)
    )
    return cross - form_p.log_partition + form_q.log_partition


def differential_entropy(d: Distribution) -> float:
    """
    Closed-form differential entropy of a continuous law.

    Raises:
        UnsupportedError: For discrete kinds
    """
    if d.kind == DistKind.GAUSSIAN:
        return 0.5 * math.log(2 * math.pi * math.e * d.sigma**2)
    if d.kind == DistKind.UNIFORM:
        return math.log(d.hi - d.lo)
    if d.kind == DistKind.BETA:
        a, b = d.alpha, d.beta
        return float(
            betaln(a, b) - (a - 1) * digamma(a) - (b - 1) * digamma(b)
            + (a + b - 2) * digamma(a + b) + math.log(d.hi - d.lo)
        )
    if d.kind == DistKind.GAMMA:
        a = d.shape
        return float(a - math.log(d.rate) + gammaln(a) + (1 - a) * digamma(a))
    raise UnsupportedError(f"Differential entropy is defined for continuous laws, got {d.kind.value}")


def printed_closed_form(p: Distribution, q: Distribution) -> float:
    """
    Gaussian, Gamma and Binomial displays in their commonly printed form, with
    Q = (.)_1 and P = (.)_2. These disagree with the oracle and are kept only
    so the discrepancy stays on record.
    """
    if p.kind != q.kind:
        raise IncompatiblePairError(f"Printed forms pair laws of one kind, got {p.kind.value} vs {q.kind.value}")
    if p.kind == DistKind.GAUSSIAN:
        mu1, s1, mu2, s2 = q.mu, q.sigma, p.mu, p.sigma
        return ((mu1**2 - mu2**2) + (s2 - s1)) / (2 * s1**2) + math.log(s1 / s2)
    if p.kind == DistKind.GAMMA:
        a1, b1, a2, b2 = q.shape, q.rate, p.shape, p.rate
        return float(
            a1 / b1 * (b2 - b1) + (a1 - a2) * (digamma(a1) - math.log(b1))
            + gammaln(a2) + a1 * math.log(b1) - gammaln(a1) - a2 * math.log(b2)
        )
    if p.kind == DistKind.BINOMIAL:
        n, p1, p2 = q.n, q.p, p.p
        mu1 = n * p1
        return float(mu1 * math.log(p1 / p2) + (mu1 - n) * (math.log1p(-p2) - math.log1p(-p1)))
    raise UnsupportedError(f"No printed form recorded for {p.kind.value}")


def compare_with_oracle(p: Distribution, q: Distribution, tol: float = 1e-6) -> tuple[float, float, float]:
    """
    R(p || q) from the closed form and the numerical oracle.

    Returns:
        (closed, oracle, diff) with diff = |closed - oracle| (0 when both are infinite);
        a diff above tol is logged as a warning

    Raises:
        IncompatiblePairError: If no closed form covers the pair
    """
    closed = relative_entropy_closed(p, q)
    oracle = relative_entropy_numeric(p, q)
    diff = 0.0 if closed == oracle else abs(closed - oracle)
    if diff > tol:
        logger.warning(f"[Entropy] Closed form and oracle disagree for {p} vs {q}: {closed} vs {oracle}")
    else:
        logger.debug(f"[Entropy] {p} vs {q}: R = {closed:.12g} (oracle diff {diff:.2e})")
    return closed, oracle, diff
