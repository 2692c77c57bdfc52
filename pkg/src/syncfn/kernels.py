"""Scalar special-function building blocks.

Gamma on the real line, Pochhammer symbols, and summation of the
generalized hypergeometric series

.. math::

    {}_pF_q(a_1..a_p; b_1..b_q; z) = \\sum_n \\frac{(a_1)_n \\cdots (a_p)_n}
    {(b_1)_n \\cdots (b_q)_n} \\frac{z^n}{n!}

in the three shapes that appear in this package: 0F1 and 1F2 (entire,
summed to convergence) and 2F0 (formally divergent, summed with optimal
truncation).  Terms are generated by their ratio recurrence; no gamma call
is made per term.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ImmediateDivergence, MaxTermsExceeded, PoleError
from .precision import Arith, CompensatedSum, Precision, arith

DEFAULT_MAX_TERMS = 10_000
DEFAULT_REL_TOL = {Precision.DOUBLE: 1e-15, Precision.EXTENDED: 1e-30}


def _is_nonpositive_integer(A: Arith, v) -> bool:
    return v <= 0 and A.isint(v)


def gamma_real(z, precision: Precision | str = Precision.DOUBLE):
    """Gamma function for real ``z``.

    Negative arguments go through the reflection formula
    ``Gamma(z) = pi / (sin(pi z) Gamma(1 - z))`` so only the positive-axis
    gamma is ever evaluated directly.

    Raises
    ------
    PoleError
        If ``z`` is zero or a negative integer.
    """
    A = arith(precision)
    z = A.num(z)
    if _is_nonpositive_integer(A, z):
        raise PoleError(f"gamma has a pole at {A.to_float(z)!r}")
    if z > 0:
        try:
            return A.gamma_positive(z)
        except OverflowError:
            return math.inf
    s = A.sinpi(z)
    try:
        return A.pi / (s * A.gamma_positive(1 - z))
    except OverflowError:
        # |Gamma(z)| underflows for large negative z
        mag = math.exp(math.log(math.pi) - math.log(abs(s)) - math.lgamma(1 - z))
        return math.copysign(mag, s)


def rgamma(z, precision: Precision | str = Precision.DOUBLE):
    """Reciprocal gamma ``1/Gamma(z)``; exactly zero at the poles of Gamma."""
    A = arith(precision)
    z = A.num(z)
    if _is_nonpositive_integer(A, z):
        return A.num(0)
    return 1 / gamma_real(z, precision)


def pochhammer(beta, n: int):
    """Rising factorial ``(beta)_n = beta (beta+1) ... (beta+n-1)``.

    Computed as a product, so it is defined for every ``beta`` and keeps the
    type of ``beta`` (``Fraction`` in gives an exact ``Fraction`` out).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    out = beta * 0 + 1
    for k in range(n):
        out *= beta + k
    return out


class StopReason(str, enum.Enum):
    CONVERGED = "Converged"
    OPTIMAL_TRUNCATION = "OptimalTruncation"
    MAX_TERMS = "MaxTerms"


@dataclass(frozen=True)
class HypParams:
    """Parameters ``a_1..a_p``, ``b_1..b_q`` and argument of a pFq series."""

    upper: tuple
    lower: tuple
    argument: object

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        if len(self.upper) > 2 or len(self.lower) > 2:
            raise ValueError("only p <= 2 and q <= 2 are supported")
        for b in self.lower:
            if b <= 0 and float(b).is_integer() and not self._terminates_before(-b):
                raise PoleError(f"lower parameter {b!r} is a pole of the series")

    def _terminates_before(self, k) -> bool:
        return any(a <= 0 and float(a).is_integer() and -a <= k for a in self.upper)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.upper), len(self.lower)


@dataclass(frozen=True)
class SeriesOutcome:
    """Partial sum and stopping diagnostics of a series summation.

    ``rounding_error`` is a running bound on the floating-point error of
    ``value`` (term recurrences and compensated accumulation); it is separate
    from the truncation error described by the term magnitudes.
    """

    value: object
    terms_used: int
    last_term_magnitude: float
    smallest_term_magnitude: float
    stopped_reason: StopReason
    rounding_error: float = 0.0
    magnitude_sum: float = 0.0


def _convert(A: Arith, p: HypParams):
    return [A.num(a) for a in p.upper], [A.num(b) for b in p.lower], A.num(p.argument)


def _ops_per_term(p: HypParams) -> int:
    # additions a+n, products, divisions and the z/(n+1) factor
    return 2 * (len(p.upper) + len(p.lower)) + 3


def _next_term(t, n, upper, lower, z):
    num = t * z
    for a in upper:
        num *= a + n
    den = n + 1
    for b in lower:
        den *= b + n
    return num / den


def hyp_convergent(
    p: HypParams,
    rel_tol: float | None = None,
    *,
    precision: Precision | str = Precision.DOUBLE,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesOutcome:
    """Sum an entire hypergeometric series (0F1 or 1F2) to convergence.

    Summation stops once two consecutive terms are at most
    ``rel_tol * |partial sum|``; two are required because negative upper
    parameters can produce isolated small terms.

    Raises
    ------
    MaxTermsExceeded
        If the tolerance is not met within ``max_terms`` terms.
    """
    pp, qq = p.shape
    if qq != pp + 1:
        raise ValueError(f"hyp_convergent needs q = p + 1, got {pp}F{qq}")
    A = arith(precision)
    if rel_tol is None:
        rel_tol = DEFAULT_REL_TOL[A.precision]
    upper, lower, z = _convert(A, p)
    k = _ops_per_term(p)

    t = A.num(1)
    acc = CompensatedSum(A.num(0))
    weighted = 0.0
    mag = 0.0
    smallest = math.inf
    quiet = 0
    for n in range(max_terms):
        acc.add(t)
        at = abs(float(t))
        mag += at
        weighted += (k * n + 1) * at
        smallest = min(smallest, at)
        if t == 0:
            s = acc.value
            return SeriesOutcome(s, n + 1, 0.0, 0.0, StopReason.CONVERGED,
                                 A.unit_roundoff * (2 * abs(float(s)) + weighted), mag)
        s = acc.value
        thresh = max(rel_tol * abs(float(s)), float(A.tiny))
        quiet = quiet + 1 if at <= thresh else 0
        if quiet >= 2:
            return SeriesOutcome(s, n + 1, at, smallest, StopReason.CONVERGED,
                                 A.unit_roundoff * (2 * abs(float(s)) + weighted), mag)
        for b in lower:
            if b + n == 0:
                raise PoleError("series hits a lower-parameter pole")
        t = _next_term(t, n, upper, lower, z)
    raise MaxTermsExceeded(f"no convergence within {max_terms} terms")


def hyp_divergent_optimal(
    p: HypParams,
    *,
    precision: Precision | str = Precision.DOUBLE,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesOutcome:
    """Sum a 2F0 series with optimal truncation.

    Terms are added while their magnitudes decrease.  At the first index
    where the next term is larger than the current one, the current term is
    the smallest: it is *not* added, its index is ``terms_used`` and its
    magnitude is the truncation error estimate.

    A series with a non-positive integer upper parameter is a polynomial and
    is summed exactly.  Summation also stops (``Converged``) once terms fall
    below the working precision relative to the sum, which keeps the cost
    bounded for very small arguments.

    Raises
    ------
    ImmediateDivergence
        If ``|t_1| > |t_0|``: no truncation is useful at this argument.
    """
    if p.shape != (2, 0):
        raise ValueError(f"hyp_divergent_optimal needs a 2F0 series, got {p.shape}")
    A = arith(precision)
    upper, lower, z = _convert(A, p)
    if z == 0:
        raise ValueError("argument must be non-zero")
    k = _ops_per_term(p)
    u = A.unit_roundoff
    terminating = any(_is_nonpositive_integer(A, a) for a in upper)

    acc = CompensatedSum(A.num(0))
    weighted = 0.0
    mag = 0.0
    t = A.num(1)
    nxt = _next_term(t, 0, upper, lower, z)
    if not terminating and abs(nxt) > abs(t):
        raise ImmediateDivergence(
            f"second term {A.to_float(abs(nxt)):.3g} exceeds the first; argument too large")

    def outcome(n, last, smallest, reason):
        s = acc.value
        return SeriesOutcome(s, n, last, smallest, reason,
                             u * (2 * abs(float(s)) + weighted), mag)

    for n in range(max_terms):
        at = abs(float(t))
        if t == 0:
            return outcome(n, 0.0, 0.0, StopReason.CONVERGED)
        if not terminating and abs(nxt) > abs(t):
            return outcome(n, at, at, StopReason.OPTIMAL_TRUNCATION)
        acc.add(t)
        mag += at
        weighted += (k * n + 1) * at
        if not terminating and at <= u * 1e-3 * abs(float(acc.value)):
            # remaining terms are below the working precision
            return outcome(n + 1, at, abs(float(nxt)), StopReason.CONVERGED)
        t, nxt = nxt, _next_term(nxt, n + 1, upper, lower, z)
    return outcome(max_terms, abs(float(t)), abs(float(t)), StopReason.MAX_TERMS)


def hyp_naive_term(upper: Sequence, lower: Sequence, z: float, n: int) -> float:
    """Term ``n`` of a pFq series from gamma ratios (reference evaluation)."""
    num = 1.0
    for a in upper:
        num *= gamma_real(a + n) / gamma_real(a)
    den = math.factorial(n) if n < 171 else math.inf
    for b in lower:
        den *= gamma_real(b + n) / gamma_real(b)
    return num / den * z**n
