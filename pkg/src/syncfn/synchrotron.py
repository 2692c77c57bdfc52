r"""The synchrotron function :math:`F(x) = x \int_x^\infty K_{5/3}(z)\,dz`.

Three series representations are provided, plus a dispatcher.

Closed form (valid for all ``x > 0``)::

    F(x) = -(pi/sqrt 3) x
           + (4x)^{1/3} Gamma(2/3) 1F2(-1/3; -2/3, 2/3; x^2/4)
           + (x^11/256)^{1/3} Gamma(-8/3) 1F2(4/3; 8/3, 7/3; x^2/4)

This is ``x (S1 + S2 + S3)`` at ``nu = 5/3`` where, for general order,
``int_x^inf K_nu = S1 + S2 + S3`` with

* ``S1 = (x/2)^{1-nu} Gamma(nu-1) 1F2(1/2-nu/2; 1-nu, 3/2-nu/2; x^2/4)``
* ``S2 = (x/2)^{1+nu} Gamma(-nu-1) 1F2(1/2+nu/2; 1+nu, 3/2+nu/2; x^2/4)``
* ``S3 = Gamma(1/2+nu/2) Gamma(1/2-nu/2) / 2`` (a constant).

The terms grow like ``e^x`` while ``F`` decays like ``e^-x``, so the closed
form loses about ``2x log10(e)`` digits; it reports the loss in its error
estimate.

Small-x expansion: the same three pieces re-ordered by ascending power of
``x`` (``x^{1/3}, x, x^{7/3}, x^{11/3}, x^{13/3}, ...``).

Large-x expansion::

    F(x) = sqrt(pi x/2) e^-x sum_{n,m} c(m)/m! Gamma(1/2+n+m) (-1/x)^{n+m}

    c(m) = Gamma(1/2-nu+m) Gamma(1/2+nu+m)
           / (2^m Gamma(1/2-nu) Gamma(1/2+nu) Gamma(1/2+m))

Both indices run over divergent asymptotic series.  Under the optimal policy
the double sum is accumulated by anti-diagonals ``s = n + m`` (the power of
``1/x``) and cut before the smallest one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import CancellationLoss, DomainError, ImmediateDivergence
from .kernels import HypParams, gamma_real, hyp_convergent, rgamma
from .oracle import QuadratureConfig, f_quadrature
from .precision import CompensatedSum, Precision, arith, exact
from .results import EvalResult, Regime

log = logging.getLogger(__name__)

NU_SYNCHROTRON = Fraction(5, 3)
_HALF = Fraction(1, 2)


# -- truncation policies -----------------------------------------------------

@dataclass(frozen=True)
class SmallXTruncation:
    """Number ``M`` of retained terms of the small-x expansion (1 to 8)."""

    m_terms: int = 5

    def __post_init__(self):
        if not 1 <= self.m_terms <= 8:
            raise ValueError("m_terms must be between 1 and 8")


@dataclass(frozen=True)
class FixedN:
    """Both summation indices of the large-x double series run over 0..N."""

    n: int = 2

    def __post_init__(self):
        if not 1 <= self.n <= 20:
            raise ValueError("N must be between 1 and 20")


@dataclass(frozen=True)
class Optimal:
    """Anti-diagonal accumulation cut before the smallest anti-diagonal."""


LargeXTruncation = FixedN | Optimal


def _check_order(nu):
    if float(nu).is_integer():
        raise DomainError(f"order must be non-integer, got {nu!r}")


def _check_x(x):
    if not x > 0:
        raise DomainError("x must be positive")


# -- generic-order antiderivative pieces ------------------------------------

def _s_piece(nu, x, sign, precision, rel_tol=None):
    """Prefactor and 1F2 outcome of S1 (sign=-1) or S2 (sign=+1)."""
    A = arith(precision)
    nu_n, x_n = A.num(nu), A.num(x)
    h = A.num(_HALF)
    snu = sign * nu_n
    pref = A.power(x_n / 2, 1 + snu) * gamma_real(-snu - 1, precision)
    series = hyp_convergent(
        HypParams([h + snu / 2], [1 + snu, 3 * h + snu / 2], x_n * x_n / 4),
        rel_tol, precision=precision)
    return pref, series


def s1_term(nu, x, precision: Precision | str = Precision.DOUBLE):
    """``(x/2)^{1-nu} Gamma(nu-1) 1F2(1/2-nu/2; 1-nu, 3/2-nu/2; x^2/4)``."""
    _check_x(x)
    nu = exact(nu)
    _check_order(nu)
    pref, series = _s_piece(nu, x, -1, precision)
    return pref * series.value


def s2_term(nu, x, precision: Precision | str = Precision.DOUBLE):
    """``(x/2)^{1+nu} Gamma(-nu-1) 1F2(1/2+nu/2; 1+nu, 3/2+nu/2; x^2/4)``."""
    _check_x(x)
    nu = exact(nu)
    _check_order(nu)
    pref, series = _s_piece(nu, x, +1, precision)
    return pref * series.value


def s3_constant(nu, precision: Precision | str = Precision.DOUBLE):
    """``Gamma(1/2+nu/2) Gamma(1/2-nu/2) / 2``; independent of ``x``.

    Raises :class:`~syncfn.errors.PoleError` for odd integer ``nu``.
    """
    A = arith(precision)
    nu_n = A.num(exact(nu))
    h = A.num(_HALF)
    return gamma_real(h + nu_n / 2, precision) * gamma_real(h - nu_n / 2, precision) / 2


def s4_term(nu, x, k: int, precision: Precision | str = Precision.DOUBLE):
    """Term ``k`` of the reciprocal-argument series for ``int_x^inf K_nu``.

    Its ``1/Gamma(-k)`` factor vanishes for every ``k >= 0``, so the whole
    series is identically zero.
    """
    A = arith(precision)
    nu_n, x_n = A.num(exact(nu)), A.num(x)
    h = A.num(_HALF)
    zero_factor = rgamma(-k, precision)
    if zero_factor == 0:
        return zero_factor * 1
    num = (gamma_real(nu_n + 2 * k, precision) * gamma_real(nu_n + h + k, precision)
           * gamma_real(h + k, precision))
    den = gamma_real(nu_n + 1 + 2 * k, precision) * gamma_real(k + 1, precision)
    return (A.power(A.num(2), nu_n) * A.power(x_n, -nu_n) * num * zero_factor / den
            * A.power(-4 / (x_n * x_n), k))


def s5_term(nu, x, m: int, n: int, precision: Precision | str = Precision.DOUBLE):
    """Term ``(m, n)`` of a further large-x double series for ``int_x^inf K_nu``.

    It carries ``1/Gamma(-m-n)``, which vanishes for all ``m, n >= 0``.
    """
    A = arith(precision)
    nu_n, x_n = A.num(exact(nu)), A.num(x)
    h = A.num(_HALF)
    zero_factor = rgamma(-m - n, precision)
    if zero_factor == 0:
        return zero_factor * 1
    num = (A.num(-2) ** m * gamma_real(h + m + n, precision)
           * gamma_real(nu_n - m - n, precision) * gamma_real(-nu_n - m - n, precision))
    den = (gamma_real(n + 1, precision) * gamma_real(h - nu_n, precision)
           * gamma_real(h + nu_n, precision))
    return A.sqrt(A.pi) * A.exp(-x_n) * num * zero_factor / den * (-2 * x_n) ** n


# -- closed form --------------------------------------------------------------

def f_closed(x, rel_tol: float = 1e-9,
             precision: Precision | str = Precision.DOUBLE) -> EvalResult:
    """F(x) from the closed form with two 1F2 series.

    ``order_used`` is the larger of the two series lengths.  The error
    estimate is the rounding error of all three pieces, which is dominated by
    cancellation between them once ``x`` exceeds a few units.

    Raises
    ------
    CancellationLoss
        If the estimate exceeds ``rel_tol * F``; the result is attached.
    """
    _check_x(x)
    A = arith(precision)
    u = A.unit_roundoff
    x_n = A.num(x)
    third = A.num(Fraction(1, 3))
    z = x_n * x_n / 4

    linear = A.pi / A.sqrt(A.num(3)) * x_n
    p1 = A.cbrt(4 * x_n) * gamma_real(2 * third, precision)
    s1 = hyp_convergent(HypParams([-third], [-2 * third, 2 * third], z), precision=precision)
    p2 = x_n**3 * A.cbrt(x_n * x_n / 256) * gamma_real(-8 * third, precision)
    s2 = hyp_convergent(HypParams([4 * third], [8 * third, 7 * third], z), precision=precision)

    acc = CompensatedSum(A.num(0))
    for piece in (p1 * s1.value, p2 * s2.value, -linear):
        acc.add(piece)
    value = acc.value

    a1, a2, al = abs(float(p1)), abs(float(p2)), abs(float(linear))
    magnitude = al + a1 * s1.magnitude_sum + a2 * s2.magnitude_sum
    err = (a1 * (s1.rounding_error + 8 * u * s1.magnitude_sum)
           + a2 * (s2.rounding_error + 8 * u * s2.magnitude_sum)
           + 4 * u * al + 2 * u * magnitude)
    result = EvalResult(value, Regime.CLOSED_FORM, max(s1.terms_used, s2.terms_used), err,
                        {"precision": A.precision.value, "magnitude": magnitude})
    if err > rel_tol * abs(float(value)):
        raise CancellationLoss(
            f"F({float(x):g}) closed form: estimated error {err:.2e} exceeds rel_tol "
            f"{rel_tol:.1e} in {A.precision.value} precision", result)
    return result


# -- small-x expansion --------------------------------------------------------

def small_x_coefficients(count: int, nu=NU_SYNCHROTRON,
                         precision: Precision | str = Precision.DOUBLE) -> list[tuple]:
    """First ``count`` (exponent, coefficient) pairs of ``F`` in ascending powers.

    Generated from ``x S1``, ``x S3`` and ``x S2``, whose powers are
    ``2-nu+2n``, ``1`` and ``2+nu+2n``.  Exponents are exact fractions when
    ``nu`` is rational.
    """
    nu = exact(nu)
    _check_order(nu)
    A = arith(precision)
    nu_n = A.num(nu)
    h = A.num(_HALF)
    two = A.num(2)

    def stream(sign):
        snu = sign * nu_n
        a, b1, b2 = h + snu / 2, 1 + snu, 3 * h + snu / 2
        # x (x/2)^{1+snu} = 2^{-1-snu} x^{2+snu}
        c = A.power(two, -1 - snu) * gamma_real(-snu - 1, precision)
        e = 2 + sign * nu
        n = 0
        while True:
            yield e + 2 * n, c
            c = c * (a + n) / ((b1 + n) * (b2 + n) * (n + 1)) / 4
            n += 1

    low, high = stream(-1), stream(+1)
    out = []
    nl, nh = next(low), next(high)
    lin = (Fraction(1) if isinstance(nu, Fraction) else 1.0, s3_constant(nu, precision))
    pending_lin = True
    while len(out) < count:
        cands = [nl, nh] + ([lin] if pending_lin else [])
        best = min(cands, key=lambda t: float(t[0]))
        out.append(best)
        if best is nl:
            nl = next(low)
        elif best is nh:
            nh = next(high)
        else:
            pending_lin = False
    return out


def f_small_x(x, t: SmallXTruncation = SmallXTruncation(),
              precision: Precision | str = Precision.DOUBLE, nu=NU_SYNCHROTRON) -> EvalResult:
    """Partial sum of the first ``M`` terms of the small-x expansion.

    The error estimate is the magnitude of term ``M+1`` plus rounding.
    """
    if x == 0:
        return EvalResult(arith(precision).num(0), Regime.SMALL_X, t.m_terms, 0.0)
    _check_x(x)
    A = arith(precision)
    x_n = A.num(x)
    terms = [c * A.power(x_n, A.num(e))
             for e, c in small_x_coefficients(t.m_terms + 1, nu, precision)]
    acc = CompensatedSum(A.num(0))
    for term in terms[:-1]:
        acc.add(term)
    value = acc.value
    mag = sum(abs(float(v)) for v in terms[:-1])
    err = abs(float(terms[-1])) + 8 * A.unit_roundoff * mag
    return EvalResult(value, Regime.SMALL_X, t.m_terms, err,
                      {"precision": A.precision.value, "terms": [float(v) for v in terms]})


# -- large-x expansion --------------------------------------------------------

class _DoubleSeries:
    """Terms ``c(m)/m! Gamma(1/2+n+m)/Gamma(1/2) w^{n+m}`` of the large-x double sum.

    ``rows[m]`` holds the latest computed term for that ``m``; stepping the
    anti-diagonal advances every row by one in ``n`` and opens a new row.
    """

    def __init__(self, nu, w, one):
        self.nu, self.w, self.one = nu, w, one
        self.half = one / 2
        self.k = one  # k_m = (1/2-nu)_m (1/2+nu)_m / (2^m m!) w^m
        self.rows = []

    def next_diagonal(self, n_cap=None):
        """Advance to the next anti-diagonal; returns the list of its terms."""
        s = len(self.rows)
        for m in range(s):
            n = s - 1 - m
            self.rows[m] = self.rows[m] * (self.half + m + n) * self.w
        if s:
            self.k = (self.k * (self.half - self.nu + s - 1) * (self.half + self.nu + s - 1)
                      / (2 * s) * self.w)
        self.rows.append(self.k)
        if n_cap is None:
            return list(self.rows)
        return [t for m, t in enumerate(self.rows) if m <= n_cap and s - m <= n_cap]


def large_x_coefficients(s_max: int, nu=NU_SYNCHROTRON, n_cap: int | None = None) -> list:
    """Coefficients ``d_s`` of ``F ~ sqrt(pi x/2) e^-x sum_s d_s x^-s``.

    With ``n_cap = N`` only terms with both indices ``<= N`` contribute
    (the fixed-order truncation).  A rational ``nu`` gives exact fractions.
    """
    nu = exact(nu)
    one = Fraction(1) if isinstance(nu, Fraction) else 1.0
    ds = _DoubleSeries(nu, -one, one)
    return [sum(ds.next_diagonal(n_cap), 0 * one) for _ in range(s_max + 1)]


def f_large_x(x, t: LargeXTruncation = Optimal(),
              precision: Precision | str = Precision.DOUBLE, nu=NU_SYNCHROTRON) -> EvalResult:
    """F(x) from the large-x double series.

    ``Optimal``: anti-diagonals are added while their magnitude decreases;
    the first one followed by a larger one is the smallest and is left out.
    Its magnitude (times the prefactor) is the truncation estimate and
    ``order_used`` is the number of retained anti-diagonals.

    ``FixedN(N)``: both indices run over ``0..N``; the estimate is led by
    the omitted terms ``(N+1, 0)`` and ``(0, N+1)`` on anti-diagonal ``N+1``
    (see :func:`_large_x_fixed` for the full bound).

    Raises
    ------
    ImmediateDivergence
        If the first correction already exceeds the leading term.
    """
    _check_x(x)
    nu = exact(nu)
    _check_order(nu)
    A = arith(precision)
    u = A.unit_roundoff
    x_n = A.num(x)
    one = A.num(1)
    w = -one / x_n
    pref = A.sqrt(A.pi * x_n / 2) * A.exp(-x_n)
    apref = abs(float(pref))
    ds = _DoubleSeries(A.num(nu), w, one)
    acc = CompensatedSum(A.num(0))
    weighted = 0.0

    if isinstance(t, FixedN):
        return _large_x_fixed(t.n, ds, pref, A)

    def diag_sum():
        terms = ds.next_diagonal()
        d = CompensatedSum(A.num(0))
        for term in terms:
            d.add(term)
        return d.value, sum(abs(float(v)) for v in terms)

    cur, cur_mag = diag_sum()
    nxt, nxt_mag = diag_sum()
    if abs(nxt) > abs(cur):
        raise ImmediateDivergence(
            f"F({float(x):g}): first large-x correction exceeds the leading term")
    s = 0
    smallest = 0.0
    stopped = "OptimalTruncation"
    while True:
        if abs(nxt) > abs(cur):
            smallest = abs(float(cur))
            break
        acc.add(cur)
        weighted += (4 * s + 1) * cur_mag
        s += 1
        if abs(float(cur)) <= u * 1e-3 * abs(float(acc.value)):
            smallest = abs(float(nxt))
            stopped = "Converged"
            break
        if s >= 10_000:
            smallest = abs(float(nxt))
            stopped = "MaxTerms"
            break
        cur, cur_mag = nxt, nxt_mag
        nxt, nxt_mag = diag_sum()
    value = acc.value
    err = apref * (smallest + u * (weighted + 2 * abs(float(value))))
    err += 6 * u * abs(float(pref * value))
    return EvalResult(pref * value, Regime.LARGE_X, s, err,
                      {"precision": A.precision.value, "policy": "Optimal", "stopped": stopped})


def _large_x_fixed(N, ds: _DoubleSeries, pref, A) -> EvalResult:
    """Square truncation ``0 <= n, m <= N`` with a truthful error estimate.

    The square sum differs from the optimally truncated anti-diagonal sum by
    the terms outside the square on diagonals before the smallest one, and
    by the square's own terms from that diagonal on; the optimal sum differs
    from ``F`` by about the smallest anti-diagonal.  To leading order this is
    the pair of omitted terms ``(N+1, 0)`` and ``(0, N+1)``.
    """
    u = A.unit_roundoff
    acc = CompensatedSum(A.num(0))
    weighted = 0.0
    diag_full = []     # |D_s|
    omitted = []       # sum of |terms| outside the square on diagonal s
    inside = []        # sum of |terms| inside the square on diagonal s
    s_star = None
    s = 0
    while True:
        terms = ds.next_diagonal()
        full = CompensatedSum(A.num(0))
        out_mag = in_mag = 0.0
        for m, term in enumerate(terms):
            full.add(term)
            if m <= N and s - m <= N:
                acc.add(term)
                in_mag += abs(float(term))
                weighted += (4 * s + 1) * abs(float(term))
            else:
                out_mag += abs(float(term))
        diag_full.append(abs(float(full.value)))
        omitted.append(out_mag)
        inside.append(in_mag)
        if s_star is None and s >= 1 and diag_full[s] > diag_full[s - 1]:
            s_star = s - 1
        if s_star is None and s >= 1 and diag_full[s] <= u * 1e-3 * abs(float(acc.value)):
            s_star = s
        if s_star is not None and s >= 2 * N:
            break
        if s >= 10_000:
            s_star = s
            break
        s += 1
    estimate = sum(omitted[:s_star]) + sum(inside[s_star:]) + diag_full[s_star]
    value = acc.value
    apref = abs(float(pref))
    err = apref * (estimate + u * (weighted + 2 * abs(float(value))))
    err += 6 * u * abs(float(pref * value))
    return EvalResult(pref * value, Regime.LARGE_X, N, err,
                      {"precision": A.precision.value, "policy": "FixedN",
                       "smallest_diagonal": s_star})


# -- dispatcher ---------------------------------------------------------------

@dataclass(frozen=True)
class DispatchConfig:
    """Regime boundaries used by :func:`f_eval`.

    ``closed_max_double``/``closed_max_extended`` bound where the closed form
    is tried in each precision; beyond the double limit the large-x series
    is tried first.
    """

    small_x_max: float = 0.05
    small_x_terms: int = 6
    closed_max_double: float = 8.0
    closed_max_extended: float = 25.0
    oracle: QuadratureConfig | None = None


def f_eval(x, rel_tol: float = 1e-9, precision: Precision | str = Precision.DOUBLE,
           config: DispatchConfig = DispatchConfig()) -> EvalResult:
    """F(x) through the cheapest route whose error estimate meets ``rel_tol``.

    Order of attempts: small-x expansion (``x <= small_x_max``); closed form
    in the requested precision (up to ``closed_max_double``, or
    ``closed_max_extended`` when the requested precision is extended);
    large-x series; closed form in extended precision (``x <=
    closed_max_extended``); quadrature.  ``F(0) = 0`` exactly.
    """
    precision = Precision(precision)
    if x == 0:
        return EvalResult(arith(precision).num(0), Regime.SMALL_X, 0, 0.0)
    if not x > 0:
        raise DomainError("x must be positive")
    ext = precision is Precision.EXTENDED
    xf = float(x)

    def ok(res):
        return res.abs_error_estimate <= rel_tol * abs(float(res.value))

    if xf <= config.small_x_max:
        res = f_small_x(x, SmallXTruncation(config.small_x_terms), precision)
        if ok(res):
            return res
    if xf <= (config.closed_max_extended if ext else config.closed_max_double):
        try:
            return f_closed(x, rel_tol, precision)
        except CancellationLoss:
            pass
    if xf > config.small_x_max:
        try:
            res = f_large_x(x, Optimal(), precision)
            if ok(res):
                return res
        except ImmediateDivergence:
            pass
    if xf <= config.closed_max_extended and not ext:
        try:
            return f_closed(x, rel_tol, Precision.EXTENDED).to_double()
        except CancellationLoss:
            pass
    cfg = config.oracle or QuadratureConfig(rel_tol=min(rel_tol, 1e-3) * 0.5,
                                            precision=precision)
    return f_quadrature(x, cfg)
