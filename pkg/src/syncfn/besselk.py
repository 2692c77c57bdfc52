"""Modified Bessel functions K_nu by two independent routes.

* Convergent route: ``K_nu = (pi/2) (I_{-nu} - I_nu) / sin(nu pi)`` with both
  ``I`` evaluated from their ascending series.  Exact in principle but it
  cancels: the ``I`` terms grow like ``e^x`` while ``K`` decays like ``e^-x``.
* Asymptotic route: ``K_nu = sqrt(pi/(2x)) e^-x 2F0(1/2-nu, 1/2+nu; ; -1/(2x))``
  summed with optimal truncation.  Useless at small ``x``, excellent at
  large ``x``.

:func:`bessel_k` picks whichever route meets the requested tolerance.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from .errors import CancellationLoss, ImmediateDivergence, OrderIsInteger
from .kernels import HypParams, gamma_real, hyp_convergent, hyp_divergent_optimal, pochhammer
from .precision import Precision, arith, exact
from .results import EvalResult, Regime

log = logging.getLogger(__name__)

# relative error budget of a prefactor built from a handful of libm calls
_PREFACTOR_OPS = 6


def _check_x(x):
    if not x > 0:
        raise ValueError("x must be positive")


def _check_order(nu):
    if float(nu).is_integer():
        raise OrderIsInteger(f"integer order {nu!r} is not supported")


def _bessel_i_parts(nu, x, rel_tol, precision):
    """I_nu(x) together with an absolute rounding-error bound."""
    A = arith(precision)
    nu_n, x_n = A.num(nu), A.num(x)
    series = hyp_convergent(HypParams([], [nu_n + 1], x_n * x_n / 4),
                            rel_tol, precision=precision)
    pref = A.power(x_n / 2, nu_n) / gamma_real(nu_n + 1, precision)
    value = pref * series.value
    err = abs(float(pref)) * (series.rounding_error
                              + _PREFACTOR_OPS * A.unit_roundoff * series.magnitude_sum)
    return value, err


def bessel_i(nu, x, rel_tol: float | None = None,
             precision: Precision | str = Precision.DOUBLE):
    """Modified Bessel function of the first kind from its ascending series.

    ``I_nu(x) = (x/2)^nu sum_n (x^2/4)^n / (n! Gamma(nu+n+1))``, summed as
    ``(x/2)^nu / Gamma(nu+1) * 0F1(; nu+1; x^2/4)``.
    """
    _check_x(x)
    return _bessel_i_parts(exact(nu), x, rel_tol, precision)[0]


def bessel_k_convergent(nu, x, rel_tol: float = 1e-9,
                        precision: Precision | str = Precision.DOUBLE) -> EvalResult:
    """K_nu(x) from the difference of I_{-nu} and I_nu.

    The error estimate is the rounding error of both ``I`` series scaled by
    ``pi / (2 |sin(nu pi)|)``; it grows like ``e^{2x}`` relative to ``K``.

    Raises
    ------
    OrderIsInteger
        For integer ``nu``.
    CancellationLoss
        If the estimate exceeds ``rel_tol * |K|``.  The computed result is
        attached to the exception.
    """
    _check_x(x)
    nu = exact(nu)
    _check_order(nu)
    A = arith(precision)
    i_neg, e_neg = _bessel_i_parts(-nu, x, None, precision)
    i_pos, e_pos = _bessel_i_parts(nu, x, None, precision)
    scale = A.pi / (2 * A.sinpi(A.num(nu)))
    value = scale * (i_neg - i_pos)
    mag = abs(float(i_neg)) + abs(float(i_pos))
    err = abs(float(scale)) * (e_neg + e_pos + 2 * A.unit_roundoff * mag)
    err += 4 * A.unit_roundoff * abs(float(value))
    result = EvalResult(value, Regime.CLOSED_FORM, 0, err,
                        {"precision": A.precision.value, "cancellation": mag})
    if err > rel_tol * abs(float(value)):
        raise CancellationLoss(
            f"K_{float(nu):g}({float(x):g}): estimated error {err:.2e} exceeds "
            f"rel_tol {rel_tol:.1e}", result)
    return result


def bessel_k_asymptotic(nu, x, precision: Precision | str = Precision.DOUBLE) -> EvalResult:
    """K_nu(x) from the divergent 2F0 representation, optimally truncated.

    ``order_used`` is the number of retained terms; the error estimate is
    the prefactor times the smallest (first omitted) term plus rounding.

    Raises
    ------
    ImmediateDivergence
        If ``x`` is too small for any truncation to help.
    """
    _check_x(x)
    nu = exact(nu)
    A = arith(precision)
    nu_n, x_n = A.num(nu), A.num(x)
    half = A.num(Fraction(1, 2))
    series = hyp_divergent_optimal(
        HypParams([half - nu_n, half + nu_n], [], -1 / (2 * x_n)), precision=precision)
    pref = A.sqrt(A.pi / (2 * x_n)) * A.exp(-x_n)
    value = pref * series.value
    apref = abs(float(pref))
    err = apref * (series.smallest_term_magnitude + series.rounding_error)
    err += _PREFACTOR_OPS * A.unit_roundoff * abs(float(value))
    return EvalResult(value, Regime.LARGE_X, series.terms_used, err,
                      {"precision": A.precision.value, "stopped": series.stopped_reason.value})


def asymptotic_coefficients(nu, n_terms: int) -> list:
    """Coefficients ``c_k`` of ``K_nu ~ sqrt(pi/(2x)) e^-x sum_k c_k x^-k``.

    ``c_k = (1/2-nu)_k (1/2+nu)_k (-1/2)^k / k!``.  With a ``Fraction`` order
    the coefficients are exact rationals.
    """
    nu = exact(nu)
    half = Fraction(1, 2) if isinstance(nu, Fraction) else 0.5
    out = []
    fact = 1
    for k in range(n_terms):
        if k:
            fact *= k
        out.append(pochhammer(half - nu, k) * pochhammer(half + nu, k)
                   * (-half) ** k / fact)
    return out


def bessel_k(nu, x, rel_tol: float = 1e-9,
             precision: Precision | str = Precision.DOUBLE) -> EvalResult:
    """K_nu(x), choosing the route by error estimate.

    The asymptotic route is taken whenever its estimate meets ``rel_tol``.
    Otherwise the convergent route is used, escalating to extended precision
    when cancellation makes double precision insufficient.  If no route meets
    the tolerance the candidate with the smallest relative estimate is
    returned; its estimate stays truthful.
    """
    _check_x(x)
    nu = exact(nu)
    _check_order(nu)
    precision = Precision(precision)
    if precision is Precision.DOUBLE:
        plan = [("asym", Precision.DOUBLE), ("conv", Precision.DOUBLE),
                ("conv", Precision.EXTENDED), ("asym", Precision.EXTENDED)]
    else:
        plan = [("asym", Precision.EXTENDED), ("conv", Precision.EXTENDED)]

    candidates = []
    for route, prec in plan:
        try:
            if route == "asym":
                res = bessel_k_asymptotic(nu, x, prec)
            else:
                res = bessel_k_convergent(nu, x, rel_tol, prec)
        except ImmediateDivergence:
            continue
        except CancellationLoss as exc:
            res = exc.result
        if res.abs_error_estimate <= rel_tol * abs(float(res.value)):
            return res.to_double() if precision is Precision.DOUBLE else res
        candidates.append(res)
    best = min(candidates, key=lambda r: r.rel_error_estimate)
    log.warning("K_%g(%g): no route met rel_tol=%.1e; best estimate %.2e",
                float(nu), float(x), rel_tol, best.rel_error_estimate)
    return best.to_double() if precision is Precision.DOUBLE else best

