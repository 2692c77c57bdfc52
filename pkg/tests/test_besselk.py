import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncfn.besselk import (asymptotic_coefficients, bessel_i, bessel_k, bessel_k_asymptotic,
                            bessel_k_convergent)
from syncfn.errors import CancellationLoss, ImmediateDivergence, OrderIsInteger
from syncfn.results import Regime
from reference import K53, K53_GRID

NU = Fraction(5, 3)


def k_half(x):
    return math.sqrt(math.pi / (2 * x)) * math.exp(-x)


@pytest.mark.parametrize("x", [0.1, 1.0, 3.0, 10.0, 30.0])
def test_k_half_closed_form(x):
    res = bessel_k(0.5, x, rel_tol=1e-14)
    assert abs(res.value - k_half(x)) <= 1e-14 * k_half(x)


def test_k_half_asymptotic_series_terminates():
    res = bessel_k_asymptotic(Fraction(1, 2), 1.0)
    assert res.order_used == 1
    assert res.value == pytest.approx(k_half(1.0), rel=1e-15)


@pytest.mark.parametrize("x_text, ref", K53.items())
def test_k53_reference_values(x_text, ref):
    x = float(x_text)
    res = bessel_k(NU, x, rel_tol=1e-12)
    assert abs(res.value - float(ref)) <= max(res.abs_error_estimate, 1e-13 * float(ref))
    assert res.rel_error_estimate <= 1e-12


@given(st.floats(0.05, 40.0), st.sampled_from([Fraction(1, 3), Fraction(5, 3), Fraction(7, 2)]))
@settings(max_examples=40, deadline=None)
def test_k_symmetric_in_order(x, nu):
    a = bessel_k(nu, x, rel_tol=1e-10)
    b = bessel_k(-nu, x, rel_tol=1e-10)
    assert abs(a.value - b.value) <= a.abs_error_estimate + b.abs_error_estimate


def test_bessel_i_against_mpmath():
    for x in (0.5, 2.0, 8.0):
        with mpmath.workdps(30):
            ref = float(mpmath.besseli(mpmath.mpf(5) / 3, x))
        assert bessel_i(NU, x) == pytest.approx(ref, rel=1e-14)


def test_convergent_route_reports_cancellation():
    with pytest.raises(CancellationLoss) as info:
        bessel_k_convergent(NU, 30.0, rel_tol=1e-9)
    res = info.value.result
    assert res is not None and res.regime is Regime.CLOSED_FORM
    assert res.rel_error_estimate > 1e-9


def test_convergent_route_estimate_is_truthful():
    for x in (1.0, 5.0, 10.0, 15.0):
        try:
            res = bessel_k_convergent(NU, x, rel_tol=1.0)
        except CancellationLoss as exc:
            res = exc.result
        with mpmath.workdps(30):
            ref = mpmath.besselk(mpmath.mpf(5) / 3, x)
        assert float(abs(res.value - ref)) <= res.abs_error_estimate


def test_integer_order_rejected():
    with pytest.raises(OrderIsInteger):
        bessel_k(2, 1.0)


def test_asymptotic_immediate_divergence():
    with pytest.raises(ImmediateDivergence):
        bessel_k_asymptotic(NU, 0.1)


@pytest.mark.parametrize("x", [5.0, 8.0, 10.0, 12.0, 14.0, 16.0])
def test_asymptotic_within_smallest_term_of_extended_convergent(x):
    # beyond x ~ 17 the 106-bit convergent route is less accurate than the
    # asymptotic one, so it stops being a useful reference
    asym = bessel_k_asymptotic(NU, x)
    conv = bessel_k_convergent(NU, x, rel_tol=1e-16, precision="extended")
    assert conv.abs_error_estimate < 0.1 * asym.abs_error_estimate
    assert float(abs(asym.value - conv.value)) <= asym.abs_error_estimate


@pytest.mark.parametrize("x", sorted(K53_GRID))
def test_asymptotic_within_estimate_of_reference(x):
    asym = bessel_k_asymptotic(NU, float(x))
    assert abs(asym.value - float(K53_GRID[x])) <= asym.abs_error_estimate


def test_asymptotic_coefficients_exact():
    c = asymptotic_coefficients(NU, 3)
    assert c == [1, Fraction(91, 72), Fraction(1729, 10368)]
    assert c[1] == (4 * NU**2 - 1) / 8


def test_dispatch_picks_asymptotic_at_large_x():
    assert bessel_k(NU, 30.0).regime is Regime.LARGE_X
    assert bessel_k(NU, 1.0).regime is Regime.CLOSED_FORM


def test_extended_precision_value():
    res = bessel_k(NU, 10.0, rel_tol=1e-20, precision="extended")
    with mpmath.workdps(40):
        ref = mpmath.besselk(mpmath.mpf(5) / 3, 10)
        assert abs(mpmath.mpf(res.value) - ref) <= res.abs_error_estimate <= 1e-20 * ref


def test_unreachable_tolerance_returns_best_candidate(caplog):
    # 106 bits cannot reach 1e-28 at x = 20 by either route
    res = bessel_k(NU, 20.0, rel_tol=1e-28, precision="extended")
    assert "no route met" in caplog.text
    assert res.regime is Regime.LARGE_X
    with mpmath.workdps(40):
        ref = mpmath.besselk(mpmath.mpf(5) / 3, 20)
        assert abs(mpmath.mpf(res.value) - ref) <= res.abs_error_estimate
