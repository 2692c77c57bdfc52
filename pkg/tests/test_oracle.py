import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncfn.besselk import bessel_k_asymptotic, bessel_k_convergent
from syncfn.errors import DomainError, ToleranceNotMet
from syncfn.oracle import (ExponentialBound, FixedUpper, QuadratureConfig, adaptive_integrate,
                           f_quadrature, k_nu_quadrature)
from syncfn.precision import EXTENDED
from syncfn.results import Regime
from reference import F_ARGMAX, F_MAX, F_REF, K53

NU = Fraction(5, 3)


def test_k_half_exact():
    res = k_nu_quadrature(Fraction(1, 2), 1.0)
    exact = math.sqrt(math.pi / 2) * math.exp(-1)
    assert res.regime is Regime.ORACLE
    assert abs(res.value - exact) <= res.abs_error_estimate
    assert res.value == pytest.approx(0.4610685, abs=5e-8)


def test_k53_agrees_with_convergent_route():
    q = k_nu_quadrature(NU, 1.0)
    c = bessel_k_convergent(NU, 1.0, rel_tol=1e-12)
    assert abs(q.value - c.value) <= q.abs_error_estimate + c.abs_error_estimate


def test_k53_agrees_with_asymptotic_route():
    q = k_nu_quadrature(NU, 10.0)
    a = bessel_k_asymptotic(NU, 10.0)
    assert abs(q.value - a.value) <= a.abs_error_estimate + q.abs_error_estimate


@pytest.mark.parametrize("x_text", list(K53))
def test_k53_reference_values(x_text):
    res = k_nu_quadrature(NU, float(x_text), QuadratureConfig(rel_tol=1e-13))
    assert abs(res.value - float(K53[x_text])) <= res.abs_error_estimate


def test_k_negative_order_uses_symmetry():
    assert k_nu_quadrature(-NU, 2.0).value == k_nu_quadrature(NU, 2.0).value


def test_k_extended_precision():
    res = k_nu_quadrature(NU, EXTENDED.num(5), QuadratureConfig(rel_tol=1e-25,
                                                               precision="extended"))
    ref = EXTENDED.num(K53["5"])
    assert float(abs(res.value - ref)) <= res.abs_error_estimate <= 1e-24 * float(ref)


def test_k_fixed_upper_reports_tail():
    res = k_nu_quadrature(NU, 1.0, QuadratureConfig(tail_cutoff_policy=FixedUpper(6.0)))
    assert res.details["tail_bound"] > 0
    assert abs(res.value - float(K53["1"])) <= res.abs_error_estimate


@pytest.mark.parametrize("x_text, quoted", [("0.001", 0.213139), ("0.05", 0.701572)])
def test_f_table_values(x_text, quoted):
    assert abs(f_quadrature(float(x_text)).value - quoted) <= 1e-6


@pytest.mark.parametrize("x_text", list(F_REF))
def test_f_reference_values(x_text):
    res = f_quadrature(float(x_text))
    assert abs(res.value - float(F_REF[x_text])) <= res.abs_error_estimate
    assert res.rel_error_estimate <= 1e-11


@pytest.mark.parametrize("x", [1e-3, 0.3, 2.0, 12.0, 40.0])
def test_halving_tolerance_is_self_consistent(x):
    a = f_quadrature(x, QuadratureConfig(rel_tol=1e-6))
    b = f_quadrature(x, QuadratureConfig(rel_tol=5e-7))
    assert abs(a.value - b.value) <= a.abs_error_estimate


@pytest.mark.parametrize("x, T", [(0.5, 8.0), (2.0, 12.0), (10.0, 20.0)])
def test_tail_bound_is_sound(x, T):
    short = f_quadrature(x, QuadratureConfig(tail_cutoff_policy=FixedUpper(T)))
    longer = f_quadrature(x, QuadratureConfig(tail_cutoff_policy=FixedUpper(1.5 * T)))
    assert short.value < longer.value
    assert longer.value - short.value <= short.details["tail_bound"]


def test_explicit_tail_epsilon():
    res = f_quadrature(3.0, QuadratureConfig(tail_cutoff_policy=ExponentialBound(1e-14)))
    assert res.details["tail_bound"] <= 1e-14 * res.value
    default = f_quadrature(3.0)
    assert abs(res.value - default.value) <= res.abs_error_estimate + default.abs_error_estimate


@given(st.floats(1e-4, 60.0))
@settings(max_examples=15, deadline=None)
def test_f_positive(x):
    assert f_quadrature(x, QuadratureConfig(rel_tol=1e-8)).value > 0


def _golden_max(f, a, b, tol):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def test_argmax_fixture():
    xm = _golden_max(lambda x: f_quadrature(x).value, 0.1, 0.6, 1e-6)
    assert xm == pytest.approx(F_ARGMAX, abs=2e-6)
    assert f_quadrature(xm).value == pytest.approx(F_MAX, abs=1e-11)


def test_tolerance_not_met():
    with pytest.raises(ToleranceNotMet) as info:
        f_quadrature(1.0, QuadratureConfig(rel_tol=1e-15, max_subdivisions=1, rule_intervals=4))
    assert info.value.result is not None


def test_adaptive_integrate_simple():
    import numpy as np
    v, e, n = adaptive_integrate(lambda t: np.exp(-t), [0.0, 5.0], abs_tol=0.0, rel_tol=1e-13,
                                 max_subdivisions=100, precision="double", intervals=32)
    assert abs(v - (1 - math.exp(-5))) <= max(e, 1e-16)


def test_config_invariants():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0, rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=20_000)


def test_domain():
    with pytest.raises(DomainError):
        f_quadrature(0.0)
    with pytest.raises(DomainError):
        k_nu_quadrature(NU, -1.0)
    # negative orders go through K_{-nu} = K_nu
    assert k_nu_quadrature(Fraction(-1, 4), 1.0).value == k_nu_quadrature(Fraction(1, 4), 1.0).value
