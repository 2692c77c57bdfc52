"""Quadrature ground truth for K_nu and the synchrotron function.

K_nu comes from its integral over ``[1, inf)``,

    K_nu(x) = sqrt(pi)/Gamma(nu+1/2) (x/2)^nu int_1^inf e^{-xt} (t^2-1)^{nu-1/2} dt,

and F from ``F(x) = x int_x^inf K_{5/3}(z) dz`` with the inner K integral
evaluated by quadrature as well.  Nothing here touches the series routes, so
the two can certify each other.

For the inner integral we substitute ``t = 1 + u^2`` and rescale
``u = v / sqrt(x)``, which gives

    K_nu(x) = sqrt(pi) 2^{1-nu} / Gamma(nu+1/2) * e^{-x} x^{-nu}
              * int_0^inf e^{-v^2} v^{2 nu} (2x + v^2)^{nu-1/2} dv.

The Gaussian factor fixes the integration range independently of ``x``.  A
further ``v = V w^3`` map softens the ``v^{2 nu}`` endpoint behaviour.

Panels use a nested Clenshaw-Curtis pair (``N`` and ``N/2`` intervals share
nodes); the difference of the two is the panel error estimate, which is the
error of the coarser rule and therefore conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, ToleranceNotMet
from .kernels import gamma_real
from .precision import Arith, Precision, arith, exact
from .results import EvalResult, Regime


@dataclass(frozen=True)
class FixedUpper:
    """Integrate up to a fixed upper limit and report the tail bound."""

    T: float


@dataclass(frozen=True)
class ExponentialBound:
    """Choose the upper limit so the rigorous tail bound is below ``eps``
    times the integral.  ``eps=None`` means a fraction of the tolerance."""

    eps: float | None = None


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 0.0
    rel_tol: float = 1e-12
    max_subdivisions: int = 2000
    tail_cutoff_policy: FixedUpper | ExponentialBound = field(default_factory=ExponentialBound)
    precision: Precision = Precision.DOUBLE
    rule_intervals: int | None = None  # Clenshaw-Curtis N; default 32 (double) or 64 (extended)

    def __post_init__(self):
        object.__setattr__(self, "precision", Precision(self.precision))
        if not (self.abs_tol > 0 or self.rel_tol > 0):
            raise ValueError("abs_tol or rel_tol must be positive")
        if not 1 <= self.max_subdivisions <= 10_000:
            raise ValueError("max_subdivisions must be in [1, 10000]")
        if self.rule_intervals is not None and (self.rule_intervals < 4 or self.rule_intervals % 4):
            raise ValueError("rule_intervals must be a multiple of 4")

    @property
    def intervals(self) -> int:
        if self.rule_intervals:
            return self.rule_intervals
        return 64 if self.precision is Precision.EXTENDED else 32

    @property
    def tail_eps(self) -> float:
        pol = self.tail_cutoff_policy
        if isinstance(pol, ExponentialBound) and pol.eps is not None:
            return pol.eps
        return self.rel_tol * 1e-2 if self.rel_tol > 0 else 1e-16


# -- nested Clenshaw-Curtis rules -------------------------------------------

@dataclass(frozen=True)
class _Rule:
    nodes: np.ndarray
    w_hi: np.ndarray
    w_lo: np.ndarray  # coarse rule on the even-indexed nodes, zeros elsewhere


def _cc_weights(A: Arith, n: int) -> list:
    pi = A.pi
    w = []
    for k in range(n + 1):
        s = A.num(0)
        for j in range(1, n // 2 + 1):
            b = 1 if 2 * j == n else 2
            s += A.num(b) / (4 * j * j - 1) * A.cos(2 * j * k * pi / n)
        c = 1 if k in (0, n) else 2
        w.append(A.num(c) / n * (1 - s))
    return w


@lru_cache(maxsize=None)
def _rule(precision: Precision, n: int) -> _Rule:
    A = arith(precision)
    nodes = A.array([A.cos(k * A.pi / n) for k in range(n + 1)])
    w_hi = A.array(_cc_weights(A, n))
    lo = _cc_weights(A, n // 2)
    w_lo = A.zeros(n + 1)
    for k in range(n // 2 + 1):
        w_lo[2 * k] = lo[k]
    return _Rule(nodes, w_hi, w_lo)


# -- adaptive integrator ----------------------------------------------------

def _as_float(a) -> np.ndarray:
    return np.asarray(a, dtype=float)


def _scalar(a):
    if isinstance(a, np.generic) or (isinstance(a, np.ndarray) and a.ndim == 0):
        return a.item()
    return a


class _Panel:
    __slots__ = ("a", "b", "q", "err", "floor")

    def __init__(self, a, b, q, err, floor):
        self.a, self.b, self.q, self.err, self.floor = a, b, q, err, floor


def _eval_panel(f, a, b, rule: _Rule, A: Arith) -> _Panel:
    half = (b - a) / 2
    mid = (a + b) / 2
    out = f(mid + half * rule.nodes)
    vals, errs = out if isinstance(out, tuple) else (out, None)
    q = half * np.tensordot(rule.w_hi, vals, axes=(0, 0))
    q_lo = half * np.tensordot(rule.w_lo, vals, axes=(0, 0))
    ahalf = abs(float(half))
    qabs = ahalf * np.tensordot(_as_float(rule.w_hi), np.abs(_as_float(vals)), axes=(0, 0))
    floor = 8 * len(rule.nodes) * A.unit_roundoff * qabs
    err = np.maximum(_as_float(np.abs(q - q_lo)), floor)
    if errs is not None:
        err = err + ahalf * np.tensordot(_as_float(rule.w_hi), _as_float(errs), axes=(0, 0))
    return _Panel(a, b, q, err, floor)


def adaptive_integrate(f, breakpoints, *, abs_tol: float, rel_tol: float,
                       max_subdivisions: int, precision: Precision = Precision.DOUBLE,
                       intervals: int = 32):
    """Globally adaptive integration of a (vector-valued) function.

    ``f`` maps a 1-D array of nodes to values of shape ``(nodes, ...)`` or to
    a ``(values, abs_errors)`` pair when the integrand is itself inexact.
    Every component must meet ``max(abs_tol, rel_tol * |I|)``.

    Returns ``(value, abs_error, n_panels)``; raises :class:`ToleranceNotMet`
    (carrying the same triple) when the subdivision budget runs out.
    """
    A = arith(precision)
    rule = _rule(A.precision, intervals)
    pts = [A.num(p) for p in breakpoints]
    panels = [_eval_panel(f, a, b, rule, A) for a, b in zip(pts[:-1], pts[1:])]
    while True:
        total = sum((p.q for p in panels[1:]), panels[0].q)
        err = sum((p.err for p in panels[1:]), panels[0].err)
        tol = np.maximum(abs_tol, rel_tol * np.abs(_as_float(total)))
        if np.all(err <= tol):
            return _scalar(total), _scalar(err), len(panels)
        scale = np.maximum(tol, 1e-300)
        ranked = sorted(
            (p for p in panels if np.any(p.err > 1.01 * p.floor)),
            key=lambda p: float(np.max(p.err / scale)), reverse=True)
        if not ranked or len(panels) >= max_subdivisions:
            raise ToleranceNotMet(
                f"quadrature error {float(np.max(err)):.2e} above tolerance after "
                f"{len(panels)} panels", (_scalar(total), _scalar(err), len(panels)))
        worst = ranked[0]
        panels.remove(worst)
        m = (worst.a + worst.b) / 2
        panels.append(_eval_panel(f, worst.a, m, rule, A))
        panels.append(_eval_panel(f, m, worst.b, rule, A))


# -- K_nu through the [1, inf) integral -------------------------------------

def _gamma_upper_bound(s: float, y: float) -> float:
    """Upper bound on the upper incomplete gamma Gamma(s, y) for y > s - 1."""
    base = (s - 1) * math.log(y) - y
    if s <= 1:
        return math.exp(base)
    return math.exp(base) * y / (y - (s - 1))


class _InnerK:
    """Vectorised evaluation of K_nu at many points by quadrature."""

    def __init__(self, nu, cfg: QuadratureConfig):
        nu = exact(nu)
        if not float(nu) > -0.5:
            raise DomainError("the integral representation needs nu > -1/2")
        self.cfg = cfg
        self.A = A = arith(cfg.precision)
        self.nu_f = float(nu)
        self.nu = A.num(nu)
        self.p = self.nu - A.num(Fraction(1, 2))
        self.p_f = float(self.p)
        self.const = A.sqrt(A.pi) * A.power(A.num(2), 1 - self.nu) / gamma_real(
            self.nu + A.num(Fraction(1, 2)), cfg.precision)

    def _tail(self, V: float, z: np.ndarray) -> np.ndarray:
        p = self.p_f
        s = 2 * self.nu_f
        c = ((2 * z + V * V) / (V * V)) ** p if p >= 0 else np.ones_like(z)
        return 0.5 * c * _gamma_upper_bound(s, V * V)

    def _j_lower(self, z: np.ndarray) -> np.ndarray:
        nu, p = self.nu_f, self.p_f
        if p >= 0:
            return np.maximum(math.gamma(2 * nu) / 2, (2 * z) ** p * math.gamma(nu + 0.5) / 2)
        return (2 * z + 1) ** p * math.exp(-1) / (2 * nu + 1)

    def _upper_limit(self, z: np.ndarray, eps: float) -> float:
        V = 2.0
        need = max(2 * self.nu_f - 1, 0.0) + 1.0
        while V * V <= need or np.any(self._tail(V, z) > eps * self._j_lower(z)):
            V += 0.25
        return V

    def integral(self, z, V: float, rel_tol: float):
        """J(z) = int_0^V e^{-v^2} v^{2nu} (2z+v^2)^{nu-1/2} dv for a vector z."""
        A, cfg = self.A, self.cfg
        Vn = A.num(V)
        two_z = 2 * z
        p = self.p
        two_nu = 2 * self.nu

        def integrand(w):
            w2 = w * w
            v = Vn * w2 * w
            v2 = v * v
            g = 3 * Vn * w2 * A.vexp(-v2) * A.vpower(v, two_nu)
            if p == 0:
                return np.broadcast_to(g[:, None], (len(w), len(z))) * 1
            return g[:, None] * A.vpower(two_z[None, :] + v2[:, None], p)

        val, err, n = adaptive_integrate(
            integrand, [0, 1], abs_tol=0.0, rel_tol=rel_tol,
            max_subdivisions=cfg.max_subdivisions, precision=cfg.precision,
            intervals=cfg.intervals)
        return val, err, n

    def __call__(self, z, rel_tol: float, V: float | None = None):
        """K_nu at the points ``z``: values, absolute errors, tail bounds, panels."""
        A = self.A
        zf = _as_float(z)
        if V is None:
            V = self._upper_limit(zf, rel_tol * 1e-2)
        J, jerr, n = self.integral(z, V, rel_tol)
        tail = self._tail(V, zf)
        pref = self.const * A.vexp(-z) * A.vpower(z, -self.nu)
        K = pref * J
        apref = np.abs(_as_float(pref))
        kerr = apref * (jerr + tail) + 4 * A.unit_roundoff * np.abs(_as_float(K))
        return K, kerr, apref * tail, n


def k_nu_quadrature(nu, x, cfg: QuadratureConfig = QuadratureConfig()) -> EvalResult:
    """K_nu(x) by adaptive quadrature of its ``[1, inf)`` integral.

    ``order_used`` is the number of quadrature panels.  With a
    :class:`FixedUpper` policy, ``T`` is the upper limit in ``t``; the
    reported error then includes the (rigorous) bound on the discarded tail.
    Negative orders use ``K_{-nu} = K_nu``.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    nu = exact(nu)
    inner = _InnerK(abs(nu), cfg)
    A = inner.A
    z = A.array([x])
    V = None
    pol = cfg.tail_cutoff_policy
    if isinstance(pol, FixedUpper):
        if not pol.T > 1:
            raise ValueError("FixedUpper.T must exceed 1")
        V = math.sqrt(float(x) * (pol.T - 1))
    elif pol.eps is not None:
        V = inner._upper_limit(_as_float(z), pol.eps)
    K, kerr, tail, n = inner(z, cfg.rel_tol, V)
    return EvalResult(_scalar(K[0]), Regime.ORACLE, n, float(kerr[0]),
                      {"tail_bound": float(tail[0]), "precision": cfg.precision.value})


# -- the synchrotron function ------------------------------------------------

def _k_tail_integral_bound(nu: float, Z: float) -> float:
    """Bound on int_Z^inf K_nu(z) dz from K_nu(z) <= sqrt(pi/2z) e^-z (1-p/2z)^-(nu+1/2)."""
    p = nu - 0.5
    fac = (1 - p / (2 * Z)) ** (-(nu + 0.5)) if p > 0 else 1.0
    return math.sqrt(math.pi / (2 * Z)) * math.exp(-Z) * fac


def f_quadrature(x, cfg: QuadratureConfig = QuadratureConfig(), nu=Fraction(5, 3)) -> EvalResult:
    """Synchrotron function ``F(x) = x int_x^inf K_nu(z) dz`` by nested quadrature.

    The outer integral runs in ``log z`` below ``z = 1`` (where K is
    singular like ``z^-nu``) and in ``z`` above.  Its upper limit ``Z``
    comes from the tail policy; the tail uses the bound in
    :func:`_k_tail_integral_bound`.  The error estimate adds the outer panel
    errors, the propagated inner errors and the tail bound.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    nu = exact(nu)
    inner = _InnerK(abs(nu), cfg)
    A = inner.A
    nu_f = abs(float(nu))
    xf = float(x)
    x_n = A.num(x)
    inner_tol = cfg.rel_tol * 0.1

    pol = cfg.tail_cutoff_policy
    if isinstance(pol, FixedUpper):
        Z = float(pol.T)
        if not Z > xf:
            raise ValueError("FixedUpper.T must exceed x")
    else:
        eps = cfg.tail_eps
        k_ref, *_ = inner(A.array([xf + 1]), 1e-3)
        lower = float(k_ref[0])
        Z = max(xf + 1, 1.0)
        while _k_tail_integral_bound(nu_f, Z) > eps * lower:
            Z += 0.5
    tail = _k_tail_integral_bound(nu_f, Z)
    V_shared = inner._upper_limit(np.array([min(xf, 1.0), Z]), inner_tol * 1e-2)

    def k_linear(z):
        K, kerr, _, _ = inner(z, inner_tol, V_shared)
        return K, kerr

    def k_log(s):
        z = A.vexp(s)
        K, kerr, _, _ = inner(z, inner_tol, V_shared)
        return K * z, kerr * _as_float(z)

    total = A.num(0)
    err = 0.0
    panels = 0
    lo = x_n
    if xf < 1:
        sub = max(1, math.ceil(-math.log(xf) / 2))
        bps = [A.log(x_n) * (1 - A.num(Fraction(k, sub))) for k in range(sub + 1)]
        v, e, n = adaptive_integrate(k_log, bps, abs_tol=cfg.abs_tol / xf, rel_tol=cfg.rel_tol * 0.5,
                                     max_subdivisions=cfg.max_subdivisions,
                                     precision=cfg.precision, intervals=cfg.intervals)
        total += v
        err += float(e)
        panels += n
        lo = A.num(1)
    lof = float(lo)
    sub = max(1, math.ceil((Z - lof) / 6))
    Zn = A.num(Z)
    bps = [lo + (Zn - lo) * A.num(Fraction(k, sub)) for k in range(sub + 1)]
    # a share of the tolerance relative to the whole integral, not this piece
    abs_part = max(cfg.abs_tol / xf, 0.0)
    if xf < 1:
        abs_part = max(abs_part, 0.5 * cfg.rel_tol * abs(float(total)))
    v, e, n = adaptive_integrate(k_linear, bps, abs_tol=abs_part, rel_tol=cfg.rel_tol * 0.5,
                                 max_subdivisions=cfg.max_subdivisions,
                                 precision=cfg.precision, intervals=cfg.intervals)
    total += v
    err += float(e)
    panels += n
    value = x_n * total
    abs_err = xf * (err + tail) + 2 * A.unit_roundoff * abs(float(value))
    return EvalResult(value, Regime.ORACLE, panels, abs_err,
                      {"tail_bound": xf * tail, "upper_limit": Z,
                       "precision": cfg.precision.value})


def default_config(rel_tol: float = 1e-12, precision: Precision | str = Precision.DOUBLE,
                   **kw) -> QuadratureConfig:
    """A :class:`QuadratureConfig` with a rule order suited to ``precision``."""
    return replace(QuadratureConfig(), rel_tol=rel_tol, precision=Precision(precision), **kw)
