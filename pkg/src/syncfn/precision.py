"""Working-precision arithmetic.

Two modes are supported:

``Precision.DOUBLE``
    IEEE-754 binary64 floats with :mod:`math` elementary functions.
``Precision.EXTENDED``
    A private :class:`mpmath.MPContext` with a 106-bit significand, the same
    width as a double-double pair (about 31 significant digits).

Every series and quadrature routine in the package is written once against
the small :class:`Arith` interface below and is instantiated for either mode.
Contexts are created at import time and never mutated afterwards, so all
routines stay safe to call from several threads.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from numbers import Real

import mpmath
import numpy as np

EXTENDED_BITS = 106


class Precision(str, enum.Enum):
    DOUBLE = "double"
    EXTENDED = "extended"


def _sinpi_double(z: float) -> float:
    # sin(pi*z) with exact argument reduction, so sin(pi*n) == 0 for integer n
    r = z - 2.0 * round(z / 2.0)  # exact, r in [-1, 1]
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    if r == 0.0:
        return 0.0
    return math.sin(math.pi * r)


class Arith:
    """Elementary operations for one working precision."""

    precision: Precision
    unit_roundoff: float
    digits: int  # significant digits that round-trip the working type

    def num(self, v):
        raise NotImplementedError

    def to_float(self, v) -> float:
        return float(v)

    def fmt(self, v) -> str:
        raise NotImplementedError


class _DoubleArith(Arith):
    precision = Precision.DOUBLE
    unit_roundoff = 2.0**-53
    digits = 17
    tiny = 1e-300

    pi = math.pi
    exp = staticmethod(math.exp)
    log = staticmethod(math.log)
    sqrt = staticmethod(math.sqrt)
    sin = staticmethod(math.sin)
    cos = staticmethod(math.cos)
    sinpi = staticmethod(_sinpi_double)
    gamma_positive = staticmethod(math.gamma)
    lgamma_positive = staticmethod(math.lgamma)

    def num(self, v):
        return float(v)

    def power(self, a, b):
        return float(a) ** float(b)

    def cbrt(self, a):
        return math.copysign(abs(a) ** (1.0 / 3.0), a)

    def isint(self, v) -> bool:
        return float(v).is_integer()

    def fmt(self, v) -> str:
        return repr(float(v))

    # array helpers used by the quadrature oracle
    def array(self, values):
        return np.asarray(values, dtype=float)

    def zeros(self, shape):
        return np.zeros(shape, dtype=float)

    vexp = staticmethod(np.exp)
    vlog = staticmethod(np.log)
    vsqrt = staticmethod(np.sqrt)

    def vpower(self, a, b):
        return np.power(a, b)


class _ExtendedArith(Arith):
    precision = Precision.EXTENDED
    unit_roundoff = 2.0**-EXTENDED_BITS
    digits = 33

    def __init__(self):
        ctx = mpmath.MPContext()
        ctx.prec = EXTENDED_BITS
        self.ctx = ctx
        self.pi = +ctx.pi
        self.tiny = ctx.mpf(2) ** -3000
        self.exp = ctx.exp
        self.log = ctx.log
        self.sqrt = ctx.sqrt
        self.sin = ctx.sin
        self.cos = ctx.cos
        self.sinpi = ctx.sinpi
        self.gamma_positive = ctx.gamma
        self.lgamma_positive = ctx.loggamma
        self.cbrt = ctx.cbrt
        self.vexp = np.frompyfunc(ctx.exp, 1, 1)
        self.vlog = np.frompyfunc(ctx.log, 1, 1)
        self.vsqrt = np.frompyfunc(ctx.sqrt, 1, 1)
        self._vpow = np.frompyfunc(ctx.power, 2, 1)

    def num(self, v):
        if isinstance(v, Fraction):
            return self.ctx.mpf(v.numerator) / v.denominator
        if isinstance(v, str):
            return self.num(Fraction(v)) if "/" in v else self.ctx.mpf(v)
        return self.ctx.convert(v)

    def power(self, a, b):
        return self.ctx.power(a, b)

    def isint(self, v) -> bool:
        return self.ctx.isint(v)

    def fmt(self, v) -> str:
        """Shortest decimal string that reads back to the same value."""
        v = self.ctx.mpf(v)
        for d in range(17, self.digits + 1):
            text = mpmath.libmp.to_str(v._mpf_, d, min_fixed=-4, max_fixed=6)
            if self.ctx.mpf(text) == v:
                return text
        return mpmath.libmp.to_str(v._mpf_, self.digits, min_fixed=-4, max_fixed=6)

    def array(self, values):
        out = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            out[i] = self.num(v)
        return out

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(self.ctx.mpf(0))
        return out

    def vpower(self, a, b):
        return self._vpow(a, b)


DOUBLE = _DoubleArith()
EXTENDED = _ExtendedArith()


def arith(precision: Precision | str = Precision.DOUBLE) -> Arith:
    """Return the arithmetic backend for ``precision``."""
    return EXTENDED if Precision(precision) is Precision.EXTENDED else DOUBLE


def exact(v) -> Fraction | float:
    """Best exact representation of a user-supplied real parameter.

    Strings such as ``"5/3"`` become :class:`~fractions.Fraction` so that the
    extended mode sees the true rational value rather than its double rounding.
    """
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, Real):
        return float(v)
    return v


class CompensatedSum:
    """Running Kahan-Babuska (Neumaier) sum that works for any number type."""

    __slots__ = ("_s", "_c")

    def __init__(self, zero=0.0):
        self._s = zero
        self._c = zero * 0

    def add(self, x) -> None:
        s = self._s
        t = s + x
        if abs(s) >= abs(x):
            self._c += (s - t) + x
        else:
            self._c += (x - t) + s
        self._s = t

    @property
    def value(self):
        return self._s + self._c
