"""Synchrotron function F(x) and modified Bessel functions K_nu.

Every evaluator returns an :class:`EvalResult` carrying the value, the route
that produced it and an absolute error estimate.
"""

from .besselk import (asymptotic_coefficients, bessel_i, bessel_k, bessel_k_asymptotic,
                      bessel_k_convergent)
from .errors import (CancellationLoss, DomainError, ImmediateDivergence, MaxTermsExceeded,
                     OrderIsInteger, PoleError, SyncFnError, ToleranceNotMet)
from .kernels import (HypParams, SeriesOutcome, StopReason, gamma_real, hyp_convergent,
                      hyp_divergent_optimal, pochhammer, rgamma)
from .oracle import (ExponentialBound, FixedUpper, QuadratureConfig, f_quadrature,
                     k_nu_quadrature)
from .precision import Precision
from .results import EvalResult, Regime
from .synchrotron import (NU_SYNCHROTRON, DispatchConfig, FixedN, LargeXTruncation, Optimal,
                          SmallXTruncation, f_closed, f_eval, f_large_x, f_small_x,
                          large_x_coefficients, s1_term, s2_term, s3_constant, s4_term,
                          s5_term, small_x_coefficients)

__version__ = "0.1.0"

__all__ = [
    "CancellationLoss", "DispatchConfig", "DomainError", "EvalResult", "ExponentialBound",
    "FixedN", "FixedUpper", "HypParams", "ImmediateDivergence", "LargeXTruncation",
    "MaxTermsExceeded", "NU_SYNCHROTRON", "Optimal", "OrderIsInteger", "PoleError",
    "Precision", "QuadratureConfig", "Regime", "SeriesOutcome", "SmallXTruncation",
    "StopReason", "SyncFnError", "ToleranceNotMet", "asymptotic_coefficients", "bessel_i",
    "bessel_k", "bessel_k_asymptotic", "bessel_k_convergent", "f_closed", "f_eval",
    "f_large_x", "f_quadrature", "f_small_x", "gamma_real", "hyp_convergent",
    "hyp_divergent_optimal", "k_nu_quadrature", "large_x_coefficients", "pochhammer",
    "rgamma", "s1_term", "s2_term", "s3_constant", "s4_term", "s5_term",
    "small_x_coefficients",
]
