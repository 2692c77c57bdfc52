"""Result records returned by the evaluators."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Regime(str, enum.Enum):
    """Evaluation route that produced a value."""

    CLOSED_FORM = "ClosedForm"
    SMALL_X = "SmallX"
    LARGE_X = "LargeX"
    ORACLE = "Oracle"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EvalResult:
    """One evaluation: value, route, truncation order and error estimate.

    ``value`` has the working type of the route (``float`` in double
    precision, an ``mpmath.mpf`` in extended precision).  The error estimate
    is always a plain ``float``, so it underflows to zero for values below
    about ``1e-300`` (``F`` beyond ``x ~ 690``) even in extended precision.
    """

    value: Any
    regime: Regime
    order_used: int
    abs_error_estimate: float
    details: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.order_used < 0:
            raise ValueError("order_used must be non-negative")

    @property
    def rel_error_estimate(self) -> float:
        v = abs(float(self.value))
        return self.abs_error_estimate / v if v else float("inf")

    def __float__(self) -> float:
        return float(self.value)

    def to_double(self) -> "EvalResult":
        """Round an extended-precision value to ``float``, widening the estimate."""
        if isinstance(self.value, float):
            return self
        v = float(self.value)
        return EvalResult(v, self.regime, self.order_used,
                          self.abs_error_estimate + abs(v) * 2.0**-53, self.details)
