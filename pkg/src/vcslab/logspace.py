"""Signed log-domain scalars.

Norm series terms and generalized-factorial targets overflow double
precision quickly (Gamma arguments run into the hundreds), so every
quantity that can get large is carried as (log |x|, sign).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LogValue:
    """A real number stored as log of its absolute value plus a sign.

    sign == 0 encodes exactly zero; log_abs is -inf in that case.
    """

    log_abs: float
    sign: int = 1

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(float("-inf"), 0)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0.0, 1)

    @classmethod
    def from_value(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls.zero()
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @classmethod
    def exp(cls, log_abs: float, sign: int = 1) -> "LogValue":
        if sign == 0 or log_abs == float("-inf"):
            return cls.zero()
        return cls(log_abs, sign)

    @property
    def value(self) -> float:
        # may overflow to +-inf for huge log_abs; callers wanting safety stay in logs
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_abs + other.log_abs, self.sign * other.sign)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by exact LogValue zero")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_abs - other.log_abs, self.sign * other.sign)

    def powi(self, k: int) -> "LogValue":
        if self.sign == 0:
            return LogValue.one() if k == 0 else LogValue.zero()
        sign = 1 if (self.sign > 0 or k % 2 == 0) else -1
        return LogValue(self.log_abs * k, sign)

    def rel_diff(self, other: "LogValue") -> float:
        """Relative difference |self - other| / |other| without leaving log scale."""
        if other.sign == 0:
            return 0.0 if self.sign == 0 else float("inf")
        if self.sign == 0:
            return 1.0
        if self.sign != other.sign:
            return float("inf")
        return abs(math.expm1(self.log_abs - other.log_abs))

