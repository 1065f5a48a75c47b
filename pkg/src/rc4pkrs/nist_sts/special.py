"""Special functions used to turn test statistics into P-values."""

from __future__ import annotations

import math

from scipy import special as _sp


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x)."""
    if a <= 0:
        raise ValueError("igamc needs a > 0")
    if x <= 0:
        return 1.0
    return float(_sp.gammaincc(a, x))


def erfc(x: float) -> float:
    return float(_sp.erfc(x))


def normal_cdf(x: float) -> float:
    return 0.5 * erfc(-x / math.sqrt(2.0))
