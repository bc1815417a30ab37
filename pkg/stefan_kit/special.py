"""Error-function family and the auxiliary ratios F1, F2.

All functions take and return real scalars. F1 goes through the scaled
complementary error function so that it stays finite where exp(-x**2) and
erfc(x) both underflow (x > ~26).
"""

import math

from scipy import special as sc

from .errors import DomainError, PoleError


def _check_finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} requires a finite argument, got {x!r}")
    return x


def erf(x: float) -> float:
    """Error function, erf(x) = 2/sqrt(pi) * integral_0^x exp(-u**2) du."""
    return float(sc.erf(_check_finite(x, "erf")))


def erfc(x: float) -> float:
    """Complementary error function 1 - erf(x), accurate in the tail."""
    return float(sc.erfc(_check_finite(x, "erfc")))


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x**2) * erfc(x)."""
    return float(sc.erfcx(_check_finite(x, "erfcx")))


def F1(x: float) -> float:
    """exp(-x**2) / erfc(x), computed as 1 / erfcx(x)."""
    return 1.0 / erfcx(_check_finite(x, "F1"))


def F2(x: float) -> float:
    """exp(-x**2) / erf(x) for x > 0.

    Raises:
        PoleError: at x = 0, where F2 diverges like sqrt(pi) / (2x)
    """
    x = _check_finite(x, "F2")
    if x == 0.0:
        raise PoleError("F2 has a pole at x = 0")
    return math.exp(-x * x) / erf(x)


def erfc_ratio(eta: float, xi: float) -> float:
    """erfc(eta) / erfc(xi) for eta, xi >= 0 without underflow.

    Uses erfc(z) = exp(-z**2) * erfcx(z), so the ratio becomes
    exp(-(eta - xi)(eta + xi)) * erfcx(eta) / erfcx(xi).
    """
    eta = _check_finite(eta, "erfc_ratio")
    xi = _check_finite(xi, "erfc_ratio")
    return math.exp(-(eta - xi) * (eta + xi)) * erfcx(eta) / erfcx(xi)
