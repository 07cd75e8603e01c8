"""Closed-form constants for the empirical-measure transport-cost bounds.

Every constant here is an explicit formula: the moment factor H, the rate
constants kappa (max norm and Euclidean norm, all three p-vs-d/2 regimes),
the low-moment constant zeta, the covering constant bound K_d, and the
asymptotic lower-bound constant gamma.  All logarithms are natural.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, UnsupportedDimensionError
from .optimize import scan_then_golden

# Relative tolerance for the p == d/2 equality test.
_CRIT_RTOL = 1e-12


class RegimeKind(enum.Enum):
    SUPERCRITICAL = "supercritical"  # p > d/2, q > 2p
    CRITICAL = "critical"            # p = d/2, q > 2p
    SUBCRITICAL = "subcritical"      # p < d/2, q > dp/(d-p)
    LOW_MOMENT = "low_moment"        # p < q < min(2p, dp/(d-p))


class NormKind(enum.Enum):
    MAX = "max"
    EUCLIDEAN = "euclid"


@dataclass(frozen=True)
class ConstantDetail:
    """A constant value plus how it was obtained."""

    value: float
    chosen_r: Optional[float] = None  # Euclidean minimizer over r > 2
    chosen_a: Optional[float] = None  # zeta minimizer over a > 1
    n_dependent: bool = False         # true only for the critical regime

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise DomainError(f"constant must be finite and positive, got {self.value}")


def is_critical(d: int, p: float) -> bool:
    """True when p equals d/2 within relative tolerance 1e-12."""
    half = d / 2.0
    return abs(p - half) <= _CRIT_RTOL * max(abs(p), abs(half))


def eps_p(p: float) -> float:
    """max(1/2, 2^-p)."""
    if p <= 0:
        raise DomainError("p must be positive")
    return max(0.5, 2.0 ** (-p))


def h_factor(x: float, s: float, q: float) -> float:
    """H(x, s, q) = (x(q-s)/s + (1+x)(q/s)^(q/(q-s)))^(s/q) * q/(q-s)."""
    if not (q > s > 0):
        raise DomainError(f"h_factor requires q > s > 0, got s={s}, q={q}")
    if x < 0:
        raise DomainError("h_factor requires x >= 0")
    inner = x * (q - s) / s + (1.0 + x) * (q / s) ** (q / (q - s))
    return inner ** (s / q) * q / (q - s)


def kd_upper(d: int) -> float:
    """Upper bound for the covering constant K_d, valid for d >= 8."""
    if d < 8:
        raise UnsupportedDimensionError(
            f"K_d bound requires d >= 8 (got d={d}); use the max-norm lift instead"
        )
    ld = math.log(d)
    lld = math.log(ld)
    k1 = d * d * (ld + lld + 5.0)
    common = math.log(math.pi * math.sqrt(2.0 * d) / (math.sqrt(math.pi * d) - 2.0))
    denom = (1.0 - 2.0 / ld) * (1.0 - 2.0 / math.sqrt(math.pi * d))
    k2 = (
        7.0 ** (4.0 * math.log(7.0) / 7.0)
        / 4.0
        * math.sqrt(math.pi / 2.0)
        * d ** 1.5
        * (2.0 * (d - 1) * ld + 0.5 * ld + common)
        / (denom * ld * ld)
    )
    k3 = (
        math.sqrt(2.0 * math.pi * d)
        * ((d - 1) * math.log(2.0 * d) + (d - 1) * lld + 0.5 * ld + common)
        / denom
    )
    return max(k1, k2, k3)


def _log_plus(x: float) -> float:
    return max(math.log(x), 0.0) if x > 0 else 0.0


def kappa_max_norm(d: int, p: float, n: Optional[int] = None) -> ConstantDetail:
    """The max-norm rate constant kappa, for any of the three regimes."""
    if d < 1:
        raise DomainError("d must be >= 1")
    if p <= 0:
        raise DomainError("p must be positive")
    half = d / 2.0
    if is_critical(d, p):
        if n is None:
            raise DomainError("critical regime (p = d/2) requires the sample size n")
        value = (
            2.0 ** (p - 1.0) / (p * math.log(2.0))
            * _log_plus((2.0 ** (1.0 - p) - 2.0 ** (1.0 - 2.0 * p)) * math.sqrt(n))
            + 2.0 ** (p - 1.0) / (1.0 - 2.0 ** (-p))
        )
        return ConstantDetail(value=value, n_dependent=True)
    if p > half:
        value = 2.0 ** (half - 1.0) / (1.0 - 2.0 ** (half - p))
    else:
        value = (
            2.0 ** (p - 2.0 * p / d)
            * (1.0 - 2.0 ** (-half)) ** (1.0 - 2.0 * p / d)
            / (1.0 - 2.0 ** (p - half))
        )
    return ConstantDetail(value=value)


# r-search range for the Euclidean minimizations (scan then golden-section).
_R_LO, _R_HI = 2.001, 1000.0


def kappa_euclidean(d: int, p: float, n: Optional[int] = None) -> ConstantDetail:
    """The Euclidean rate constant kappa: minimum over r > 2 of the regime formula."""
    if p <= 0:
        raise DomainError("p must be positive")
    kd = kd_upper(d)  # raises for d < 8
    half = d / 2.0
    if is_critical(d, p):
        if n is None:
            raise DomainError("critical regime (p = d/2) requires the sample size n")

        def f(r: float) -> float:
            return (
                math.sqrt(kd) / 2.0
                * r ** (2.0 * p) / ((r - 2.0) ** p * p * math.log(r))
                * _log_plus(
                    2.0 * (r - 2.0) ** p * (r ** (-2.0 * p) - r ** (-3.0 * p))
                    * math.sqrt(n / kd)
                )
                + math.sqrt(kd) / 2.0 * r ** (3.0 * p) / ((r - 2.0) ** p * (r ** p - 1.0))
            )

        r_star, value = scan_then_golden(f, _R_LO, _R_HI)
        return ConstantDetail(value=value, chosen_r=r_star, n_dependent=True)
    if p > half:

        def f(r: float) -> float:
            return (
                math.sqrt(kd) / 2.0
                * r ** d / ((r - 2.0) ** half * (1.0 - r ** (half - p)))
            )

    else:

        def f(r: float) -> float:
            return (
                (kd / 4.0) ** (p / d)
                * r ** (2.0 * p) * (1.0 - r ** (-half)) ** (1.0 - 2.0 * p / d)
                / ((r - 2.0) ** p * (1.0 - r ** (p - half)))
            )

    r_star, value = scan_then_golden(f, _R_LO, _R_HI)
    return ConstantDetail(value=value, chosen_r=r_star)


def theta_factor(
    d: int,
    p: float,
    q: float,
    norm: NormKind,
    n: Optional[int] = None,
    kappa: Optional[ConstantDetail] = None,
) -> float:
    """The moment factor theta = H(., s, q) matching the regime of (d, p)."""
    if p <= 0:
        raise DomainError("p must be positive")
    critical = is_critical(d, p)
    if kappa is None:
        if norm == NormKind.MAX:
            kappa = kappa_max_norm(d, p, n=n if critical else None)
        else:
            kappa = kappa_euclidean(d, p, n=n if critical else None)
    if p >= d / 2.0 or critical:
        s = 2.0 * p
        x = eps_p(p) / kappa.value
    else:
        s = d * p / (d - p)
        x = 2.0 ** (1.0 - 2.0 * p / d) * eps_p(p) / kappa.value
    if q <= s:
        raise DomainError(f"moment order q={q} must exceed the regime threshold {s}")
    return h_factor(x, s, q)


# a-search range for the zeta minimization.
_A_LO, _A_HI = 1.0001, 1000.0


def zeta_low_moment(d: int, p: float, q: float) -> ConstantDetail:
    """The low-moment constant zeta (max norm only)."""
    if d < 1:
        raise DomainError("d must be >= 1")
    if p <= 0:
        raise DomainError("p must be positive")
    upper = 2.0 * p if p >= d / 2.0 else min(2.0 * p, d * p / (d - p))
    if not (p < q < upper):
        raise DomainError(
            f"low-moment regime requires q in ({p}, {upper}) exclusive, got q={q}"
        )
    bracket = (
        eps_p(p) * 2.0 ** (2.0 * p / q - 1.0)
        + (2.0 ** (d - 1.0) / (2.0 ** (d / 2.0) - 1.0)) ** (2.0 * (q - p) / q)
        * (1.0 - 2.0 ** (-p))
        / (1.0 - 2.0 ** (d - p - d * p / q))
    )

    def f(a: float) -> float:
        return a ** p / (a ** (p - q / 2.0) - 1.0) + a ** p / (1.0 - a ** (p - q))

    a_star, m = scan_then_golden(f, _A_LO, _A_HI)
    return ConstantDetail(value=bracket * m, chosen_a=a_star)


def gamma_lower_bound(d: int, p: float) -> float:
    """Gamma(1 + p/d) / 2^p: the constant of the asymptotic lower bound."""
    if d < 1:
        raise DomainError("d must be >= 1")
    if p <= 0:
        raise DomainError("p must be positive")
    return math.gamma(1.0 + p / d) / 2.0 ** p
