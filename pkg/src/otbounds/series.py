"""The series Psi_{r,alpha,beta}(x) = sum_l r^(-alpha l) min(1, x r^(beta l))
and its closed-form majorants."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class PsiParams:
    r: float
    alpha: float
    beta: float
    x: float

    def __post_init__(self):
        if not self.r > 1:
            raise DomainError(f"r must be > 1, got {self.r}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not self.beta >= self.alpha:
            raise DomainError(f"beta must be >= alpha, got {self.beta} < {self.alpha}")
        if not self.x >= 0:
            raise DomainError(f"x must be >= 0, got {self.x}")


def psi_exact(params: PsiParams, tol: float = 1e-12) -> float:
    """Partial sum with a certified geometric tail bound.

    Truncates at level L once the exact tail bound r^(-alpha(L+1)) / (1 - r^(-alpha))
    drops below tol times the accumulated sum.
    """
    r, alpha, beta, x = params.r, params.alpha, params.beta, params.x
    if x == 0.0:
        return 0.0
    ra = r ** (-alpha)
    tail_factor = 1.0 / (1.0 - ra)
    total = 0.0
    term_geo = 1.0  # r^(-alpha l)
    grow = r ** beta
    xg = x  # x r^(beta l)
    while True:
        total += term_geo * min(1.0, xg)
        term_geo *= ra
        xg *= grow
        tail = term_geo * tail_factor
        if tail <= tol * total or tail < 1e-300:
            return total


def psi_bound(params: PsiParams) -> float:
    """Closed-form majorant of psi_exact.

    beta = alpha: (log_+(1/x)/(beta ln r) + 1/(1 - r^-alpha)) * x
    beta > alpha: (1/(r^(beta-alpha) - 1) + 1/(1 - r^-alpha)) * x^(alpha/beta)
    """
    r, alpha, beta, x = params.r, params.alpha, params.beta, params.x
    if x == 0.0:
        return 0.0
    geo = 1.0 / (1.0 - r ** (-alpha))
    if beta == alpha:
        log_plus = max(math.log(1.0 / x), 0.0)
        return (log_plus / (beta * math.log(r)) + geo) * x
    return (1.0 / (r ** (beta - alpha) - 1.0) + geo) * x ** (alpha / beta)
