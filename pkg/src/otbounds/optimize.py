"""One-dimensional minimization: coarse scan followed by golden-section."""

from __future__ import annotations

import math
from typing import Callable, Tuple

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(
    f: Callable[[float], float], lo: float, hi: float, rel_tol: float = 1e-10
) -> Tuple[float, float]:
    """Minimize ``f`` on [lo, hi] by golden-section search.

    Returns (argmin, min).  Converges to the stated relative tolerance on the
    argument for unimodal ``f``; for non-unimodal ``f`` it still returns a
    point no worse than the better of the probes it has seen.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rel_tol * max(abs(a), abs(b), 1e-30):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = c if fc <= fd else d
    return x, min(fc, fd)


def scan_then_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n_scan: int = 200,
    log_spaced: bool = True,
    rel_tol: float = 1e-10,
) -> Tuple[float, float]:
    """Global scan on ``n_scan`` points, then golden-section on the best bracket.

    The scan guards against local minima; unimodality of ``f`` is not assumed.
    """
    if log_spaced:
        la, lb = math.log(lo), math.log(hi)
        grid = [math.exp(la + (lb - la) * i / (n_scan - 1)) for i in range(n_scan)]
    else:
        grid = [lo + (hi - lo) * i / (n_scan - 1) for i in range(n_scan)]
    vals = [f(x) for x in grid]
    i_best = min(range(n_scan), key=lambda i: vals[i])
    a = grid[max(i_best - 1, 0)]
    b = grid[min(i_best + 1, n_scan - 1)]
    x, v = golden_section(f, a, b, rel_tol)
    if vals[i_best] < v:
        return grid[i_best], vals[i_best]
    return x, v
