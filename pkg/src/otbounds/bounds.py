"""Regime dispatch, end-to-end bound evaluation, and table generation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from .constants import (
    ConstantDetail,
    NormKind,
    RegimeKind,
    eps_p,
    is_critical,
    kappa_euclidean,
    kappa_max_norm,
    theta_factor,
    zeta_low_moment,
)
from .errors import DomainError, NoBoundError, UnsupportedDimensionError
from .optimize import golden_section


class LiftPolicy(enum.Enum):
    AUTO = "auto"
    FORCE_NATIVE = "native"
    FORCE_LIFT = "sqrtd"


class Route(enum.Enum):
    NATIVE = "native"
    SQRTD_LIFT = "sqrtd_lift"


def classify_regime(d: int, p: float, q: float) -> RegimeKind:
    """Which bound applies to (d, p, q); raises NoBoundError in the gaps."""
    if d < 1 or p <= 0 or q <= 0:
        raise DomainError("require d >= 1, p > 0, q > 0")
    if is_critical(d, p) or p > d / 2:
        if q > 2 * p:
            return RegimeKind.CRITICAL if is_critical(d, p) else RegimeKind.SUPERCRITICAL
        if p < q < 2 * p:
            return RegimeKind.LOW_MOMENT
        if q == 2 * p:
            raise NoBoundError(f"q={q} sits exactly at the excluded threshold 2p")
        raise NoBoundError(f"no bound for q={q} <= p={p}")
    # p < d/2
    threshold = d * p / (d - p)
    if q > threshold:
        return RegimeKind.SUBCRITICAL
    if p < q < threshold:
        return RegimeKind.LOW_MOMENT
    if q == threshold:
        raise NoBoundError(
            f"q={q} sits exactly at the excluded threshold dp/(d-p)={threshold}"
        )
    raise NoBoundError(f"no bound for q={q} <= p={p}")


def rate_exponent(regime: RegimeKind, d: int, p: float, q: float) -> float:
    if regime in (RegimeKind.SUPERCRITICAL, RegimeKind.CRITICAL):
        return 0.5
    if regime == RegimeKind.SUBCRITICAL:
        return p / d
    return (q - p) / q


@dataclass(frozen=True)
class BoundQuery:
    d: int
    p: float
    q: float
    moment: float
    norm: NormKind
    n: int
    refine_p: bool = False
    lift_policy: LiftPolicy = LiftPolicy.AUTO

    def __post_init__(self):
        if self.moment < 0:
            raise DomainError("moment must be nonnegative")
        if self.n < 1:
            raise DomainError("sample size n must be >= 1")


@dataclass
class BoundReport:
    value: float
    regime: RegimeKind
    rate_exponent: float
    kappa: ConstantDetail
    theta: float
    chosen_p_prime: Optional[float]
    route: Route
    formula_text: str


def _kappa_theta(
    d: int, p: float, q: float, norm: NormKind, n: int, route: Route
) -> Tuple[ConstantDetail, float]:
    """(kappa, theta) for one route; the lifted route folds d^{p/2} into kappa."""
    crit = is_critical(d, p)
    n_arg = n if crit else None
    if norm == NormKind.MAX or route == Route.SQRTD_LIFT:
        base = kappa_max_norm(d, p, n=n_arg)
        theta = theta_factor(d, p, q, NormKind.MAX, n=n_arg, kappa=base)
        if route == Route.SQRTD_LIFT:
            base = ConstantDetail(
                value=d ** (p / 2.0) * base.value, n_dependent=base.n_dependent
            )
        return base, theta
    base = kappa_euclidean(d, p, n=n_arg)
    theta = theta_factor(d, p, q, NormKind.EUCLIDEAN, n=n_arg, kappa=base)
    return base, theta


def _refined_product(
    d: int, p: float, q: float, norm: NormKind, n: int, route: Route
) -> Tuple[float, float]:
    """Minimize [kappa_{d,p'} theta_{d,p',q}]^{p/p'} over p' in [p, d/2).

    Only valid in the subcritical regime.  Returns (product, chosen p').
    """

    def g(pp: float) -> float:
        kap, th = _kappa_theta(d, pp, q, norm, n, route)
        return (kap.value * th) ** (p / pp)

    hi = min(d / 2.0, q * d / (q + d)) * (1.0 - 1e-9)
    if hi <= p:
        return g(p), p
    grid = [p + (hi - p) * i / 399 for i in range(400)]
    vals = [g(x) for x in grid]
    i_best = min(range(400), key=lambda i: vals[i])
    lo_b = grid[max(i_best - 1, 0)]
    hi_b = grid[min(i_best + 1, 399)]
    x_star, v_star = golden_section(g, lo_b, hi_b, rel_tol=1e-9)
    if vals[i_best] < v_star:
        return vals[i_best], grid[i_best]
    return v_star, x_star


def evaluate_bound(query: BoundQuery) -> BoundReport:
    """Assemble the full bound for a query, choosing the best admissible route."""
    d, p, q, n = query.d, query.p, query.q, query.n
    regime = classify_regime(d, p, q)
    rate = rate_exponent(regime, d, p, q)
    moment_factor = query.moment ** (p / q) if query.moment > 0 else 0.0

    if regime == RegimeKind.LOW_MOMENT:
        if query.norm != NormKind.MAX:
            raise NoBoundError("the low-moment bound is available for the max norm only")
        zeta = zeta_low_moment(d, p, q)
        value = 2.0 ** p * moment_factor * zeta.value * n ** (-rate)
        text = (
            f"2^{p:g} * M^{{{p:g}/{q:g}}} * zeta({zeta.value:.6g}, a*={zeta.chosen_a:.6g})"
            f" * n^-{rate:.6g}"
        )
        return BoundReport(
            value=value,
            regime=regime,
            rate_exponent=rate,
            kappa=zeta,
            theta=1.0,
            chosen_p_prime=None,
            route=Route.NATIVE,
            formula_text=text,
        )

    if query.norm == NormKind.MAX:
        routes = [Route.NATIVE]
    elif query.lift_policy == LiftPolicy.FORCE_NATIVE:
        routes = [Route.NATIVE]
    elif query.lift_policy == LiftPolicy.FORCE_LIFT:
        routes = [Route.SQRTD_LIFT]
    else:
        routes = [Route.SQRTD_LIFT] + ([Route.NATIVE] if d >= 8 else [])
        # Native Euclidean constants need the covering bound, hence d >= 8.

    best = None
    for route in routes:
        if query.norm == NormKind.EUCLIDEAN and route == Route.NATIVE and d < 8:
            raise UnsupportedDimensionError(
                "native Euclidean constants require d >= 8; use the sqrt(d) lift"
            )
        kap, th = _kappa_theta(d, p, q, query.norm, n, route)
        product = kap.value * th
        p_prime = None
        if query.refine_p and regime == RegimeKind.SUBCRITICAL:
            product, p_prime = _refined_product(d, p, q, query.norm, n, route)
        value = 2.0 ** p * product * moment_factor * n ** (-rate)
        if best is None or value < best[0]:
            best = (value, route, kap, th, p_prime)

    value, route, kap, th, p_prime = best
    route_txt = "sqrt(d)-lifted max-norm" if route == Route.SQRTD_LIFT else "native"
    text = (
        f"2^{p:g} * kappa({kap.value:.6g}) * theta({th:.6g}) * M^{{{p:g}/{q:g}}}"
        f" * n^-{rate:.6g} [{route_txt}"
        + (f", refined p'={p_prime:.6g}" if p_prime is not None else "")
        + "]"
    )
    return BoundReport(
        value=value,
        regime=regime,
        rate_exponent=rate,
        kappa=kap,
        theta=th,
        chosen_p_prime=p_prime,
        route=route,
        formula_text=text,
    )


def min_q_for_theta(
    d: int,
    p: float,
    c: float,
    norm: NormKind,
    n: Optional[int] = None,
    root: bool = False,
) -> float:
    """Smallest q on the 0.1-grid with theta (or theta^(1/p) when root) <= c.

    Critical (d, p) pairs are evaluated at N=100 unless n is given.
    """
    if c <= 1.0:
        raise DomainError("target c must exceed 1 (theta > 1 always)")
    crit = is_critical(d, p)
    if crit and n is None:
        n = 100
    regime_threshold = 2.0 * p if p >= d / 2.0 else d * p / (d - p)
    n_arg = n if crit else None
    if norm == NormKind.MAX:
        kappa = kappa_max_norm(d, p, n=n_arg)
    else:
        kappa = kappa_euclidean(d, p, n=n_arg)
    k = int(math.floor(regime_threshold * 10.0 + 1e-9)) + 1
    for _ in range(1_000_000):
        q = k / 10.0
        if q > regime_threshold:
            theta = theta_factor(d, p, q, norm, n=n_arg, kappa=kappa)
            if root:
                theta = theta ** (1.0 / p)
            if theta <= c:
                return q
        k += 1
    raise RuntimeError("q search did not converge")  # pragma: no cover


# --------------------------------------------------------------------------
# Table generation
# --------------------------------------------------------------------------

_DIMS_MAX = [1, 2, 3, 4, 5, 6, 7, 8, 9, 100, 500]
_DIMS_EUC = [8, 15, 20, 25, 30, 35, 50, 75, 100, 500]
_C_TARGETS = [4.0, 2.0, 1.25]


def ceil2(x: float) -> float:
    """Round up at 2 decimals (printed upper bounds must stay valid)."""
    return math.ceil(x * 100.0 - 1e-9) / 100.0


def ceil_grid(x: float, step: float = 0.1) -> float:
    return math.ceil(x / step - 1e-9) * step


@dataclass
class TableCell:
    row_label: str
    col_label: str
    value: Optional[float]
    bold: bool = False
    display_string: str = ""

    def as_dict(self):
        out = {
            "row_label": self.row_label,
            "col_label": self.col_label,
            "value": self.value,
            "display_string": self.display_string,
        }
        if self.bold:
            out["bold"] = True
        return out


@dataclass
class Table:
    table_id: int
    title: str
    cells: List[TableCell] = field(default_factory=list)

    def cell(self, row_label: str, col_label: str) -> TableCell:
        for c in self.cells:
            if c.row_label == row_label and c.col_label == col_label:
                return c
        raise KeyError((row_label, col_label))

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "table_id": self.table_id,
                "title": self.title,
                "cells": [c.as_dict() for c in self.cells],
            }
        )

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["row_label", "col_label", "value", "bold", "display_string"])
        for c in self.cells:
            writer.writerow(
                [c.row_label, c.col_label, c.value, int(c.bold), c.display_string]
            )
        return buf.getvalue()

    def to_text(self) -> str:
        rows = []
        cols = []
        for c in self.cells:
            if c.row_label not in rows:
                rows.append(c.row_label)
            if c.col_label not in cols:
                cols.append(c.col_label)
        width = {
            col: max(
                len(col),
                max(
                    len(self._show(c))
                    for c in self.cells
                    if c.col_label == col
                ),
            )
            for col in cols
        }
        rw = max(len(r) for r in rows)
        lines = [self.title]
        lines.append(
            " " * rw + "  " + "  ".join(col.rjust(width[col]) for col in cols)
        )
        for r in rows:
            entries = []
            for col in cols:
                try:
                    c = self.cell(r, col)
                    entries.append(self._show(c).rjust(width[col]))
                except KeyError:
                    entries.append(" " * width[col])
            lines.append(r.ljust(rw) + "  " + "  ".join(entries))
        return "\n".join(lines) + "\n"

    @staticmethod
    def _show(c: TableCell) -> str:
        if c.display_string:
            return c.display_string
        s = f"{c.value:g}" if c.value is not None else ""
        return f"*{s}*" if c.bold else s


def _critical_pair(p: float) -> Tuple[float, float, int]:
    """(slope, intercept, N-floor) of kappa_{d,p,N} = slope*ln N + intercept."""
    coeff = 2.0 ** (p - 1.0) / (p * math.log(2.0))
    g = 2.0 ** (1.0 - p) - 2.0 ** (1.0 - 2.0 * p)
    slope = coeff / 2.0
    intercept = coeff * math.log(g) + 2.0 ** (p - 1.0) / (1.0 - 2.0 ** (-p))
    n_floor = math.ceil(g ** (-2.0) - 1e-9)
    return slope, intercept, n_floor


def generate_table(table_id: int) -> Table:
    """Recompute one of the paper-style numeric tables (ids 1..8)."""
    if table_id in (1, 2):
        p = float(table_id)
        table = Table(
            table_id,
            f"Bound numerator for E[T_{p:g}] (max norm, measures in B(0,1/2))"
            + (" -- square-rooted" if p == 2 else ""),
        )
        for d in _DIMS_MAX:
            col = f"d={d}"
            if is_critical(d, p):
                slope, intercept, n_floor = _critical_pair(p)
                s, b = ceil2(slope), ceil2(intercept)
                inner = f"{s:g} ln N + {b:g}"
                disp = (
                    f"sqrt({inner}) (N >= {n_floor})"
                    if p == 2
                    else f"{inner} (N >= {n_floor})"
                )
                table.cells.append(
                    TableCell("log_slope", col, s, display_string=disp)
                )
                table.cells.append(
                    TableCell("log_intercept", col, b, display_string=disp)
                )
            else:
                kappa = kappa_max_norm(d, p).value
                val = ceil2(kappa if p == 1 else math.sqrt(kappa))
                table.cells.append(TableCell("numerator", col, val))
        return table

    if table_id in (3, 4):
        p = float(table_id - 2)
        table = Table(
            table_id,
            f"Bound numerator for E[T_{p:g}] (Euclidean norm): native vs sqrt(d) lift"
            + (" -- square-rooted" if p == 2 else ""),
        )
        for d in _DIMS_EUC:
            col = f"d={d}"
            native = kappa_euclidean(d, p).value
            lifted = d ** (p / 2.0) * kappa_max_norm(d, p).value
            if p == 2:
                native, lifted = math.sqrt(native), math.sqrt(lifted)
            nv, lv = ceil2(native), ceil2(lifted)
            table.cells.append(TableCell("native", col, nv, bold=native <= lifted))
            table.cells.append(TableCell("lifted", col, lv, bold=lifted < native))
        return table

    if table_id in (5, 6, 7, 8):
        p = 1.0 if table_id in (5, 7) else 2.0
        norm = NormKind.MAX if table_id in (5, 6) else NormKind.EUCLIDEAN
        dims = _DIMS_MAX if norm == NormKind.MAX else _DIMS_EUC
        root = p == 2
        table = Table(
            table_id,
            f"Minimum q with {'sqrt(theta)' if root else 'theta'} <= c "
            f"({'max' if norm == NormKind.MAX else 'Euclidean'} norm, p={p:g}; "
            "critical cells at N=100)",
        )
        for c_target in _C_TARGETS:
            row = f"c={c_target:g}"
            for d in dims:
                q = min_q_for_theta(d, p, c_target, norm, root=root)
                table.cells.append(TableCell(row, f"d={d}", round(q, 10)))
        return table

    raise DomainError(f"unknown table id {table_id}; expected 1..8")
