"""Exact discrete optimal transport: the ground truth for all verification.

The transportation LP is solved as an integer min-cost flow (weights are
rationalized to a common denominator, so termination and feasibility are
exact) and optimality is certified from the dual potentials by a
reduced-cost / complementary-slackness check.  A sorted-quantile fast path
covers d=1 with convex cost (p >= 1), and an exhaustive vertex enumeration
of the transportation polytope serves as an independent test oracle for
tiny instances.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from ._simplex import OPTIMAL, solve_transportation
from .constants import NormKind
from .errors import CapacityError, DomainError
from .measures import DiscreteMeasure, TransportPlan, cost_matrix

_SIZE_CAP = 10_000_000
_CERT_RTOL = 1e-9
_FALLBACK_DENOM = 2 ** 40
_MAX_DENOM = 10 ** 12
_LCM_CAP = 10 ** 15


def _check_normalized(mu: DiscreteMeasure):
    s = float(mu.weights.sum())
    if abs(s - 1.0) > 1e-9:
        raise DomainError(f"measure weights must sum to 1 (got {s:.12g})")
    if np.any(mu.weights < 0):
        raise DomainError("measure weights must be nonnegative")


def integerize_weights(w_mu: np.ndarray, w_nu: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """Scale both weight vectors to int64 over a common denominator L.

    Rational weights (denominator <= 1e12 after rounding) are represented
    exactly via their LCM; if the LCM overflows the practical range, weights
    are quantized to a fixed power-of-two denominator and the largest atom
    absorbs the rounding gap so both sides sum to exactly L.
    """
    fracs = [Fraction(float(v)).limit_denominator(_MAX_DENOM) for v in w_mu] + [
        Fraction(float(v)).limit_denominator(_MAX_DENOM) for v in w_nu
    ]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        if lcm > _LCM_CAP:
            break
    if lcm <= _LCM_CAP:
        s = np.array([int(f * lcm) for f in fracs[: len(w_mu)]], dtype=np.int64)
        t = np.array([int(f * lcm) for f in fracs[len(w_mu) :]], dtype=np.int64)
        if s.sum() == lcm and t.sum() == lcm:
            return s, t, lcm

    L = _FALLBACK_DENOM
    s = np.round(w_mu * L).astype(np.int64)
    t = np.round(w_nu * L).astype(np.int64)
    s[np.argmax(s)] += L - s.sum()
    t[np.argmax(t)] += L - t.sum()
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("weight quantization failed (negative integer mass)")
    return s, t, L


def solve_cost_matrix(
    cost: np.ndarray, w_mu: np.ndarray, w_nu: np.ndarray
) -> Tuple[np.ndarray, float]:
    """Solve the transportation problem for a dense cost matrix.

    Returns (coupling matrix summing to 1, optimal cost).  Raises if the
    solver fails to terminate or the optimality certificate does not hold.
    """
    s, t, L = integerize_weights(w_mu, w_nu)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    flow, pot, status = solve_transportation(cost, s, t)
    if status != OPTIMAL:
        raise RuntimeError(f"network simplex did not reach optimality (status {status})")
    m = cost.shape[0]
    scale = _CERT_RTOL * (1.0 + float(cost.max(initial=0.0)))
    reduced = cost - pot[:m, None] + pot[m:][None, :]
    if reduced.min(initial=0.0) < -scale:
        raise RuntimeError(
            f"optimality certificate failed: negative reduced cost {reduced.min():.3e}"
        )
    active = flow > 0
    if active.any() and np.abs(reduced[active]).max() > scale:
        raise RuntimeError("complementary slackness violated on an active arc")
    coupling = flow / float(L)
    return coupling, float((coupling * cost).sum())


def exact_transport_cost(
    mu: DiscreteMeasure, nu: DiscreteMeasure, p: float, norm: NormKind
) -> Tuple[float, TransportPlan]:
    """Exact T_p between two discrete measures, with an optimal vertex plan."""
    if mu.dim != nu.dim:
        raise DomainError("measures must share a dimension")
    _check_normalized(mu)
    _check_normalized(nu)
    if mu.size * nu.size > _SIZE_CAP:
        raise CapacityError(
            f"support product {mu.size}x{nu.size} exceeds the solver cap"
        )
    cost = cost_matrix(mu.points, nu.points, p, norm)
    coupling, total = solve_cost_matrix(cost, mu.weights, nu.weights)
    src, dst = np.nonzero(coupling)
    plan = TransportPlan(
        src=src.astype(np.int64),
        dst=dst.astype(np.int64),
        mass=coupling[src, dst],
        cost_p=total,
        p=p,
    )
    return total, plan


def exact_transport_cost_1d(mu: DiscreteMeasure, nu: DiscreteMeasure, p: float) -> float:
    """T_p in d=1 via sorted quantile matching (optimal for convex cost, p >= 1)."""
    if mu.dim != 1 or nu.dim != 1:
        raise DomainError("the 1-d fast path requires dimension 1")
    if p < 1:
        cost, _ = exact_transport_cost(mu, nu, p, NormKind.MAX)
        return cost
    _check_normalized(mu)
    _check_normalized(nu)
    ix = np.argsort(mu.points[:, 0], kind="stable")
    iy = np.argsort(nu.points[:, 0], kind="stable")
    x = mu.points[ix, 0]
    y = nu.points[iy, 0]
    wx = mu.weights[ix]
    wy = nu.weights[iy]
    i = j = 0
    a = wx[0]
    b = wy[0]
    total = 0.0
    while True:
        step = min(a, b)
        total += step * abs(x[i] - y[j]) ** p
        a -= step
        b -= step
        if a <= 1e-18:
            i += 1
            if i == len(x):
                break
            a = wx[i]
        if b <= 1e-18:
            j += 1
            if j == len(y):
                break
            b = wy[j]
    return total


# --- exhaustive vertex enumeration (test oracle for supports of size <= 4) ---

_TREE_CACHE: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray]] = {}


def _spanning_tree_bases(m: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """All basic (spanning-tree) edge subsets of K_{m,n} and their solve matrices.

    Vertices of the transportation polytope are exactly the feasible basic
    solutions; each spanning tree determines flows uniquely from the
    marginals.  Returns (subsets (T, m+n-1), inverses (T, m+n-1, m+n-1)).
    """
    key = (m, n)
    if key in _TREE_CACHE:
        return _TREE_CACHE[key]
    n_eq = m + n - 1  # last column equation is redundant
    n_edges = m * n
    incidence = np.zeros((n_eq, n_edges))
    for i in range(m):
        for j in range(n):
            e = i * n + j
            incidence[i, e] = 1.0
            if j < n - 1:
                incidence[m + j, e] = 1.0
    subsets = np.array(
        list(itertools.combinations(range(n_edges), n_eq)), dtype=np.int64
    )
    mats = incidence[:, subsets].transpose(1, 0, 2)  # (C, n_eq, n_eq)
    dets = np.abs(np.linalg.det(mats))
    trees = dets > 0.5  # incidence dets are 0 or +-1
    subsets = subsets[trees]
    inverses = np.linalg.inv(mats[trees])
    _TREE_CACHE[key] = (subsets, inverses)
    return subsets, inverses


def enumerate_transport_cost(
    mu: DiscreteMeasure, nu: DiscreteMeasure, p: float, norm: NormKind
) -> float:
    """Exact T_p by scanning every vertex of the transportation polytope."""
    m, n = mu.size, nu.size
    if m > 4 or n > 4:
        raise CapacityError("vertex enumeration is limited to supports of size <= 4")
    _check_normalized(mu)
    _check_normalized(nu)
    cost = cost_matrix(mu.points, nu.points, p, norm).ravel()
    subsets, inverses = _spanning_tree_bases(m, n)
    b = np.concatenate([mu.weights, nu.weights[:-1]])
    flows = inverses @ b  # (T, m+n-1)
    feasible = (flows >= -1e-9).all(axis=1)
    if not feasible.any():
        raise RuntimeError("no feasible vertex found (marginals inconsistent?)")
    costs = (np.clip(flows, 0.0, None) * cost[subsets]).sum(axis=1)
    return float(costs[feasible].min())
