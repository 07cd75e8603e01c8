"""Constructive hierarchical couplings.

Nested partitions of the unit ball restricted to a finite support (dyadic
cells for the max norm, greedy nested covers for the Euclidean norm), the
recursive multiscale coupling they induce, and the annulus decomposition
that extends it to arbitrary supports.  Every coupling is materialized as a
sparse transport plan over support points together with a certified upper
bound on its cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .constants import NormKind, eps_p
from .errors import DomainError
from .measures import DiscreteMeasure, TransportPlan, norms_of


@dataclass
class PartitionTree:
    """Nested partitions of the support: per-level point labels with parent links
    implied by nesting, and recorded diameter bounds D*r^-level (D=2)."""

    points: np.ndarray        # (n, d)
    norm: NormKind
    r: float
    depth: int
    labels: List[np.ndarray]  # labels[level][point]; level 0 is all-zero
    diameters: List[float]    # diameter bound per level

    def cells(self, level: int) -> Dict[int, np.ndarray]:
        lab = self.labels[level]
        order = np.argsort(lab, kind="stable")
        out: Dict[int, np.ndarray] = {}
        uniq, starts = np.unique(lab[order], return_index=True)
        bounds = list(starts) + [len(lab)]
        for u, s, e in zip(uniq, bounds[:-1], bounds[1:]):
            out[int(u)] = order[s:e]
        return out


def build_nested_partition(
    points: np.ndarray, norm: NormKind, depth: int, r: float
) -> PartitionTree:
    """Build the nested partition of a support inside the open unit ball."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = points.shape[0]
    if depth < 1:
        raise DomainError("depth must be >= 1")
    radii = norms_of(points, norm)
    if np.any(radii >= 1.0):
        raise DomainError("all support points must have norm < 1")

    labels: List[np.ndarray] = [np.zeros(n, dtype=np.int64)]
    if norm == NormKind.MAX:
        if abs(r - 2.0) > 1e-12:
            raise DomainError("the max-norm construction requires r = 2")
        for level in range(1, depth + 1):
            side = 2.0 ** (1 - level)
            cells = np.floor((points + 1.0) / side).astype(np.int64)
            _, lab = np.unique(cells, axis=0, return_inverse=True)
            labels.append(lab.ravel().astype(np.int64))
    else:
        if not r > 2.0:
            raise DomainError("the Euclidean construction requires r > 2")
        gamma = (r - 2.0) / r
        # Independent greedy covers per level: each point joins the first
        # center covering it, else becomes a new center (ties by point order).
        raw: List[np.ndarray] = [np.zeros(n, dtype=np.int64)]
        for level in range(1, depth + 1):
            radius = gamma * r ** (-level)
            centers: List[np.ndarray] = []
            lab = np.empty(n, dtype=np.int64)
            cmat = np.empty((0, points.shape[1]))
            for i in range(n):
                if cmat.shape[0]:
                    dist = np.sqrt(((cmat - points[i]) ** 2).sum(axis=1))
                    hit = np.nonzero(dist < radius)[0]
                else:
                    hit = np.empty(0, dtype=np.int64)
                if hit.size:
                    lab[i] = hit[0]
                else:
                    lab[i] = len(centers)
                    centers.append(points[i])
                    cmat = np.asarray(centers)
            raw.append(lab)
        # Nest-resolution by reverse induction: each finest-level resolved cell
        # is a raw cell; each resolved level-(l+1) cell attaches wholly to the
        # raw level-l cell of its lowest-index member.
        labels = [None] * (depth + 1)  # type: ignore[list-item]
        labels[depth] = raw[depth]
        for level in range(depth - 1, 0, -1):
            child = labels[level + 1]
            lab = np.empty(n, dtype=np.int64)
            for c in np.unique(child):
                members = np.nonzero(child == c)[0]
                lab[members] = raw[level][members.min()]
            _, lab = np.unique(lab, return_inverse=True)
            labels[level] = lab.ravel().astype(np.int64)
        labels[0] = np.zeros(n, dtype=np.int64)

    diameters = [2.0 * r ** (-level) for level in range(depth + 1)]
    return PartitionTree(
        points=points, norm=norm, r=r, depth=depth, labels=labels, diameters=diameters
    )


def default_depth(p: float, r: float, cap: int = 40) -> int:
    """Smallest k with delta_k^p below 1e-3 of the level-0 term, capped."""
    k = math.ceil(3.0 / (p * math.log10(r)))
    return max(1, min(k, cap))


@dataclass
class CouplingResult:
    plan: TransportPlan
    u_levels: np.ndarray        # realized u_l, l = 0..depth-1
    diameters: List[float]
    certified_bound: float


def _point_index_map(points: np.ndarray) -> Dict[bytes, int]:
    return {points[i].tobytes(): i for i in range(points.shape[0])}


def _locate(sub: np.ndarray, index: Dict[bytes, int], what: str) -> np.ndarray:
    out = np.empty(sub.shape[0], dtype=np.int64)
    for i in range(sub.shape[0]):
        key = sub[i].tobytes()
        if key not in index:
            raise DomainError(f"{what} support point not found in the partition tree")
        out[i] = index[key]
    return out


def hierarchical_coupling(
    mu: DiscreteMeasure, nu: DiscreteMeasure, tree: PartitionTree, p: float
) -> CouplingResult:
    """The recursive multiscale coupling induced by a nested partition.

    Leaf cells receive product couplings of the conditional measures; each
    internal cell combines its children with weights rho_C = min of the two
    conditional child masses, plus a residual product coupling carrying the
    mismatch mass q_F.  Returns the realized plan, the realized u_l values and
    the certified bound delta_k^p + sum_l delta_l^p u_l.
    """
    index = _point_index_map(tree.points)
    mu_idx = _locate(mu.points, index, "mu")
    nu_idx = _locate(nu.points, index, "nu")
    n_pts = tree.points.shape[0]
    wmu = np.zeros(n_pts)
    wnu = np.zeros(n_pts)
    wmu[mu_idx] = mu.weights
    wnu[nu_idx] = nu.weights
    tree2mu = np.full(n_pts, -1, dtype=np.int64)
    tree2nu = np.full(n_pts, -1, dtype=np.int64)
    tree2mu[mu_idx] = np.arange(mu.size)
    tree2nu[nu_idx] = np.arange(nu.size)

    k = tree.depth
    u = np.zeros(k)
    pairs: Dict[Tuple[int, int], float] = {}

    def add_product(sup_i: np.ndarray, a: np.ndarray, sup_j: np.ndarray, b: np.ndarray, mass: float):
        # mass * outer(a, b) with a, b conditional weights summing to 1
        for ii, ai in zip(sup_i, a):
            if ai <= 0.0:
                continue
            for jj, bj in zip(sup_j, b):
                if bj <= 0.0:
                    continue
                key = (int(ii), int(jj))
                pairs[key] = pairs.get(key, 0.0) + mass * ai * bj

    def couple(level: int, members: np.ndarray, weight: float):
        mu_mass = wmu[members].sum()
        nu_mass = wnu[members].sum()
        if level == k:
            add_product(
                members, wmu[members] / mu_mass, members, wnu[members] / nu_mass, weight
            )
            return
        child_lab = tree.labels[level + 1][members]
        uniq = np.unique(child_lab)
        groups = [members[child_lab == c] for c in uniq]
        rmu = np.array([wmu[g].sum() / mu_mass for g in groups])
        rnu = np.array([wnu[g].sum() / nu_mass for g in groups])
        rho = np.minimum(rmu, rnu)
        q_f = 0.5 * np.abs(rmu - rnu).sum()
        u[level] += weight * q_f
        for g, rh in zip(groups, rho):
            if rh > 0.0:
                couple(level + 1, g, weight * rh)
        if q_f > 0.0:
            alpha = np.zeros(len(members))
            beta = np.zeros(len(members))
            pos = {int(m): idx for idx, m in enumerate(members)}
            for g, dm, dn in zip(groups, rmu - rnu, rnu - rmu):
                gm = wmu[g].sum()
                gn = wnu[g].sum()
                if dm > 0.0:
                    for m in g:
                        alpha[pos[int(m)]] += dm * wmu[m] / gm / q_f
                if dn > 0.0:
                    for m in g:
                        beta[pos[int(m)]] += dn * wnu[m] / gn / q_f
            add_product(members, alpha, members, beta, weight * q_f)

    couple(0, np.arange(n_pts), 1.0)

    src = np.array([tree2mu[i] for i, _ in pairs], dtype=np.int64)
    dst = np.array([tree2nu[j] for _, j in pairs], dtype=np.int64)
    mass = np.array(list(pairs.values()))
    if np.any(src < 0) or np.any(dst < 0):
        raise DomainError("coupling assigned mass to a point outside a marginal support")
    plan = TransportPlan.from_triples(src, dst, mass, mu, nu, p, tree.norm)
    bound = tree.diameters[k] ** p + sum(
        tree.diameters[level] ** p * u[level] for level in range(k)
    )
    return CouplingResult(
        plan=plan, u_levels=u, diameters=list(tree.diameters), certified_bound=bound
    )


def _annulus_index(radii: np.ndarray, a: float) -> np.ndarray:
    """G_0 = B(0,1); G_n = B(0,a^n) \\ B(0,a^(n-1)), i.e. radius in [a^(n-1), a^n)."""
    out = np.zeros(radii.shape[0], dtype=np.int64)
    big = radii >= 1.0
    t = np.log(radii[big]) / math.log(a)
    out[big] = np.floor(t + 1e-9).astype(np.int64) + 1
    return out


def annulus_coupling(
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    a: float,
    p: float,
    depth: Optional[int] = None,
    norm: NormKind = NormKind.MAX,
    r: Optional[float] = None,
) -> Tuple[TransportPlan, float]:
    """Coupling of measures with arbitrary support via the annulus decomposition.

    Matched annulus mass is coupled hierarchically after rescaling the annulus
    into the unit ball; the annulus-mass mismatch is product-coupled.  Returns
    the assembled plan and the certified bound
    sum_n a^(pn) (2^p eps_p |mu(G_n) - nu(G_n)| + min-mass * B_n),
    with B_n the per-annulus certified hierarchical bound.
    """
    if not a > 1.0:
        raise DomainError("a must be > 1")
    if mu.dim != nu.dim:
        raise DomainError("measures must share a dimension")
    if r is None:
        r = 2.0 if norm == NormKind.MAX else 4.0
    if depth is None:
        depth = default_depth(p, r)

    bins_mu = _annulus_index(mu.norm_radii(norm), a)
    bins_nu = _annulus_index(nu.norm_radii(norm), a)
    n_max = int(max(bins_mu.max(initial=0), bins_nu.max(initial=0)))

    src_all: List[np.ndarray] = []
    dst_all: List[np.ndarray] = []
    mass_all: List[np.ndarray] = []
    bound = 0.0
    mu_excess: List[Tuple[int, float, np.ndarray]] = []  # (annulus, excess, members)
    nu_excess: List[Tuple[int, float, np.ndarray]] = []

    for n_ann in range(n_max + 1):
        mem_mu = np.nonzero(bins_mu == n_ann)[0]
        mem_nu = np.nonzero(bins_nu == n_ann)[0]
        m_mass = float(mu.weights[mem_mu].sum())
        n_mass = float(nu.weights[mem_nu].sum())
        diff = m_mass - n_mass
        matched = min(m_mass, n_mass)
        scale = a ** n_ann
        bound += scale ** p * 2.0 ** p * eps_p(p) * abs(diff)
        if diff > 0.0:
            mu_excess.append((n_ann, diff, mem_mu))
        elif diff < 0.0:
            nu_excess.append((n_ann, -diff, mem_nu))
        if matched <= 0.0:
            continue
        # Rescale the annulus into the unit ball and couple hierarchically.
        sub_mu = DiscreteMeasure(
            points=mu.points[mem_mu] / scale, weights=mu.weights[mem_mu] / m_mass
        )
        sub_nu = DiscreteMeasure(
            points=nu.points[mem_nu] / scale, weights=nu.weights[mem_nu] / n_mass
        )
        union = np.unique(np.vstack([sub_mu.points, sub_nu.points]), axis=0)
        tree = build_nested_partition(union, norm, depth, r)
        res = hierarchical_coupling(sub_mu, sub_nu, tree, p)
        bound += scale ** p * matched * res.certified_bound
        src_all.append(mem_mu[res.plan.src])
        dst_all.append(mem_nu[res.plan.dst])
        mass_all.append(res.plan.mass * matched)

    # Residual product coupling across annuli.
    q_total = sum(e for _, e, _ in mu_excess)
    if q_total > 1e-15:
        alpha_idx = np.concatenate([m for _, _, m in mu_excess])
        alpha_w = np.concatenate(
            [e * mu.weights[m] / mu.weights[m].sum() for _, e, m in mu_excess]
        )
        beta_idx = np.concatenate([m for _, _, m in nu_excess])
        beta_w = np.concatenate(
            [e * nu.weights[m] / nu.weights[m].sum() for _, e, m in nu_excess]
        )
        ii, jj = np.meshgrid(
            np.arange(len(alpha_idx)), np.arange(len(beta_idx)), indexing="ij"
        )
        src_all.append(alpha_idx[ii.ravel()])
        dst_all.append(beta_idx[jj.ravel()])
        mass_all.append((alpha_w[ii.ravel()] * beta_w[jj.ravel()]) / q_total)

    src = np.concatenate(src_all) if src_all else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(dst_all) if dst_all else np.zeros(0, dtype=np.int64)
    mass = np.concatenate(mass_all) if mass_all else np.zeros(0)
    plan = TransportPlan.from_triples(src, dst, mass, mu, nu, p, norm)
    return plan, bound
