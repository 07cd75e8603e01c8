"""Sampling, Monte Carlo estimation of the expected transport cost, and
bound-vs-experiment verification campaigns."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .bounds import BoundQuery, evaluate_bound
from .constants import NormKind
from .errors import DomainError
from .measures import DiscreteMeasure, parse_norm
from .optimize import golden_section
from .oracle import exact_transport_cost, exact_transport_cost_1d


@dataclass
class DistributionSpec:
    """A finite-support reference distribution with exactly computable moments."""

    kind: str  # "finite" | "grid_uniform" | "scaled_pareto"
    dim: int
    measure: DiscreteMeasure

    @classmethod
    def finite(cls, measure: DiscreteMeasure) -> "DistributionSpec":
        return cls(kind="finite", dim=measure.dim, measure=measure)

    @classmethod
    def grid_uniform(
        cls, dim: int, points_per_axis: int, ball_norm: NormKind = NormKind.MAX
    ) -> "DistributionSpec":
        """Uniform on a lattice inside the ball of radius 1/2 (cell centers)."""
        if points_per_axis < 1:
            raise DomainError("points_per_axis must be >= 1")
        axis = (np.arange(points_per_axis) + 0.5) / points_per_axis - 0.5
        grids = np.meshgrid(*([axis] * dim), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        if ball_norm == NormKind.EUCLIDEAN:
            keep = np.sqrt((pts * pts).sum(axis=1)) < 0.5
            pts = pts[keep]
        w = np.full(pts.shape[0], 1.0 / pts.shape[0])
        return cls(
            kind="grid_uniform",
            dim=dim,
            measure=DiscreteMeasure.from_arrays(pts, w),
        )

    @classmethod
    def scaled_pareto(
        cls,
        dim: int,
        tail_index: float,
        ratio: float = 1.25,
        truncation_mass: float = 1e-6,
    ) -> "DistributionSpec":
        """Radial Pareto (P(R >= r) = r^-tail for r >= 1) on the axis directions,
        discretized on geometric shells and truncated once the tail mass drops
        below ``truncation_mass``."""
        if tail_index <= 0 or ratio <= 1:
            raise DomainError("tail_index > 0 and ratio > 1 required")
        radii = []
        shell_mass = []
        j = 0
        while ratio ** (-tail_index * j) > truncation_mass:
            r_j = ratio ** j
            r_next = ratio ** (j + 1)
            radii.append(r_j)
            shell_mass.append(r_j ** (-tail_index) - r_next ** (-tail_index))
            j += 1
        w_shell = np.asarray(shell_mass)
        w_shell /= w_shell.sum()
        dirs = np.vstack([np.eye(dim), -np.eye(dim)])
        pts = np.vstack([r * dirs for r in radii])
        w = np.repeat(w_shell / (2 * dim), 2 * dim)
        return cls(
            kind="scaled_pareto",
            dim=dim,
            measure=DiscreteMeasure.from_arrays(pts, w),
        )

    @classmethod
    def from_dict(cls, obj: dict) -> "DistributionSpec":
        kind = obj["kind"]
        if kind == "finite":
            return cls.finite(DiscreteMeasure.from_json(json.dumps(obj["measure"])))
        if kind == "grid_uniform":
            return cls.grid_uniform(
                obj["dim"],
                obj["points_per_axis"],
                parse_norm(obj.get("ball_norm", "max")),
            )
        if kind == "scaled_pareto":
            return cls.scaled_pareto(
                obj["dim"],
                obj["tail_index"],
                obj.get("ratio", 1.25),
                obj.get("truncation_mass", 1e-6),
            )
        raise DomainError(f"unknown distribution kind {kind!r}")


def exact_moment(
    dist: DistributionSpec,
    q: float,
    norm: NormKind,
    translation_optimized: bool = False,
) -> float:
    """M_q of the reference measure; optionally minimized over a translation."""
    if q <= 0:
        raise DomainError("q must be positive")
    plain = dist.measure.moment(q, norm)
    if not translation_optimized:
        return plain
    pts = dist.measure.points
    w = dist.measure.weights

    def objective(x0: np.ndarray) -> float:
        diff = pts - x0
        if norm == NormKind.MAX:
            dist_v = np.abs(diff).max(axis=1)
        else:
            dist_v = np.sqrt((diff * diff).sum(axis=1))
        return float(np.dot(w, dist_v ** q))

    x0 = (w[:, None] * pts).sum(axis=0)
    best = objective(x0)
    for _ in range(3):  # cyclic coordinate descent
        for c in range(dist.dim):
            lo = pts[:, c].min()
            hi = pts[:, c].max()

            def f(t: float, c=c) -> float:
                y = x0.copy()
                y[c] = t
                return objective(y)

            t_star, v = golden_section(f, lo, hi, rel_tol=1e-8)
            if v < best:
                best = v
                x0[c] = t_star
    return min(plain, best)


def sample_empirical(
    dist: DistributionSpec, n: int, seed: int, replica_index: int
) -> DiscreteMeasure:
    """Empirical measure of n i.i.d. draws, from a counter-based RNG stream
    keyed by (seed, replica_index) so replicas are order-independent."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=[seed, replica_index]))
    cum = np.cumsum(dist.measure.weights)
    cum[-1] = 1.0
    idx = np.searchsorted(cum, rng.random(n), side="right")
    counts = np.bincount(idx, minlength=dist.measure.size)
    keep = counts > 0
    return DiscreteMeasure(
        points=dist.measure.points[keep], weights=counts[keep] / n
    )


def estimate_expected_cost(
    dist: DistributionSpec,
    n: int,
    p: float,
    norm: NormKind,
    replicas: int,
    seed: int,
) -> Tuple[float, float]:
    """Monte Carlo mean and standard error of T_p(mu_n, mu) over replicas."""
    if replicas < 30:
        raise DomainError("replicas must be >= 30 for a statistical verdict")
    fast_1d = dist.dim == 1 and p >= 1
    costs = np.empty(replicas)
    for rep in range(replicas):
        emp = sample_empirical(dist, n, seed, rep)
        if fast_1d:
            costs[rep] = exact_transport_cost_1d(emp, dist.measure, p)
        else:
            costs[rep], _ = exact_transport_cost(emp, dist.measure, p, norm)
    mean = float(np.mean(costs))
    stderr = float(np.std(costs, ddof=1) / math.sqrt(replicas)) if replicas > 1 else 0.0
    return mean, stderr


@dataclass
class VerifyConfig:
    distribution: DistributionSpec
    p: float
    q: float
    norm: NormKind
    n_values: List[int]
    replicas: int
    seed: int
    confidence_sigmas: float = 3.0

    @classmethod
    def from_json(cls, text: str) -> "VerifyConfig":
        obj = json.loads(text)
        return cls(
            distribution=DistributionSpec.from_dict(obj["distribution"]),
            p=obj["p"],
            q=obj["q"],
            norm=parse_norm(obj["norm"]),
            n_values=[int(v) for v in obj["n_values"]],
            replicas=int(obj["replicas"]),
            seed=int(obj["seed"]),
            confidence_sigmas=float(obj.get("confidence_sigmas", 3.0)),
        )


@dataclass
class VerifyRow:
    n: int
    mean: float
    stderr: float
    bound: float
    margin: float
    passed: bool


@dataclass
class VerifyReport:
    rows: List[VerifyRow]
    slope: float
    slope_stderr: float
    theoretical_rate: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": [vars(r) for r in self.rows],
                "slope": self.slope,
                "slope_stderr": self.slope_stderr,
                "theoretical_rate": self.theoretical_rate,
                "all_passed": self.all_passed,
            }
        )

    def to_csv(self) -> str:
        lines = ["n,mean,stderr,bound,margin,passed"]
        for r in self.rows:
            lines.append(
                f"{r.n},{r.mean:.12g},{r.stderr:.12g},{r.bound:.12g},"
                f"{r.margin:.12g},{int(r.passed)}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"{'n':>6}  {'mean':>12}  {'stderr':>10}  {'bound':>12}  "
            f"{'margin':>12}  pass"
        ]
        for r in self.rows:
            lines.append(
                f"{r.n:>6}  {r.mean:>12.6g}  {r.stderr:>10.4g}  {r.bound:>12.6g}  "
                f"{r.margin:>12.6g}  {'yes' if r.passed else 'NO'}"
            )
        lines.append(
            f"fitted slope {self.slope:+.4f} +- {self.slope_stderr:.4f} "
            f"(theoretical {-self.theoretical_rate:+.4f})"
        )
        return "\n".join(lines) + "\n"


def run_verification(config: VerifyConfig) -> VerifyReport:
    """Bound-vs-experiment campaign over the configured n values."""
    dist = config.distribution
    moment = exact_moment(dist, config.q, config.norm)
    rows: List[VerifyRow] = []
    for n in config.n_values:
        report = evaluate_bound(
            BoundQuery(
                d=dist.dim,
                p=config.p,
                q=config.q,
                moment=moment,
                norm=config.norm,
                n=n,
            )
        )
        mean, stderr = estimate_expected_cost(
            dist, n, config.p, config.norm, config.replicas, config.seed
        )
        margin = report.value - (mean + config.confidence_sigmas * stderr)
        rows.append(
            VerifyRow(
                n=n,
                mean=mean,
                stderr=stderr,
                bound=report.value,
                margin=margin,
                passed=margin >= 0.0,
            )
        )
    rate = report.rate_exponent
    used = [(math.log(r.n), math.log(r.mean)) for r in rows if r.mean > 0]
    slope, slope_err = _fit_slope(used)
    return VerifyReport(
        rows=rows, slope=slope, slope_stderr=slope_err, theoretical_rate=rate
    )


def _fit_slope(points: List[Tuple[float, float]]) -> Tuple[float, float]:
    if len(points) < 2:
        return float("nan"), float("nan")
    x = np.array([a for a, _ in points])
    y = np.array([b for _, b in points])
    xc = x - x.mean()
    slope = float(np.dot(xc, y) / np.dot(xc, xc))
    resid = y - (y.mean() + slope * xc)
    dof = max(len(points) - 2, 1)
    slope_err = float(
        math.sqrt(float(np.dot(resid, resid)) / dof / float(np.dot(xc, xc)))
    )
    return slope, slope_err


_DEFAULT_NS = [50, 100, 200, 400, 800, 1600, 3200]


def shipped_configs(seed: int = 20260824, replicas: int = 200) -> Dict[str, VerifyConfig]:
    """The standard verification campaigns covering every regime."""
    return {
        "d1_p1_supercritical": VerifyConfig(
            distribution=DistributionSpec.grid_uniform(1, 8),
            p=1.0, q=6.0, norm=NormKind.MAX,
            n_values=list(_DEFAULT_NS), replicas=replicas, seed=seed,
        ),
        "d1_p2_supercritical": VerifyConfig(
            distribution=DistributionSpec.grid_uniform(1, 4),
            p=2.0, q=10.0, norm=NormKind.MAX,
            n_values=list(_DEFAULT_NS), replicas=replicas, seed=seed,
        ),
        "d3_p1_subcritical": VerifyConfig(
            distribution=DistributionSpec.grid_uniform(3, 12),
            p=1.0, q=40.4, norm=NormKind.MAX,
            n_values=list(_DEFAULT_NS), replicas=replicas, seed=seed,
        ),
        "d3_p2_supercritical": VerifyConfig(
            distribution=DistributionSpec.grid_uniform(3, 5),
            p=2.0, q=10.0, norm=NormKind.MAX,
            n_values=list(_DEFAULT_NS), replicas=replicas, seed=seed,
        ),
        "d2_p1_critical": VerifyConfig(
            distribution=DistributionSpec.grid_uniform(2, 8),
            p=1.0, q=3.0, norm=NormKind.MAX,
            n_values=list(_DEFAULT_NS), replicas=replicas, seed=seed,
        ),
        "d3_p2_low_moment": VerifyConfig(
            distribution=DistributionSpec.scaled_pareto(3, tail_index=3.2),
            p=2.0, q=3.0, norm=NormKind.MAX,
            n_values=list(_DEFAULT_NS), replicas=replicas, seed=seed,
        ),
    }
