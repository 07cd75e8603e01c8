"""Discrete measures, transport plans, and distance/cost helpers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .constants import NormKind
from .errors import DomainError

_WEIGHT_SUM_TOL = 1e-9


def parse_norm(name: Union[str, NormKind]) -> NormKind:
    if isinstance(name, NormKind):
        return name
    try:
        return NormKind(name)
    except ValueError:
        raise DomainError(f"unknown norm {name!r}; expected 'max' or 'euclid'") from None


def norms_of(points: np.ndarray, norm: NormKind) -> np.ndarray:
    """Per-point norm of an (n, d) array."""
    if norm == NormKind.MAX:
        return np.abs(points).max(axis=1)
    return np.sqrt((points * points).sum(axis=1))


def pairwise_distance(x: np.ndarray, y: np.ndarray, norm: NormKind) -> np.ndarray:
    """Dense (m, n) distance matrix, chunked over rows to bound peak memory."""
    m = x.shape[0]
    out = np.empty((m, y.shape[0]))
    chunk = max(1, int(5e7) // max(1, y.shape[0] * y.shape[1]))
    for i0 in range(0, m, chunk):
        diff = x[i0 : i0 + chunk, None, :] - y[None, :, :]
        if norm == NormKind.MAX:
            out[i0 : i0 + chunk] = np.abs(diff).max(axis=2)
        else:
            out[i0 : i0 + chunk] = np.sqrt((diff * diff).sum(axis=2))
    return out


def cost_matrix(x: np.ndarray, y: np.ndarray, p: float, norm: NormKind) -> np.ndarray:
    return pairwise_distance(x, y, norm) ** p


@dataclass
class DiscreteMeasure:
    """Finitely supported probability measure: distinct points, weights summing to 1."""

    points: np.ndarray  # (n, d) float64
    weights: np.ndarray  # (n,) float64

    @classmethod
    def from_arrays(cls, points, weights) -> "DiscreteMeasure":
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        w = np.asarray(weights, dtype=np.float64).ravel()
        if pts.shape[0] != w.shape[0]:
            raise DomainError("points and weights length mismatch")
        if np.any(w < 0):
            raise DomainError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_SUM_TOL:
            raise DomainError(f"weights must sum to 1 (got {w.sum():.12g})")
        # Merge duplicate support points, drop zero-weight atoms.
        uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
        wm = np.zeros(uniq.shape[0])
        np.add.at(wm, inverse.ravel(), w)
        keep = wm > 0
        return cls(points=uniq[keep], weights=wm[keep])

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def norm_radii(self, norm: NormKind) -> np.ndarray:
        return norms_of(self.points, norm)

    def moment(self, q: float, norm: NormKind) -> float:
        return float(np.dot(self.weights, self.norm_radii(norm) ** q))

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "points": self.points.tolist(),
                "weights": self.weights.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "DiscreteMeasure":
        obj = json.loads(text)
        pts = np.asarray(obj["points"], dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != obj["dim"]:
            raise DomainError("points dimension does not match 'dim'")
        return cls.from_arrays(pts, obj["weights"])


@dataclass
class TransportPlan:
    """Sparse coupling between two discrete measures, as (i, j, mass) triples."""

    src: np.ndarray   # (k,) int64 indices into mu.points
    dst: np.ndarray   # (k,) int64 indices into nu.points
    mass: np.ndarray  # (k,) float64
    cost_p: float
    p: float

    @classmethod
    def from_triples(
        cls,
        src,
        dst,
        mass,
        mu: DiscreteMeasure,
        nu: DiscreteMeasure,
        p: float,
        norm: NormKind,
    ) -> "TransportPlan":
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        mass = np.asarray(mass, dtype=np.float64)
        d = mu.points[src] - nu.points[dst]
        if norm == NormKind.MAX:
            dist = np.abs(d).max(axis=1) if d.size else np.zeros(0)
        else:
            dist = np.sqrt((d * d).sum(axis=1)) if d.size else np.zeros(0)
        cost = float(np.dot(mass, dist ** p))
        return cls(src=src, dst=dst, mass=mass, cost_p=cost, p=p)

    def marginals(self, m: int, n: int):
        a = np.zeros(m)
        b = np.zeros(n)
        np.add.at(a, self.src, self.mass)
        np.add.at(b, self.dst, self.mass)
        return a, b

    def check_marginals(self, mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float = 1e-12):
        a, b = self.marginals(mu.size, nu.size)
        err = max(np.abs(a - mu.weights).max(), np.abs(b - nu.weights).max())
        if err > tol:
            raise DomainError(f"marginal mismatch {err:.3e} exceeds {tol:.1e}")

    def to_json(self) -> str:
        triples = [
            [int(i), int(j), float(m)]
            for i, j, m in zip(self.src, self.dst, self.mass)
        ]
        return json.dumps({"triples": triples, "cost": self.cost_p, "p": self.p})
