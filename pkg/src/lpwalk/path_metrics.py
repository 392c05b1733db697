"""Finite metric spaces built from walk snapshots and from the limit space.

Distances are plain l_p norms of point differences.  Norms are computed in
the max-rescaled form ``mx * (sum (|v|/mx)^p)^(1/p)`` because the d^{-1/p}
increment scaling pushes coordinates toward the underflow region for large
d and p.  The pairwise kernel below is shared with the walk engine so the
"same quantity through two code paths" consistency checks compare
aggregation logic, not summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic_limits import LimitSpace, limit_distance
from .errors import ConfigurationError

__all__ = [
    "FiniteMetricSpace",
    "limit_sample_space",
    "lp_norm",
    "lp_norm_rows",
    "pairwise_lp_matrix",
    "path_metric_space",
    "read_metric_space_csv",
    "write_metric_space_csv",
]


def _check_p(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise ConfigurationError(f"p must be a finite real >= 1, got {p}")
    return p


def _abs_pow_sum(a: np.ndarray, p: float, axis: int) -> np.ndarray:
    """sum |a|^p along axis with cheap kernels for small integer p."""
    a = np.abs(a)
    if p == 1.0:
        return a.sum(axis=axis)
    if p == 2.0:
        return (a * a).sum(axis=axis)
    if p == 3.0:
        return (a * a * a).sum(axis=axis)
    if p == 4.0:
        a *= a
        return (a * a).sum(axis=axis)
    if p == 1.5:
        return (a * np.sqrt(a)).sum(axis=axis)
    return (a**p).sum(axis=axis)


def lp_norm(v: np.ndarray, p: float) -> float:
    """(sum |v_i|^p)^(1/p) with max-rescaling against overflow/underflow."""
    p = _check_p(p)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ConfigurationError(f"lp_norm expects a vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ConfigurationError("lp_norm requires finite entries")
    mx = float(np.max(np.abs(v))) if v.size else 0.0
    if mx == 0.0:
        return 0.0
    return mx * float(_abs_pow_sum(v / mx, p, axis=0)) ** (1.0 / p)


def lp_norm_rows(mat: np.ndarray, p: float) -> np.ndarray:
    """Row-wise l_p norms of a 2-D array, max-rescaled per row."""
    p = _check_p(p)
    mat = np.asarray(mat, dtype=np.float64)
    mx = np.max(np.abs(mat), axis=1)
    safe = np.where(mx > 0.0, mx, 1.0)
    out = safe * _abs_pow_sum(mat / safe[:, None], p, axis=1) ** (1.0 / p)
    return np.where(mx > 0.0, out, 0.0)


def pairwise_lp_matrix(points: np.ndarray, p: float) -> np.ndarray:
    """Symmetric matrix of l_p distances between the rows of ``points``.

    O(k^2 d) work; the hot paths avoid per-row rescaling because snapshot
    coordinates are O(1) by construction.  Entries outside the safe exponent
    range fall back to the rescaled row kernel.
    """
    p = _check_p(p)
    points = np.asarray(points, dtype=np.float64)
    k = points.shape[0]
    dist = np.zeros((k, k))
    if k < 2:
        return dist
    mx = float(np.max(np.abs(points)))
    if mx == 0.0:
        return dist
    if p == 2.0 and 1e-100 < mx < 1e100:
        sq = np.einsum("ij,ij->i", points, points)
        gram = points @ points.T
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * gram, 0.0)
        dist = np.sqrt(d2)
        np.fill_diagonal(dist, 0.0)
        return dist
    direct = 1e-100 < mx < 1e100
    inv_p = 1.0 / p
    for i in range(k - 1):
        diff = points[i + 1 :] - points[i]
        if direct:
            row = _abs_pow_sum(diff, p, axis=1) ** inv_p
        else:
            row = lp_norm_rows(diff, p)
        dist[i, i + 1 :] = row
        dist[i + 1 :, i] = row
    return dist


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labeled finite point set given by its symmetric distance matrix."""

    dist: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self) -> None:
        dist = np.asarray(self.dist, dtype=np.float64)
        object.__setattr__(self, "dist", dist)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ConfigurationError(f"distance matrix must be square, got {dist.shape}")
        if not np.all(np.isfinite(dist)):
            raise ConfigurationError("distance matrix must be finite")
        if np.any(dist < 0.0):
            raise ConfigurationError("distances must be nonnegative")
        if np.any(np.diagonal(dist) != 0.0):
            raise ConfigurationError("self-distances must be zero")
        if not np.array_equal(dist, dist.T):
            raise ConfigurationError("distance matrix must be symmetric")
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.float64)
            object.__setattr__(self, "labels", labels)
            if labels.shape != (dist.shape[0],):
                raise ConfigurationError("labels must have one entry per point")

    @property
    def k(self) -> int:
        return self.dist.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.max(self.dist)) if self.k else 0.0

    def max_triangle_violation(self) -> float:
        """max over triples of d(i,j) - d(i,via) - d(via,j); <= 0 for a metric.

        Looped over the intermediate index so memory stays O(k^2).
        """
        worst = -math.inf
        for via in range(self.k):
            slack = self.dist - (self.dist[:, via][:, None] + self.dist[via, :][None, :])
            worst = max(worst, float(np.max(slack)))
        return worst

    def check_metric(self, tol_scale: float = 1e-9) -> None:
        """Raise unless the triangle inequality holds to tol_scale * max dist."""
        if self.max_triangle_violation() > tol_scale * max(self.diameter, 1e-300):
            raise ConfigurationError("triangle inequality violated")


def path_metric_space(snapshot) -> FiniteMetricSpace:
    """The (m+1)-point l_p metric space of a grid snapshot, labeled by time."""
    dist = pairwise_lp_matrix(snapshot.points, snapshot.config.p)
    return FiniteMetricSpace(dist, labels=np.array(snapshot.times))


def limit_sample_space(m: int, space: LimitSpace) -> FiniteMetricSpace:
    """The limit space sampled on the uniform grid {i/m : i = 0..m}."""
    if m < 1:
        raise ConfigurationError(f"grid size must be >= 1, got {m}")
    times = np.arange(m + 1) / m
    dist = space.modulus * np.sqrt(np.abs(times[:, None] - times[None, :]))
    np.fill_diagonal(dist, 0.0)
    return FiniteMetricSpace(dist, labels=times)


def write_metric_space_csv(space: FiniteMetricSpace, path: str) -> None:
    """Write the shared metric-space format: a header line holding k, then k
    lines of comma-separated lower-triangular distances (diagonal included).
    """
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{space.k}\n")
        for i in range(space.k):
            fh.write(",".join(f"{v:.17g}" for v in space.dist[i, : i + 1]) + "\n")


def read_metric_space_csv(path: str) -> FiniteMetricSpace:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ConfigurationError(f"{path}: empty metric-space file")
    try:
        k = int(lines[0])
    except ValueError:
        raise ConfigurationError(f"{path}: header must be the point count, got {lines[0]!r}")
    if len(lines) != k + 1:
        raise ConfigurationError(f"{path}: expected {k} distance lines, found {len(lines) - 1}")
    dist = np.zeros((k, k))
    for i in range(k):
        row = [float(v) for v in lines[i + 1].split(",")]
        if len(row) != i + 1:
            raise ConfigurationError(f"{path}: line {i + 2} must hold {i + 1} entries")
        dist[i, : i + 1] = row
        dist[: i + 1, i] = row
    return FiniteMetricSpace(dist)
