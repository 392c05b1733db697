"""Streaming simulation of the d-dimensional walk and its path statistics.

A walk of n steps adds ``d^{-1/p} * xi`` draws coordinatewise to a running
vector; only the running vector, the grid snapshots (m+1 of them), and the
scalar decomposition paths are kept, so peak memory is O((m+2) d)
independent of n.

The decomposition splits the p-th power of the coordinate-sum norm into a
predictable nondecreasing part T and a martingale part Q:

    Q_j - Q_{j-1} = p * sum_i X_{j,i} * psi_p(S_{j-1,i}),
    T_j = ||S_j||_p^p - Q_j,

with ``psi_p(s) = s |s|^{p-2}`` for p > 1 and ``psi_1(s) = sign(s)``, and
``psi_p(0) = 0`` for every p (the continuous extension for p > 1; sign(0)=0
for p = 1).  T is *defined* as the difference so the identity holds by
construction and the monotonicity of T is the substantive check.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .analytic_limits import LimitSpace, mp_closed_form
from .errors import ConfigurationError, ResourceLimitError
from .increments import IncrementLaw, SeedSpec, law_sigma
from .path_metrics import _abs_pow_sum, lp_norm_rows, pairwise_lp_matrix

__all__ = [
    "DEFAULT_MEM_CAP",
    "DecompositionTrace",
    "GridSnapshot",
    "WalkConfig",
    "grid_pair_sups",
    "pointwise_norm_statistic",
    "simulate_decomposition",
    "simulate_grid",
    "sup_difference_statistic",
    "sup_norm_statistic",
]

DEFAULT_MEM_CAP = 200_000_000  # reals
_MEM_CAP_ENV = "LPWALK_MEM_CAP"

_BLOCK_REALS = 262_144  # draw steps in blocks of about 2 MB


def default_grid_size(n: int) -> int:
    return min(n, 512)


def _resolve_cap(cap: int | None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get(_MEM_CAP_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(f"{_MEM_CAP_ENV} must be an integer, got {env!r}")
    return DEFAULT_MEM_CAP


@dataclass(frozen=True)
class WalkConfig:
    """Full description of one simulation run."""

    n: int
    d: int
    p: float
    law: IncrementLaw
    seed: SeedSpec
    m: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"step count n must be >= 1, got {self.n}")
        if self.d < 1:
            raise ConfigurationError(f"dimension d must be >= 1, got {self.d}")
        if not (math.isfinite(self.p) and self.p >= 1.0):
            raise ConfigurationError(f"p must be a finite real >= 1, got {self.p}")
        if self.m is None:
            object.__setattr__(self, "m", default_grid_size(self.n))
        if not (1 <= self.m <= self.n):
            raise ConfigurationError(
                f"grid size m must satisfy 1 <= m <= n, got m={self.m}, n={self.n}"
            )

    @property
    def sigma(self) -> float:
        return law_sigma(self.law)

    @property
    def step_scale(self) -> float:
        return float(self.d) ** (-1.0 / self.p)


@dataclass(frozen=True)
class GridSnapshot:
    """Normalized walk positions n^{-1/2} S_{floor(n t_i)} at t_i = i/m."""

    config: WalkConfig
    times: np.ndarray
    points: np.ndarray

    def to_csv(self, fh: io.TextIOBase) -> None:
        """Dump as (i, t_i, coord_index, value) rows."""
        fh.write("i,t,coord_index,value\n")
        for i, (t, row) in enumerate(zip(self.times, self.points)):
            for c, v in enumerate(row):
                fh.write(f"{i},{t:.17g},{c},{v:.17g}\n")


@dataclass(frozen=True)
class DecompositionTrace:
    """Per-step T and Q paths plus an independently accumulated final norm."""

    config: WalkConfig
    p: float
    T: np.ndarray
    Q: np.ndarray
    final_norm_pp: float  # math.fsum over coordinates, separate from T + Q

    @property
    def norm_pp(self) -> np.ndarray:
        return self.T + self.Q


def _grid_indices(n: int, m: int) -> np.ndarray:
    # floor(n i / m); strictly increasing because m <= n.
    return (n * np.arange(m + 1)) // m


def simulate_grid(config: WalkConfig, cap: int | None = None) -> GridSnapshot:
    """Stream the walk and record normalized snapshots at the grid times."""
    n, d, m = config.n, config.d, config.m
    if (m + 1) * d > _resolve_cap(cap):
        raise ResourceLimitError(
            f"snapshot storage (m+1)*d = {(m + 1) * d} exceeds the cap of "
            f"{_resolve_cap(cap)} reals (set {_MEM_CAP_ENV} to raise it)"
        )
    rng = config.seed.generator()
    scale = config.step_scale
    norm = 1.0 / math.sqrt(n)

    points = np.zeros((m + 1, d))
    targets = _grid_indices(n, m)
    S = np.zeros(d)
    ptr = 1  # targets[0] == 0 is the zero vector already stored
    block = max(1, _BLOCK_REALS // d)
    j = 0
    while j < n:
        b = min(block, n - j)
        X = config.law.sample(b * d, rng).reshape(b, d)
        for r in range(b):
            S += scale * X[r]
            j += 1
            if ptr <= m and j == targets[ptr]:
                points[ptr] = norm * S
                ptr += 1
    return GridSnapshot(config=config, times=np.arange(m + 1) / m, points=points)


def _psi(S: np.ndarray, p: float) -> np.ndarray:
    """psi_p(s) = s |s|^{p-2} with psi_p(0) = 0; psi_1 = sign."""
    if p == 1.0:
        return np.sign(S)
    if p == 2.0:
        return S
    if p == 3.0:
        return S * np.abs(S)
    a = np.abs(S)
    if p == 1.5:
        return np.sign(S) * np.sqrt(a)
    return np.sign(S) * a ** (p - 1.0)


def simulate_decomposition(config: WalkConfig, cap: int | None = None) -> DecompositionTrace:
    """Stream the walk maintaining the T/Q split of ||S_j||_p^p per step."""
    n, d, p = config.n, config.d, config.p
    if 2 * (n + 1) + d > _resolve_cap(cap):
        raise ResourceLimitError(
            f"trace storage 2(n+1)+d = {2 * (n + 1) + d} exceeds the cap of "
            f"{_resolve_cap(cap)} reals (set {_MEM_CAP_ENV} to raise it)"
        )
    rng = config.seed.generator()
    scale = config.step_scale

    S = np.zeros(d)
    T = np.zeros(n + 1)
    Q = np.zeros(n + 1)
    q = 0.0
    comp = 0.0  # Kahan carry; |s|^{p-2} amplifies cancellation for fractional p
    block = max(1, _BLOCK_REALS // d)
    j = 0
    while j < n:
        b = min(block, n - j)
        X = scale * config.law.sample(b * d, rng).reshape(b, d)
        for r in range(b):
            inc = p * float(X[r] @ _psi(S, p))
            y = inc - comp
            t = q + y
            comp = (t - q) - y
            q = t
            S += X[r]
            j += 1
            Q[j] = q
            T[j] = float(_abs_pow_sum(S, p, axis=0)) - q
    final = math.fsum(np.abs(S) ** p)
    return DecompositionTrace(config=config, p=p, T=T, Q=Q, final_norm_pp=final)


def _norm_targets(times: np.ndarray, p: float, sigma: float) -> np.ndarray:
    return times ** (0.5 * p) * sigma**p * mp_closed_form(p)


def pointwise_norm_statistic(snapshot: GridSnapshot, sigma: float) -> np.ndarray:
    """| ||point_i||_p^p - t_i^{p/2} sigma^p M_p | at each grid time."""
    p = snapshot.config.p
    norms_pp = lp_norm_rows(snapshot.points, p) ** p
    return np.abs(norms_pp - _norm_targets(snapshot.times, p, sigma))


def sup_norm_statistic(snapshot: GridSnapshot, sigma: float) -> float:
    """Grid sup of the pointwise statistic with the deterministic term taken
    at both ends of each cell (the walk term is constant per cell)."""
    p = snapshot.config.p
    norms_pp = lp_norm_rows(snapshot.points, p) ** p
    g = _norm_targets(snapshot.times, p, sigma)
    at_left = float(np.max(np.abs(norms_pp - g)))
    at_right = float(np.max(np.abs(norms_pp[:-1] - g[1:]))) if len(g) > 1 else 0.0
    return max(at_left, at_right)


def grid_pair_sups(
    points: np.ndarray, times: np.ndarray, p: float, modulus: float
) -> tuple[float, float]:
    """(corner sup, base sup) of |walk distance - limit distance| over grid pairs.

    For each pair i <= j the walk term ||point_j - point_i||_p is constant on
    the cell [t_i, t_{i+1}) x [t_j, t_{j+1}); the deterministic term
    modulus * sqrt(t - s) is additionally evaluated at the cell corners
    (t_{j+1}, t_i) and (t_j, t_{i+1}), clipped to [0, 1].  The base sup uses
    only the grid corners (t_j, t_i) and backs the GH bound.
    """
    dist = pairwise_lp_matrix(points, p)
    k = len(times)
    nxt = np.minimum(np.append(times[1:], 1.0), 1.0)
    rows, cols = np.triu_indices(k)
    w = dist[rows, cols]
    ti, tj = times[rows], times[cols]
    base = np.abs(w - modulus * np.sqrt(tj - ti))
    up = np.abs(w - modulus * np.sqrt(nxt[cols] - ti))
    left = np.abs(w - modulus * np.sqrt(np.abs(tj - nxt[rows])))
    sup_base = float(np.max(base))
    sup_corners = max(sup_base, float(np.max(up)), float(np.max(left)))
    return sup_corners, sup_base


def sup_difference_statistic(
    snapshot: GridSnapshot,
    space: LimitSpace,
    include_cell_corners: bool = True,
) -> float:
    """Grid sup over pairs s <= t of |n^{-1/2}||S_t - S_s||_p - limit distance|.

    The continuum sup exceeds this by at most the discretization allowance
    modulus * sqrt(2/m) (half-Hoelder continuity of the limit metric).
    """
    config = snapshot.config
    if space.p != config.p:
        raise ConfigurationError(f"snapshot has p={config.p} but limit space has p={space.p}")
    if abs(space.sigma - config.sigma) > 1e-12 * max(space.sigma, config.sigma):
        raise ConfigurationError(
            f"snapshot law sigma {config.sigma} does not match limit space sigma {space.sigma}"
        )
    corners, base = grid_pair_sups(snapshot.points, snapshot.times, config.p, space.modulus)
    return corners if include_cell_corners else base


def discretization_allowance(m: int, modulus: float) -> float:
    """modulus * sqrt(2/m): bound on the continuum-vs-grid sup gap."""
    return modulus * math.sqrt(2.0 / m)
