"""Gromov-Hausdorff machinery for finite metric spaces.

Exact GH distances are computed through the correspondence characterization
GH = (1/2) inf over correspondences of the distortion.  Any correspondence
contains one of the minimal ones, which are exactly unions

    graph(f) union transpose(graph(g)),   f: A -> B,  g: B -> A,

and dropping pairs never increases distortion, so minimizing over (f, g)
pairs equals minimizing over all 2^(kA kB) total relations.  The (f, g)
enumeration is vectorized and capped at 5-point inputs, where it stays
around 10^7 candidate pairs.

For the labeled path-versus-limit comparison the bound is driven by

    D = sup over labeled pairs of |d_path(i, j) - limit_distance(t_i, t_j)|;

the proof-style upper bound is 2 D, while the correspondence t -> its own
label realizes D/2.  Both are returned so the exact factor-4 relation can
be asserted downstream; the grid discretization allowance is reported
separately, never folded into either bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .analytic_limits import LimitSpace
from .errors import ConfigurationError
from .path_metrics import FiniteMetricSpace, lp_norm

__all__ = [
    "Correspondence",
    "GhUpperBound",
    "distortion",
    "gh_exact_small",
    "gh_lower_bound_diameter",
    "gh_upper_bound_to_limit",
    "two_point_example_spaces",
]

_EXACT_CAP = 5


@dataclass(frozen=True)
class Correspondence:
    """A relation between point indices of two spaces, total on both sides."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def identity(cls, k: int) -> "Correspondence":
        return cls(tuple((i, i) for i in range(k)))

    def is_total(self, k_a: int, k_b: int) -> bool:
        left = {a for a, _ in self.pairs}
        right = {b for _, b in self.pairs}
        return left == set(range(k_a)) and right == set(range(k_b))


def distortion(corr: Correspondence, A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """max over related pairs (a,b), (a',b') of |d_A(a,a') - d_B(b,b')|."""
    if not corr.is_total(A.k, B.k):
        raise ConfigurationError("correspondence must cover every point of both spaces")
    ai = np.array([a for a, _ in corr.pairs])
    bi = np.array([b for _, b in corr.pairs])
    gap = np.abs(A.dist[np.ix_(ai, ai)] - B.dist[np.ix_(bi, bi)])
    return float(np.max(gap))


def _all_maps(k_from: int, k_to: int) -> np.ndarray:
    """All functions {0..k_from-1} -> {0..k_to-1} as a (k_to^k_from, k_from) array."""
    return np.array(list(itertools.product(range(k_to), repeat=k_from)), dtype=np.intp)


def gh_exact_small(A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """Exact GH distance by full enumeration of minimal correspondences."""
    if A.k > _EXACT_CAP or B.k > _EXACT_CAP:
        raise ConfigurationError(
            f"exact GH is capped at {_EXACT_CAP} points per space, got {A.k} x {B.k}"
        )
    dA, dB = A.dist, B.dist
    F = _all_maps(A.k, B.k)  # candidate f: A -> B
    G = _all_maps(B.k, A.k)  # candidate g: B -> A

    # dis restricted to graph(f): max |dA[a,a'] - dB[f a, f a']|
    dis_f = np.abs(dA[None, :, :] - dB[F[:, :, None], F[:, None, :]]).max(axis=(1, 2))
    dis_g = np.abs(dB[None, :, :] - dA[G[:, :, None], G[:, None, :]]).max(axis=(1, 2))

    # cross term: max over (a, b) of |dA[a, g b] - dB[f a, b]|, blocked over f.
    dA_g = dA[:, G.T]  # (kA, kB, nG) -> dA[a, g(b)]
    best = math.inf
    chunk = max(1, 2_000_000 // (G.shape[0] * A.k * B.k) + 1)
    for lo in range(0, F.shape[0], chunk):
        Fc = F[lo : lo + chunk]
        dB_f = dB[Fc[:, :, None], np.arange(B.k)[None, None, :]]  # (c, kA, kB)
        cross = np.abs(dA_g[None, :, :, :] - dB_f[:, :, :, None]).max(axis=(1, 2))  # (c, nG)
        total = np.maximum(np.maximum(cross, dis_f[lo : lo + chunk, None]), dis_g[None, :])
        best = min(best, float(total.min()))
    return 0.5 * best


def gh_lower_bound_diameter(A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """Classical lower bound (1/2) |diam A - diam B| <= GH(A, B)."""
    return 0.5 * abs(A.diameter - B.diameter)


@dataclass(frozen=True)
class GhUpperBound:
    """Distortion-driven upper bounds of GH(path, limit).

    paper_bound = 2 D and corr_bound = D / 2 where D = grid_sup; the grid
    discretization allowance is reported separately.
    """

    grid_sup: float
    allowance: float

    @property
    def paper_bound(self) -> float:
        return 2.0 * self.grid_sup

    @property
    def corr_bound(self) -> float:
        return 0.5 * self.grid_sup


def gh_upper_bound_to_limit(path: FiniteMetricSpace, limit: LimitSpace) -> GhUpperBound:
    """Bounds from D = sup over labeled pairs of |d_path - limit_distance|."""
    if path.labels is None:
        raise ConfigurationError("path space must carry time labels in [0, 1]")
    t = np.asarray(path.labels, dtype=np.float64)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ConfigurationError("time labels must lie in [0, 1]")
    target = limit.modulus * np.sqrt(np.abs(t[:, None] - t[None, :]))
    grid_sup = float(np.max(np.abs(path.dist - target)))

    ts = np.sort(t)
    gaps = [float(ts[0]), float(1.0 - ts[-1])]
    if len(ts) > 1:
        gaps.append(float(np.max(np.diff(ts))))
    allowance = limit.modulus * math.sqrt(2.0 * max(gaps))
    return GhUpperBound(grid_sup=grid_sup, allowance=allowance)


def two_point_example_spaces(p: float, a: float) -> tuple[FiniteMetricSpace, FiniteMetricSpace]:
    """The isometric two-point spaces {0, e1} and {0, (a^{1/p}, (1-a)^{1/p})}.

    Both have a single distance of 1 under the l_p norm (up to float
    construction of the second point), so their GH distance vanishes.
    """
    if not (0.0 < a < 1.0):
        raise ConfigurationError(f"a must lie in (0, 1), got {a}")
    if not (math.isfinite(p) and p >= 1.0):
        raise ConfigurationError(f"p must be >= 1, got {p}")
    d1 = lp_norm(np.array([1.0, 0.0]), p)
    d2 = lp_norm(np.array([a ** (1.0 / p), (1.0 - a) ** (1.0 / p)]), p)
    F = FiniteMetricSpace(np.array([[0.0, d1], [d1, 0.0]]))
    H = FiniteMetricSpace(np.array([[0.0, d2], [d2, 0.0]]))
    return F, H
