"""Correspondence distortion, exact small-space GH, and the limit bounds."""

import itertools
import math

import numpy as np
import pytest

from lpwalk.analytic_limits import LimitSpace
from lpwalk.errors import ConfigurationError
from lpwalk.gh_metrics import (
    Correspondence,
    GhUpperBound,
    distortion,
    gh_exact_small,
    gh_lower_bound_diameter,
    gh_upper_bound_to_limit,
    two_point_example_spaces,
)
from lpwalk.path_metrics import FiniteMetricSpace, limit_sample_space, pairwise_lp_matrix


def random_space(rng, k: int, dim: int = 3) -> FiniteMetricSpace:
    pts = rng.uniform(-1.0, 1.0, size=(k, dim))
    return FiniteMetricSpace(pairwise_lp_matrix(pts, 2.0))


def gh_by_subset_enumeration(A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """Independent oracle: minimize distortion over all total relations."""
    cells = list(itertools.product(range(A.k), range(B.k)))
    best = math.inf
    for mask in range(1, 1 << len(cells)):
        pairs = tuple(cells[i] for i in range(len(cells)) if mask >> i & 1)
        corr = Correspondence(pairs)
        if not corr.is_total(A.k, B.k):
            continue
        best = min(best, distortion(corr, A, B))
    return 0.5 * best


class TestDistortion:
    def test_identity_is_zero(self):
        rng = np.random.default_rng(1)
        A = random_space(rng, 4)
        assert distortion(Correspondence.identity(4), A, A) == 0.0

    def test_two_point_spaces(self):
        A = FiniteMetricSpace(np.array([[0.0, 0.7], [0.7, 0.0]]))
        B = FiniteMetricSpace(np.array([[0.0, 1.9], [1.9, 0.0]]))
        corr = Correspondence(((0, 0), (1, 1)))
        assert distortion(corr, A, B) == pytest.approx(1.2, rel=1e-15)

    def test_three_point_hand_enumeration(self):
        A = FiniteMetricSpace(np.array([[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]], dtype=float))
        B = FiniteMetricSpace(np.array([[0, 2, 1], [2, 0, 2.5], [1, 2.5, 0]], dtype=float))
        corr = Correspondence(((0, 1), (1, 0), (2, 2)))
        # pairs: (0,1)-(1,0): |d_A(0,1) - d_B(1,0)| = 1; (0,1)-(2,2): |2 - 2.5| = .5;
        # (1,0)-(2,2): |1.5 - 1| = .5; diagonal zeros
        assert distortion(corr, A, B) == pytest.approx(1.0, rel=1e-15)

    def test_rejects_non_total(self):
        A = FiniteMetricSpace(np.array([[0.0, 1.0], [1.0, 0.0]]))
        with pytest.raises(ConfigurationError):
            distortion(Correspondence(((0, 0),)), A, A)


class TestGhExactSmall:
    def test_self_distance_zero(self):
        rng = np.random.default_rng(7)
        for k in (1, 2, 3, 4, 5):
            A = random_space(rng, k)
            assert gh_exact_small(A, A) == 0.0

    def test_two_point_isometric_example(self):
        for p in (1.0, 1.5, 2.0, 3.0):
            for a in (0.25, 0.5, 0.9):
                F, H = two_point_example_spaces(p, a)
                assert abs(gh_exact_small(F, H)) <= 1e-12, (p, a)

    def test_one_vs_two_points(self):
        delta = 0.8
        A = FiniteMetricSpace(np.zeros((1, 1)))
        B = FiniteMetricSpace(np.array([[0.0, delta], [delta, 0.0]]))
        assert gh_exact_small(A, B) == pytest.approx(delta / 2.0, abs=1e-12)
        assert gh_by_subset_enumeration(A, B) == pytest.approx(delta / 2.0, abs=1e-15)

    def test_matches_subset_enumeration(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            A = random_space(rng, int(rng.integers(1, 4)))
            B = random_space(rng, int(rng.integers(1, 4)))
            assert gh_exact_small(A, B) == pytest.approx(
                gh_by_subset_enumeration(A, B), abs=1e-12
            )

    def test_symmetry_and_triangle(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            A, B, C = (random_space(rng, int(rng.integers(1, 4))) for _ in range(3))
            ab, ba = gh_exact_small(A, B), gh_exact_small(B, A)
            assert ab == pytest.approx(ba, abs=1e-12)
            ac, cb = gh_exact_small(A, C), gh_exact_small(C, B)
            assert ab <= ac + cb + 1e-12

    def test_sandwich_bounds(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            A = random_space(rng, int(rng.integers(1, 5)))
            B = random_space(rng, int(rng.integers(1, 5)))
            exact = gh_exact_small(A, B)
            assert gh_lower_bound_diameter(A, B) <= exact + 1e-12
            # any total correspondence upper-bounds: full relation
            full = Correspondence(tuple(itertools.product(range(A.k), range(B.k))))
            assert exact <= 0.5 * distortion(full, A, B) + 1e-12

    def test_cap_refusal(self):
        rng = np.random.default_rng(13)
        big = random_space(rng, 6)
        small = random_space(rng, 2)
        with pytest.raises(ConfigurationError):
            gh_exact_small(big, small)


class TestLowerBound:
    def test_examples(self):
        rng = np.random.default_rng(14)
        A = random_space(rng, 3)
        assert gh_lower_bound_diameter(A, A) == 0.0
        one = FiniteMetricSpace(np.zeros((1, 1)))
        two = FiniteMetricSpace(np.array([[0.0, 0.4], [0.4, 0.0]]))
        assert gh_lower_bound_diameter(one, two) == pytest.approx(0.2)
        assert gh_lower_bound_diameter(one, two) == pytest.approx(gh_exact_small(one, two))


class TestUpperBoundToLimit:
    def test_limit_sample_has_zero_grid_sup(self):
        limit = LimitSpace(sigma=1.0, p=2.0)
        path = limit_sample_space(16, limit)
        bound = gh_upper_bound_to_limit(path, limit)
        assert bound.grid_sup <= 1e-14
        assert bound.paper_bound <= 2e-14 and bound.corr_bound <= 1e-14
        assert bound.allowance == pytest.approx(limit.modulus * math.sqrt(2.0 / 16), rel=1e-12)

    def test_zero_walk_bounds(self):
        limit = LimitSpace(sigma=1.0, p=2.0)
        k = 11
        times = np.arange(k) / (k - 1)
        path = FiniteMetricSpace(np.zeros((k, k)), labels=times)
        bound = gh_upper_bound_to_limit(path, limit)
        assert bound.grid_sup == pytest.approx(1.0, rel=1e-14)
        assert bound.paper_bound == pytest.approx(2.0, rel=1e-14)
        assert bound.corr_bound == pytest.approx(0.5, rel=1e-14)

    def test_two_point_path_hand_values(self):
        limit = LimitSpace(sigma=1.0, p=2.0)
        path = FiniteMetricSpace(
            np.array([[0.0, 0.9], [0.9, 0.0]]), labels=np.array([0.0, 1.0])
        )
        bound = gh_upper_bound_to_limit(path, limit)
        assert bound.grid_sup == pytest.approx(0.1, rel=1e-12)
        assert bound.paper_bound == pytest.approx(0.2, rel=1e-12)
        assert bound.corr_bound == pytest.approx(0.05, rel=1e-12)

    def test_factor_four_relation(self):
        rng = np.random.default_rng(15)
        limit = LimitSpace(sigma=1.0, p=1.5)
        times = np.sort(rng.uniform(0, 1, size=6))
        times[0], times[-1] = 0.0, 1.0
        pts = rng.normal(size=(6, 4))
        path = FiniteMetricSpace(pairwise_lp_matrix(pts, 1.5), labels=times)
        bound = gh_upper_bound_to_limit(path, limit)
        assert bound.paper_bound == pytest.approx(4.0 * bound.corr_bound, rel=1e-15)
        assert bound.corr_bound < bound.paper_bound

    def test_rejects_unlabeled(self):
        limit = LimitSpace(sigma=1.0, p=2.0)
        path = FiniteMetricSpace(np.zeros((2, 2)))
        with pytest.raises(ConfigurationError):
            gh_upper_bound_to_limit(path, limit)
