"""Gromov-Hausdorff distances: the isometric two-point pair and path bounds.

Two things are shown.  First, the classic pitfall: {0, e1} and
{0, (a^{1/p}, (1-a)^{1/p})} cannot be mapped onto each other by an
isometry of l_p when p != 2, yet as metric spaces they are isometric, so
their GH distance vanishes.  Second, a simulated path's distance matrix is
compared against the limit space, giving the distortion-driven upper
bounds 2D and D/2 next to the diameter lower bound.
"""

from lpwalk import (
    LimitSpace,
    SeedSpec,
    WalkConfig,
    gh_exact_small,
    gh_lower_bound_diameter,
    gh_upper_bound_to_limit,
    limit_sample_space,
    path_metric_space,
    rademacher,
    simulate_grid,
)
from lpwalk.gh_metrics import two_point_example_spaces

print("Isometric two-point spaces (GH must vanish)")
for p in (1.0, 1.5, 3.0):
    for a in (0.25, 0.9):
        F, H = two_point_example_spaces(p, a)
        print(f"  p={p:g}, a={a:g}: GH = {gh_exact_small(F, H):.2e}")

print("\nOne point vs two points at distance 0.8 (GH = 0.4 exactly)")
import numpy as np

from lpwalk import FiniteMetricSpace

one = FiniteMetricSpace(np.zeros((1, 1)))
two = FiniteMetricSpace(np.array([[0.0, 0.8], [0.8, 0.0]]))
print(f"  exact GH       = {gh_exact_small(one, two):.6f}")
print(f"  diameter bound = {gh_lower_bound_diameter(one, two):.6f}")

print("\nSimulated path vs the limit space (n = d = 1000, p = 2)")
config = WalkConfig(n=1000, d=1000, p=2.0, law=rademacher(), seed=SeedSpec(7), m=64)
snap = simulate_grid(config)
limit = LimitSpace(sigma=1.0, p=2.0)
path = path_metric_space(snap)
bound = gh_upper_bound_to_limit(path, limit)
print(f"  grid sup D                 = {bound.grid_sup:.4f}")
print(f"  paper-style upper bound 2D = {bound.paper_bound:.4f}")
print(f"  correspondence bound D/2   = {bound.corr_bound:.4f}")
print(f"  discretization allowance   = {bound.allowance:.4f}")
print(f"  diameter lower bound       = "
      f"{gh_lower_bound_diameter(path, limit_sample_space(64, limit)):.4f}")
