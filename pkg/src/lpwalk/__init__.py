"""lpwalk: high-dimensional random walks as finite l_p metric spaces.

Simulates walks with d^{-1/p}-scaled i.i.d. increments, tracks the
predictable/martingale split of the p-th power norm along the path, builds
finite l_p metric spaces from grid snapshots, and measures their proximity
to the deterministic limit space ([0,1], sigma M_p^{1/p} sqrt|t-s|) through
sup-statistics and Gromov-Hausdorff bounds.
"""

__version__ = "0.1.0"

from .analytic_limits import (
    CovarianceMatrix2,
    LimitSpace,
    bivariate_gaussian_abs_moment,
    bivariate_moment_mc_oracle,
    limit_distance,
    mp_closed_form,
)
from .errors import ConfigurationError, LpwalkError, ResourceLimitError
from .experiments import (
    SweepPlan,
    run_bivariate_moment_convergence,
    run_convergence_sweep,
    run_martingale_check,
    run_moment_convergence,
)
from .gh_metrics import (
    Correspondence,
    distortion,
    gh_exact_small,
    gh_lower_bound_diameter,
    gh_upper_bound_to_limit,
)
from .increments import (
    IncrementLaw,
    SeedSpec,
    centered_exponential,
    law_abs_moment,
    law_from_string,
    law_sigma,
    rademacher,
    sample_xi_block,
    scaled_rademacher,
    standard_normal,
    uniform_sym,
)
from .path_metrics import (
    FiniteMetricSpace,
    limit_sample_space,
    lp_norm,
    path_metric_space,
    read_metric_space_csv,
    write_metric_space_csv,
)
from .walk_engine import (
    DecompositionTrace,
    GridSnapshot,
    WalkConfig,
    pointwise_norm_statistic,
    simulate_decomposition,
    simulate_grid,
    sup_difference_statistic,
    sup_norm_statistic,
)

__all__ = [
    "ConfigurationError",
    "Correspondence",
    "CovarianceMatrix2",
    "DecompositionTrace",
    "FiniteMetricSpace",
    "GridSnapshot",
    "IncrementLaw",
    "LimitSpace",
    "LpwalkError",
    "ResourceLimitError",
    "SeedSpec",
    "SweepPlan",
    "WalkConfig",
    "bivariate_gaussian_abs_moment",
    "bivariate_moment_mc_oracle",
    "centered_exponential",
    "distortion",
    "gh_exact_small",
    "gh_lower_bound_diameter",
    "gh_upper_bound_to_limit",
    "law_abs_moment",
    "law_from_string",
    "law_sigma",
    "limit_distance",
    "limit_sample_space",
    "lp_norm",
    "mp_closed_form",
    "path_metric_space",
    "pointwise_norm_statistic",
    "rademacher",
    "read_metric_space_csv",
    "run_bivariate_moment_convergence",
    "run_convergence_sweep",
    "run_martingale_check",
    "run_moment_convergence",
    "sample_xi_block",
    "scaled_rademacher",
    "simulate_decomposition",
    "simulate_grid",
    "standard_normal",
    "sup_difference_statistic",
    "sup_norm_statistic",
    "uniform_sym",
    "write_metric_space_csv",
]
