"""Moment convergence of normalized sums, univariate and bivariate.

The normalized sum S_n / (sigma sqrt n) of centered i.i.d. draws has
absolute p-th moments converging to the standard normal's M_p, and the
product moment E|S_n/sqrt n|^p |Z_n/sqrt n|^p of a correlated pair
converges to the bivariate Gaussian moment E|eta1 eta2|^p.  Both limits
are computed exactly here and compared against Monte Carlo tables.
"""

import math

from lpwalk import (
    CovarianceMatrix2,
    bivariate_gaussian_abs_moment,
    mp_closed_form,
    rademacher,
    run_bivariate_moment_convergence,
    run_moment_convergence,
)

print("Standard-normal absolute moments M_p")
for p in (1.0, 1.5, 2.0, 3.0, 4.0):
    print(f"  M_{p:g} = {mp_closed_form(p):.10f}")
print(f"  (M_1 = sqrt(2/pi) = {math.sqrt(2/math.pi):.10f}, M_4 = 3)")

print("\nUnivariate: Rademacher steps, p = 1, limit M_1")
table = run_moment_convergence(rademacher(), 1.0, [100, 1000, 10000], 20000, seed=1)
for row in table.rows:
    print(
        f"  n={row.n:6d}  E|S_n/sqrt(n)|^1 = {row.estimate:.5f} "
        f"(se {row.stderr:.5f}, limit {row.limit:.5f})"
    )

print("\nBivariate: correlated Rademacher pair, rho = 0.5, p = 2")
cov = CovarianceMatrix2.from_correlation(0.5)
print(f"  Gaussian limit E|eta1 eta2|^2 = {bivariate_gaussian_abs_moment(2.0, cov):.6f}")
print("  (Wick identity: 1 + 2 rho^2 = 1.5)")
table = run_bivariate_moment_convergence(rademacher(), 2.0, 0.5, [100, 1000, 10000], 20000, seed=2)
for row in table.rows:
    print(
        f"  n={row.n:6d}  E|S_n Z_n / n|^2 = {row.estimate:.5f} "
        f"(se {row.stderr:.5f}, limit {row.limit:.5f})"
    )
