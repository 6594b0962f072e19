"""Every estimator side by side on one pair at p = 3.5.

The rigorous brackets (naive and convex-programme bounds) close slowly;
the log-convexity bound is a single number; the mesh and Monte Carlo
estimates are heuristics.  The determinant method is far ahead.
"""

import mpmath

from pradius import estimate_p_radius, load_problem
from pradius.baselines import (
    MonteCarloConfig,
    jp_bounds,
    logconvex_upper,
    mesh_estimate,
    monte_carlo_estimate,
    naive_bounds,
)

pair = load_problem("jp-pair").matrix_tuple()
p = "3.5"
reference = estimate_p_radius(pair, p, 12)[-1].value
print(f"determinant method, n = 12: {mpmath.nstr(reference, 22)}\n")

print(" n  naive lower    naive upper    JP lower       JP upper")
for b in naive_bounds(pair, p, 8, 6):
    jp = jp_bounds(pair, 3.5, b.n)
    low = "-" if b.lower is None else f"{float(b.lower):.10f}"
    print(f"{b.n:2d}  {low:<13}  {float(b.upper):.10f}   {jp.lower:.10f}   {jp.upper:.10f}")

print(f"\nlog-convexity upper bound: {mpmath.nstr(logconvex_upper(pair, p), 12)}")

print("\nmesh size  estimate      error")
for size in (10, 100, 1000, 10000, 100000):
    value = mesh_estimate(pair, 3.5, size)
    print(f"{size:9d}  {value:.10f}  {value - float(reference):+.1e}")

# Monte Carlo error falls like 1/sqrt(runs); the seed makes each line reproducible.
print("\nlength  runs  Monte Carlo")
for length, runs in ((100, 100), (1000, 100), (1000, 1000)):
    value = monte_carlo_estimate(pair, 3.5, MonteCarloConfig(length, runs, seed=1))
    print(f"{length:6d}  {runs:4d}  {value:.7f}")
