"""The determinant method on the pair A1 = [[1/5, 0], [1/5, 3/5]], A2 = [[3/5, 1/5], [0, 1/5]].

Run with ``python demos/01_determinant_method.py [n_max]``.  Order 20 takes
about 15 seconds and gives roughly 50 correct digits.
"""

import sys
import time

import mpmath

from pradius import derived_quantity_jp, estimate_p_radius, load_problem, trace_sequence

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 12
spec = load_problem("jp-pair")
pair = spec.matrix_tuple()
p = spec.p

# Step 1: the traces t_n.  Each is a sum over the 2^n words of a closed-form
# function of the leading eigenvalue of the product, accumulated exactly.
start = time.perf_counter()
traces = trace_sequence(pair, p, n_max)
print(f"traces up to n={n_max} in {time.perf_counter() - start:.2f}s")
for n in (1, 2, 3):
    print(f"  t_{n} = {mpmath.nstr(traces[n], 30)}")

# Step 2: Newton's identities turn traces into Taylor coefficients of the
# determinant; the smallest positive root r_n of each truncation gives 1/r_n.
print(f"\n n  1/r_n (p = {p})")
for est in estimate_p_radius(pair, p, n_max, traces=traces):
    if est.value is None:
        print(f"{est.n:2d}  (truncated determinant has no positive root)")
    else:
        print(f"{est.n:2d}  {mpmath.nstr(est.value, 26)}")

# Odd orders converge far faster than the error of any single truncation
# would suggest.  The successive differences shrink super-exponentially.
best = est
print(f"\nlast successive difference: {mpmath.nstr(best.diagnostics['successive_difference'], 3)}")
print(f"(p+1)/p - log2(rho)/p = {mpmath.nstr(derived_quantity_jp(best, p), 40)}")
