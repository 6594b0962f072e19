"""Validation, probability weights and a 3x3 example.

The determinant method needs every product to have a simple, real,
strictly dominant eigenvalue.  Positive matrices have one (Perron), and so
does any tuple that becomes positive after a common change of basis.
"""

import mpmath

from pradius import MatrixTuple, estimate_p_radius, load_problem, validate
from pradius.baselines import kronecker_estimate

spec = load_problem("jp-pair")
pair = spec.matrix_tuple()

report = validate(pair, spec.conjugator_matrix())
print(f"positive: {report.positive}, positive after X: {report.conjugated_positive}")
print(f"domination exponent (n={report.domination_order}): {mpmath.nstr(report.domination_exponent, 6)}")
print(f"verdict: {report.verdict}  ({report.notes[0]})\n")

# With weights (1/3, 2/3) the sum over words picks up p_w = prod of letter weights.
weighted = pair.with_weights(["1/3", "2/3"])
for est in estimate_p_radius(weighted, "3.5", 9)[-3:]:
    print(f"weighted, n={est.n}: {mpmath.nstr(est.value, 20)}")

# A positive 3x3 pair.  At p = 2 the Kronecker identity gives the exact
# value rho(A1 (x) A1 + A2 (x) A2) to check against.  Convergence in d = 3
# is visibly slower than for 2x2 matrices at the same order.
tri = MatrixTuple.from_rows([
    [["1/2", "1/3", "1/7"], ["1/5", "2/3", "1/11"], ["1/13", "1/4", "3/4"]],
    [["1/3", "1/9", "1/2"], ["1/4", "1/5", "1/6"], ["1/8", "2/3", "1/7"]],
])
print(f"\n3x3 verdict: {validate(tri).verdict}")
exact = kronecker_estimate(tri, 2)
for est in estimate_p_radius(tri, 2, 8)[-3:]:
    value = "no root" if est.value is None else mpmath.nstr(est.value, 20)
    print(f"3x3, p=2, n={est.n}: {value}")
print(f"Kronecker value:     {mpmath.nstr(exact, 20)}")
