"""High-precision p-radius estimation for tuples of real matrices.

The main entry point is :func:`estimate_p_radius`, which computes the
determinant-method estimates ``1/r_n`` from traces of a transfer operator.
Comparison estimators live in :mod:`pradius.baselines`.
"""

from .determinant import (
    DeterminantApproximant,
    PRadiusEstimate,
    PrecisionWarning,
    TraceSequence,
    det_coefficients,
    derived_quantity_jp,
    estimate_p_radius,
    partition_sum_coefficient,
    smallest_positive_root,
    trace_sequence,
)
from .linalg import (
    DEFAULT_PRECISION,
    BudgetError,
    ConvergenceError,
    DimensionError,
    DominanceError,
    Matrix,
    MatrixTuple,
    PRadiusError,
    working_precision,
)
from .problem import ProblemSpec, load_problem
from .validation import ValidationReport, check_domination, check_positive, validate, zero_radius_check

__all__ = [
    "DEFAULT_PRECISION",
    "BudgetError",
    "ConvergenceError",
    "DeterminantApproximant",
    "DimensionError",
    "DominanceError",
    "Matrix",
    "MatrixTuple",
    "PRadiusError",
    "PRadiusEstimate",
    "PrecisionWarning",
    "ProblemSpec",
    "TraceSequence",
    "ValidationReport",
    "check_domination",
    "check_positive",
    "det_coefficients",
    "derived_quantity_jp",
    "estimate_p_radius",
    "load_problem",
    "partition_sum_coefficient",
    "smallest_positive_root",
    "trace_sequence",
    "validate",
    "working_precision",
    "zero_radius_check",
]
