"""Comparison estimators for the p-radius."""

from .jp import JPBounds, jp_bounds
from .kronecker import kronecker_estimate, kronecker_is_exact, logconvex_upper
from .mesh import MeshOperator, mesh_estimate, mesh_operator
from .montecarlo import MonteCarloConfig, monte_carlo_estimate
from .naive import (
    BoundPair,
    NaiveConfig,
    naive_bounds,
    naive_lower,
    naive_upper,
    norm_power_sums,
    spectral_norm,
)

__all__ = [
    "BoundPair",
    "JPBounds",
    "MeshOperator",
    "MonteCarloConfig",
    "NaiveConfig",
    "jp_bounds",
    "kronecker_estimate",
    "kronecker_is_exact",
    "logconvex_upper",
    "mesh_estimate",
    "mesh_operator",
    "monte_carlo_estimate",
    "naive_bounds",
    "naive_lower",
    "naive_upper",
    "norm_power_sums",
    "spectral_norm",
]
