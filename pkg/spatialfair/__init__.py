"""
    A Python library for individual spatial fairness of classifier likelihood scores.

    Scores are made fair by fitting c-fair polynomials: polynomials whose coefficient box-bounds guarantee
    that individuals at distance ``d`` receive scores at most ``c*d`` apart. The main entry points can be
    imported directly from top level:

    >>> import spatialfair
    >>> report = spatialfair.fit_distance_fair([0.0, 0.5, 1.0], [0.9, 0.1, 0.8], 1, 2)
    >>> report.audit.passed
    True
    >>> spatialfair.derive_bounds(spatialfair.FairnessConfig(1, 1, dimension=2, mode="zone")).variant
    'planar_euclidean_linear'

"""

from __future__ import annotations

__version__ = "0.1.0"

from . import bounds as bounds
from . import polynomial as polynomial
from .bounds import FairnessConfig, derive_bounds
from .geometry import compute_dtr, normalize_coords, minkowski_distance
from .metrics import ScoredDataset, pairwise_audit, fitting_error
from .solver import SolverConfig, bvls_solve
from .mechanisms import (fit_fair, fit_distance_fair, fit_zone_fair, select_degree, baseline_threshold,
                         BaselineParams, sweep_tradeoff, predict_scores)

# re-export the main classes and functions.
__all__ = [
    "FairnessConfig", "derive_bounds",
    "compute_dtr", "normalize_coords", "minkowski_distance",
    "ScoredDataset", "pairwise_audit", "fitting_error",
    "SolverConfig", "bvls_solve",
    "fit_fair", "fit_distance_fair", "fit_zone_fair", "select_degree", "baseline_threshold",
    "BaselineParams", "sweep_tradeoff", "predict_scores",
]
