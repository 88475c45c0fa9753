"""Heuristic Rating Estimation for (possibly incomplete) pairwise comparisons."""

__version__ = "0.1.0"

from .baselines import evm, gmm, harker_evm, incomplete_gmm
from .consistency import consistent_completion, harker_ci, harker_matrix, saaty_ci
from .hre import (ApplicabilityReport, LinearSystem, PriorityVector, RankResult, Theorem, Variant,
                  assemble, assemble_arithmetic_complete, assemble_arithmetic_incomplete,
                  assemble_geometric_complete, assemble_geometric_incomplete, check_applicability, rank)
from .numerics import gershgorin_excludes_zero, scaled_shift_radius, solve, spectral_radius
from .pcm import (ComparisonGraph, HreProblem, PCMatrix, comparison_graph, is_irreducible,
                  missing_counts, validate)

__all__ = [
    "ApplicabilityReport", "ComparisonGraph", "HreProblem", "LinearSystem", "PCMatrix",
    "PriorityVector", "RankResult", "Theorem", "Variant", "assemble",
    "assemble_arithmetic_complete", "assemble_arithmetic_incomplete",
    "assemble_geometric_complete", "assemble_geometric_incomplete", "check_applicability",
    "comparison_graph", "consistent_completion", "evm", "gershgorin_excludes_zero", "gmm",
    "harker_ci", "harker_evm", "harker_matrix", "incomplete_gmm", "is_irreducible",
    "missing_counts", "rank", "saaty_ci", "scaled_shift_radius", "solve", "spectral_radius",
    "validate",
]
