"""Exact tools for extremal bivariate sextic truncated moment problems."""

from __future__ import annotations

from .linalg import RatMatrix, psd_check
from .moments import (
    MomentMatrix, MomentSequence, build_moment_matrix, check_consistency_generators, check_recursive,
    check_weak_consistency, moments_from_atoms, riesz, vandermonde,
)
from .poly import GRLEX, LEX, MultiPoly, buchberger, divide, normal_form
from .solver import (
    BasisCase, SolverConfig, SolverReport, Verdict, auxiliary_polynomial, choose_basis_case, classify,
    decide_extremal, degree_one_swap, extract_measure,
)
from .variety import UnivariatePoly, VarietyPoint, compute_variety, isolate_real_roots, solve_system, sylvester_resultant, verify_cardinality

__all__ = [
    "GRLEX", "LEX", "BasisCase", "MomentMatrix", "MomentSequence", "MultiPoly", "RatMatrix", "SolverConfig",
    "SolverReport", "UnivariatePoly", "Verdict", "VarietyPoint", "auxiliary_polynomial", "buchberger",
    "build_moment_matrix", "check_consistency_generators", "check_recursive", "check_weak_consistency",
    "choose_basis_case", "classify", "compute_variety", "decide_extremal", "degree_one_swap", "divide",
    "extract_measure", "isolate_real_roots", "moments_from_atoms", "normal_form", "psd_check", "riesz",
    "solve_system", "sylvester_resultant", "vandermonde", "verify_cardinality",
]
