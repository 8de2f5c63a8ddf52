"""Tolerance policy.  Every numeric comparison in the package routes through here.

Absolute tolerances cover quantities that are O(1) by construction (norms,
unitarity residues); the scale-relative ones cover quantities whose error
budget grows with the magnitude of the function values involved.
"""

from __future__ import annotations

__all__ = [
    "TOL_HERM",
    "TOL_UNITARY",
    "TOL_NORM",
    "TOL_SPEC",
    "DEFAULT_GRID_N",
    "MAX_DIM",
    "VIOLATION_FACTOR",
    "OPEN_INTERVAL_SHRINK",
    "tol_calc",
    "tol_sync",
    "tol_ineq",
]

# absolute: Hermitian-symmetry residues and real-part checks of quadratic forms
TOL_HERM = 1e-10
# absolute: eigenvector-matrix unitarity, max |U*U - I|
TOL_UNITARY = 1e-10
# absolute: state norms and ensemble normalization sums
TOL_NORM = 1e-10
# eigenvalue containment slack: clamped inside, hard error beyond
TOL_SPEC = 1e-8
# resolution of classification grids
DEFAULT_GRID_N = 128
# desk scale; the inequalities are dimension-free
MAX_DIM = 16
# a gap below -VIOLATION_FACTOR * tol_ineq counts as a genuine violation
VIOLATION_FACTOR = 10.0
# relative endpoint pull-in used to stand in for open intervals
OPEN_INTERVAL_SHRINK = 1e-3


def tol_calc(scale: float) -> float:
    """Scale-relative tolerance for functional-calculus identities."""
    return 1e-9 * (1.0 + abs(scale))


def tol_sync(max_abs_product: float) -> float:
    """Tolerance for grid sign classification; absorbs rounding at boundary exponents."""
    return 1e-12 * (1.0 + abs(max_abs_product))


def tol_ineq(lhs: float, rhs: float) -> float:
    """Tolerance for inequality gaps; products of expectations accumulate relative error."""
    return 1e-9 * (1.0 + abs(lhs) + abs(rhs))
