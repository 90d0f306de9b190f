"""Arithmetic and GIT-weight computations for moduli of quasi-polarized K3 surfaces."""

from .nl_rank import rank_report, rank_via_gauss, rank_via_jacobi
from .lattice import canonical_primitive, invariants_of, lambda_gram, nl_to_heegner

__version__ = "0.1.0"

__all__ = [
    "rank_report",
    "rank_via_gauss",
    "rank_via_jacobi",
    "canonical_primitive",
    "invariants_of",
    "lambda_gram",
    "nl_to_heegner",
]
