"""Exact arithmetic over F_p(x_1, ..., x_m)."""

from .field import FieldDescriptor, is_prime
from .linalg import ColumnEchelon, matrix_rank, matrix_rank_kernel, solve_linear
from .poly import MultiPoly, poly_arith
from .ratfunc import (
    FpCoordinates,
    RatFunc,
    fp_coordinates,
    frobenius_power,
    frobenius_root,
    ratfunc_arith,
)

__all__ = [
    "ColumnEchelon",
    "FieldDescriptor",
    "FpCoordinates",
    "MultiPoly",
    "RatFunc",
    "fp_coordinates",
    "frobenius_power",
    "frobenius_root",
    "is_prime",
    "matrix_rank",
    "matrix_rank_kernel",
    "poly_arith",
    "ratfunc_arith",
    "solve_linear",
]
