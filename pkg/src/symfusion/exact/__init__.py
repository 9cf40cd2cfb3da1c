"""Exact integer/rational linear algebra and polynomial machinery."""
from .factor import UnsupportedDegree, factor_rational_poly
from .linalg import (
    DimensionError,
    RationalMatrix,
    char_poly,
    int_det,
    inverse,
    primitive_int_vector,
    rank,
    rank_and_kernel,
    solve,
)
from .poly import Poly, discriminant, is_square, poly_product, resultant
from .roots import (
    Interval,
    InvalidInput,
    RealRootInterval,
    isolate_real_roots,
    perron_root,
    root_minimal_polynomial,
)

__all__ = [
    "DimensionError",
    "Interval",
    "InvalidInput",
    "Poly",
    "RationalMatrix",
    "RealRootInterval",
    "UnsupportedDegree",
    "char_poly",
    "discriminant",
    "factor_rational_poly",
    "int_det",
    "inverse",
    "is_square",
    "isolate_real_roots",
    "perron_root",
    "poly_product",
    "primitive_int_vector",
    "rank",
    "rank_and_kernel",
    "resultant",
    "root_minimal_polynomial",
    "solve",
]
