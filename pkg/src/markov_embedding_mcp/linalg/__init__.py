"""Fixed-dimension matrix kernel."""

from .kernel import (
    JordanStructure,
    Mat,
    RealBlock,
    RealJordanDecomposition,
    Spectrum,
    Tolerances,
    as_mat,
    char_poly,
    eigenvalues,
    exp_residual,
    is_generator,
    is_markov,
    jordan_structure,
    mat_exp,
    matrix_scale,
    poly_in,
    principal_log,
    real_jordan,
)
from .roots import monic_roots

__all__ = [
    "JordanStructure",
    "Mat",
    "RealBlock",
    "RealJordanDecomposition",
    "Spectrum",
    "Tolerances",
    "as_mat",
    "char_poly",
    "eigenvalues",
    "exp_residual",
    "is_generator",
    "is_markov",
    "jordan_structure",
    "mat_exp",
    "matrix_scale",
    "monic_roots",
    "poly_in",
    "principal_log",
    "real_jordan",
]
