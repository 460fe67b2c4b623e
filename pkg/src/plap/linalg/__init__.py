"""Exact and floating-point dense linear algebra."""
from .eigen import Spectrum, jacobi_eigenvalues, symmetric_spectrum
from .exact import ExactMatrix, format_rational, to_rational
from .ops import (
    block_diag,
    hstack,
    identity_like,
    inverse,
    is_psd_exact,
    is_psd_float,
    kernel_basis,
    pseudoinverse,
    rank,
    same_column_space,
    schur_complement,
    vstack,
    weighted_complement_basis,
    weighted_gram_schmidt,
    zeros_like_shape,
)

__all__ = [
    "ExactMatrix",
    "Spectrum",
    "block_diag",
    "format_rational",
    "hstack",
    "identity_like",
    "inverse",
    "is_psd_exact",
    "is_psd_float",
    "jacobi_eigenvalues",
    "kernel_basis",
    "pseudoinverse",
    "rank",
    "same_column_space",
    "schur_complement",
    "symmetric_spectrum",
    "to_rational",
    "vstack",
    "weighted_complement_basis",
    "weighted_gram_schmidt",
    "zeros_like_shape",
]
