"""Dense matrix primitives: products, Gram matrices, SPD solves, pseudoinverse.

All routines work on 2-D float64 arrays and reject non-finite input. The
sample convention throughout the package is columns-as-samples.
"""

import numpy as np
from scipy.linalg import cho_solve

from .errors import DimensionMismatch, SingularMatrix

# Cholesky pivots below PIVOT_RTOL times the largest diagonal entry are
# treated as singular; DEFAULT_PINV_RTOL is the relative singular-value
# cutoff used when falling back to the pseudoinverse.
PIVOT_RTOL = 1e-12
DEFAULT_PINV_RTOL = 1e-10


def as_matrix(values) -> np.ndarray:
    """Coerce to a 2-D float64 array with finite entries."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.isfinite(a).all():
        raise ValueError("matrix contains NaN or Inf")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def gram(features) -> np.ndarray:
    """Gram matrix of the rows of `features`, exactly symmetric.

    The result is assembled from the upper triangle so that symmetry holds
    bitwise, not merely to rounding.
    """
    z = as_matrix(features)
    if z.size == 0:
        raise DimensionMismatch("gram of an empty matrix")
    g = z @ z.T
    return np.triu(g) + np.triu(g, 1).T


def solve_spd_right(rhs, spd) -> np.ndarray:
    """Solve M @ spd = rhs for M, with `spd` symmetric positive definite.

    Uses a Cholesky factorization; never forms an explicit inverse. Raises
    SingularMatrix when the factorization fails or any pivot falls below
    PIVOT_RTOL times the largest diagonal entry, in which case callers fall
    back to the pseudoinverse.
    """
    b = as_matrix(rhs)
    a = as_matrix(spd)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix is {a.shape[0]}x{a.shape[1]}, not square")
    if b.shape[1] != a.shape[0]:
        raise DimensionMismatch(
            f"rhs has {b.shape[1]} columns but the matrix is {a.shape[0]}x{a.shape[0]}"
        )
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    try:
        factor = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"Cholesky factorization failed: {exc}") from exc
    pivots = np.diagonal(factor) ** 2
    if pivots.min() < PIVOT_RTOL * np.diagonal(a).max():
        raise SingularMatrix("pivot below tolerance, matrix is numerically singular")
    return cho_solve((factor, True), b.T).T


def pseudoinverse(matrix, rtol: float = DEFAULT_PINV_RTOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values below `rtol` times the largest are treated as zero, so
    the result is defined for every matrix, including rank-deficient ones.
    """
    z = as_matrix(matrix)
    if z.size == 0:
        raise DimensionMismatch("pseudoinverse of an empty matrix")
    if not rtol > 0:
        raise ValueError("rtol must be positive")
    u, s, vt = np.linalg.svd(z, full_matrices=False)
    cutoff = rtol * s[0]
    inv = np.divide(1.0, s, out=np.zeros_like(s), where=s > cutoff)
    return (vt.T * inv) @ u.T
