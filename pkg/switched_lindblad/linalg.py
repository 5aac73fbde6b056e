"""Module with the dense linear algebra primitives used by the other modules.

All functions are pure: they never modify their arguments and return new arrays.
"""

from __future__ import annotations

__all__: list[str] = [
    "ComplexMatrix",
    "HermitianEigen",
    "RealMatrix",
    "as_complex_matrix",
    "as_real_matrix",
    "cholesky",
    "eigh",
    "expm",
    "is_symmetric",
    "nullspace",
    "require_square",
    "solve_linear",
    "spectral_norm",
    "spectral_radius",
]

import logging
import warnings
from typing import TYPE_CHECKING, NamedTuple, TypeVar, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.linalg import lapack

from switched_lindblad.constants import (
    HERMITIAN_TOLERANCE,
    SINGULAR_PIVOT_TOLERANCE,
    SYMMETRY_TOLERANCE,
)
from switched_lindblad.errors import (
    NotHermitianError,
    NotPositiveDefiniteError,
    NotSquareError,
    SingularMatrixError,
)

if TYPE_CHECKING:
    from typing import Any

RealMatrix = npt.NDArray[np.float64]
ComplexMatrix = npt.NDArray[np.complex128]
_MatrixT = TypeVar("_MatrixT", bound=Union[RealMatrix, ComplexMatrix])

linalg_logger: logging.Logger = logging.getLogger(__name__)


class HermitianEigen(NamedTuple):
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    eigenvalues: RealMatrix
    eigenvectors: ComplexMatrix


def as_real_matrix(values: Any, *, name: str = "matrix") -> RealMatrix:
    """Return ``values`` as a finite two dimensional ``float64`` array."""
    matrix: RealMatrix = np.array(values, dtype=np.float64)
    if matrix.ndim != 2:  # noqa: PLR2004
        msg: str = f"{name} must be two dimensional, got {matrix.ndim} dimension(s)"
        raise ValueError(msg)
    if not np.all(np.isfinite(matrix)):
        msg = f"{name} contains NaN or infinite entries"
        raise ValueError(msg)
    return matrix


def as_complex_matrix(values: Any, *, name: str = "matrix") -> ComplexMatrix:
    """Return ``values`` as a finite two dimensional ``complex128`` array."""
    matrix: ComplexMatrix = np.array(values, dtype=np.complex128)
    if matrix.ndim != 2:  # noqa: PLR2004
        msg: str = f"{name} must be two dimensional, got {matrix.ndim} dimension(s)"
        raise ValueError(msg)
    if not np.all(np.isfinite(matrix)):
        msg = f"{name} contains NaN or infinite entries"
        raise ValueError(msg)
    return matrix


def require_square(matrix: npt.NDArray[Any]) -> int:
    """Return the order of ``matrix`` or raise if it is not square."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:  # noqa: PLR2004
        raise NotSquareError(matrix.shape)
    return int(matrix.shape[0])


def is_symmetric(matrix: RealMatrix, tol: float = SYMMETRY_TOLERANCE) -> bool:
    """Check ``matrix`` equals its transpose relative to its Frobenius norm."""
    scale: float = max(1.0, float(np.linalg.norm(matrix)))
    return float(np.linalg.norm(matrix - matrix.T)) <= tol * scale


def expm(matrix: _MatrixT) -> _MatrixT:
    """Return the matrix exponential (Pade scaling and squaring)."""
    require_square(matrix)
    return scipy.linalg.expm(matrix)  # type: ignore[no-any-return]


def eigh(matrix: ComplexMatrix | RealMatrix) -> HermitianEigen:
    """Return the spectral decomposition of a Hermitian matrix."""
    require_square(matrix)
    scale: float = float(np.linalg.norm(matrix))
    residual: float = float(np.linalg.norm(matrix - matrix.conj().T))
    if residual > HERMITIAN_TOLERANCE * scale:
        raise NotHermitianError(residual)
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (matrix + matrix.conj().T))
    return HermitianEigen(eigenvalues, eigenvectors)


def solve_linear(matrix: RealMatrix, rhs: RealMatrix) -> RealMatrix:
    """Solve ``matrix @ X = rhs`` by LU decomposition with partial pivoting."""
    order: int = require_square(matrix)
    if rhs.shape[0] != order:
        msg: str = f"Right-hand side with {rhs.shape[0]} rows does not fit order {order}"
        raise ValueError(msg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(matrix)
    pivot: float = float(np.min(np.abs(np.diag(lu)))) if order else 1.0
    scale: float = float(np.max(np.abs(matrix))) if order else 1.0
    if pivot <= SINGULAR_PIVOT_TOLERANCE * max(scale, 1.0):
        linalg_logger.debug("Singular pivot %.3e (scale %.3e)", pivot, scale)
        raise SingularMatrixError(pivot)
    return scipy.linalg.lu_solve((lu, piv), rhs)  # type: ignore[no-any-return]


def cholesky(matrix: RealMatrix) -> RealMatrix:
    """Return the lower triangular Cholesky factor of a symmetric matrix.

    Raises ``NotPositiveDefiniteError`` carrying the 1-based index of the first
    leading minor which is not positive.
    """
    require_square(matrix)
    if not is_symmetric(matrix):
        msg: str = "Cholesky factorization requires a symmetric matrix"
        raise ValueError(msg)
    factor, info = lapack.dpotrf(0.5 * (matrix + matrix.T), lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefiniteError(int(info))
    if info < 0:  # pragma: no cover
        msg = f"Illegal argument {-info} passed to LAPACK dpotrf"
        raise ValueError(msg)
    return factor  # type: ignore[no-any-return]


def nullspace(matrix: RealMatrix, tol: float) -> RealMatrix:
    """Return an orthonormal basis (as columns) of the numerical kernel.

    The kernel is spanned by the right singular vectors whose singular value
    does not exceed ``tol``.
    """
    if tol <= 0:
        msg: str = f"Tolerance must be positive, got {tol}"
        raise ValueError(msg)
    cols: int = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(cols)
    _, singular_values, vh = scipy.linalg.svd(matrix, full_matrices=True)
    rank: int = int(np.count_nonzero(singular_values > tol))
    return vh[rank:].conj().T  # type: ignore[no-any-return]


def spectral_norm(matrix: RealMatrix) -> float:
    """Return the largest singular value, computed as ``sqrt(max eig(M^T M))``."""
    if matrix.size == 0:
        return 0.0
    gram: RealMatrix = matrix.T @ matrix
    largest: float = float(eigh(gram).eigenvalues[-1])
    return float(np.sqrt(max(largest, 0.0)))


def spectral_radius(matrix: RealMatrix) -> float:
    """Return the largest eigenvalue modulus of a general square matrix."""
    require_square(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))
