"""Module with density operators, Hermitian operator bases and distances.

Operator bases are Hilbert-Schmidt orthonormal. The generalized Gell-Mann basis
of dimension ``N`` is ordered as follows:

* ``F_0 = I / sqrt(N)``;
* the symmetric off-diagonal elements ``(|j><k| + |k><j|) / sqrt(2)`` for
  ``j < k`` in lexicographic order;
* the antisymmetric off-diagonal elements ``(-i|j><k| + i|k><j|) / sqrt(2)``
  for ``j < k`` in the same order;
* the diagonal elements
  ``(|0><0| + ... + |l-1><l-1| - l|l><l|) / sqrt(l(l + 1))`` for ``l = 1..N-1``.

For ``N = 2`` this is ``I, sigma_x, sigma_y, sigma_z`` divided by ``sqrt(2)``.
The constant component of every coherence vector is ``Tr(rho F_0) = 1/sqrt(N)``.
"""

from __future__ import annotations

__all__: list[str] = [
    "CoherenceVector",
    "DensityMatrix",
    "OperatorBasis",
    "basis_state",
    "euclidean_distance",
    "from_coherence",
    "gell_mann_basis",
    "hermitian_block_basis",
    "maximally_mixed",
    "pauli",
    "pure_state",
    "subspace_fidelity",
    "tensor",
    "to_coherence",
    "trace_distance",
]

import functools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np

from switched_lindblad.constants import (
    HERMITIAN_TOLERANCE,
    NOT_A_STATE_TOLERANCE,
    PSD_TOLERANCE,
    TRACE_TOLERANCE,
)
from switched_lindblad.errors import (
    DimensionMismatchError,
    NotAProjectorError,
    NotAStateError,
)
from switched_lindblad.linalg import as_complex_matrix, eigh, require_square

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from switched_lindblad.linalg import ComplexMatrix, RealMatrix

states_logger: logging.Logger = logging.getLogger(__name__)

_PAULI: dict[str, ComplexMatrix] = {
    "0": np.eye(2, dtype=np.complex128) / np.sqrt(2),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive semidefinite, trace one operator."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        matrix: ComplexMatrix = as_complex_matrix(self.matrix, name="density matrix")
        require_square(matrix)
        trace: complex = complex(np.trace(matrix))
        if abs(trace - 1) > TRACE_TOLERANCE:
            msg: str = f"trace is {trace:.12g}"
            raise NotAStateError(float("nan"), msg)
        min_eigenvalue: float = float(eigh(matrix).eigenvalues[0])
        if min_eigenvalue < -PSD_TOLERANCE:
            raise NotAStateError(min_eigenvalue)
        object.__setattr__(self, "matrix", 0.5 * (matrix + matrix.conj().T))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """A Hilbert-Schmidt orthonormal basis of Hermitian operators.

    ``elements`` has shape ``(N**2, N, N)``; ``elements[0]`` is ``I/sqrt(N)``
    for bases produced by :func:`gell_mann_basis`.
    """

    dim: int
    elements: ComplexMatrix

    def __len__(self) -> int:
        return int(self.elements.shape[0])

    def gram(self) -> ComplexMatrix:
        """Return the matrix ``Tr(F_j F_k)``."""
        return np.einsum("jab,kba->jk", self.elements, self.elements)

    def components(self, operator: ComplexMatrix) -> npt.NDArray[np.complex128]:
        """Return ``Tr(operator F_k)`` for every basis element."""
        return np.einsum("ab,kba->k", operator, self.elements)

    def combine(self, coefficients: npt.NDArray[np.float64]) -> ComplexMatrix:
        """Return ``sum_k c_k F_k``; accepts a trailing batch of vectors."""
        return np.einsum("...k,kab->...ab", coefficients, self.elements)


@dataclass(frozen=True, eq=False)
class CoherenceVector:
    """The traceless components ``r_j = Tr(rho F_j)``, ``j >= 1``."""

    dim: int
    r: RealMatrix

    def __post_init__(self) -> None:
        r: RealMatrix = np.array(self.r, dtype=np.float64).reshape(-1)
        if r.shape[0] != self.dim**2 - 1:
            raise DimensionMismatchError(self.dim**2 - 1, r.shape[0])
        object.__setattr__(self, "r", r)

    def homogeneous(self) -> RealMatrix:
        """Return ``(1/sqrt(N), r)``, the full vector including ``F_0``."""
        return np.concatenate(([1 / np.sqrt(self.dim)], self.r))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim}, r={self.r!r})"


def pauli(kind: Literal["0", "x", "y", "z"]) -> ComplexMatrix:
    """Return a Pauli matrix; ``"0"`` gives the scaled identity ``I/sqrt(2)``."""
    return _PAULI[kind].copy()


def tensor(*operators: ComplexMatrix) -> ComplexMatrix:
    """Return the Kronecker product of the operators, left factor outermost."""
    return functools.reduce(np.kron, operators)


def basis_state(dim: int, index: int) -> ComplexMatrix:
    """Return the projector ``|index><index|`` on a ``dim`` dimensional space."""
    projector: ComplexMatrix = np.zeros((dim, dim), dtype=np.complex128)
    projector[index, index] = 1
    return projector


def pure_state(amplitudes: Sequence[complex]) -> DensityMatrix:
    """Return ``|psi><psi|`` for the normalized vector of ``amplitudes``."""
    psi: npt.NDArray[np.complex128] = np.asarray(amplitudes, dtype=np.complex128)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    """Return ``I/dim``."""
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim)


def hermitian_block_basis(dim: int) -> ComplexMatrix:
    """Return the ``dim**2`` Gell-Mann elements as an array; ``dim`` may be 1."""
    if dim == 1:
        return np.ones((1, 1, 1), dtype=np.complex128)
    elements: list[ComplexMatrix] = [np.eye(dim, dtype=np.complex128) / np.sqrt(dim)]
    pairs: list[tuple[int, int]] = [
        (j, k) for j in range(dim) for k in range(j + 1, dim)
    ]
    for j, k in pairs:
        element: ComplexMatrix = np.zeros((dim, dim), dtype=np.complex128)
        element[j, k] = element[k, j] = 1 / np.sqrt(2)
        elements.append(element)
    for j, k in pairs:
        element = np.zeros((dim, dim), dtype=np.complex128)
        element[j, k] = -1j / np.sqrt(2)
        element[k, j] = 1j / np.sqrt(2)
        elements.append(element)
    for level in range(1, dim):
        diagonal: RealMatrix = np.zeros(dim)
        diagonal[:level] = 1
        diagonal[level] = -level
        elements.append(
            np.diag(diagonal / np.sqrt(level * (level + 1))).astype(complex),
        )
    return np.array(elements)


def gell_mann_basis(dim: int) -> OperatorBasis:
    """Return the orthonormal generalized Gell-Mann basis (see module docs)."""
    if dim < 2:  # noqa: PLR2004
        msg: str = f"Gell-Mann bases need dimension >= 2, got {dim}"
        raise ValueError(msg)
    return OperatorBasis(dim, hermitian_block_basis(dim))


def _check_dims(expected: int, actual: int) -> None:
    if expected != actual:
        raise DimensionMismatchError(expected, actual)


def to_coherence(rho: DensityMatrix, basis: OperatorBasis) -> CoherenceVector:
    """Return the coherence vector of ``rho`` in ``basis``."""
    _check_dims(basis.dim, rho.dim)
    components: npt.NDArray[np.complex128] = basis.components(rho.matrix)
    return CoherenceVector(rho.dim, components[1:].real)


def from_coherence(vector: CoherenceVector, basis: OperatorBasis) -> DensityMatrix:
    """Return the density matrix of a coherence vector.

    Negative eigenvalues down to ``-NOT_A_STATE_TOLERANCE`` are rounding noise
    and are clipped; anything below means the vector lies outside state space.
    """
    _check_dims(basis.dim, vector.dim)
    matrix: ComplexMatrix = basis.combine(vector.homogeneous())
    matrix = 0.5 * (matrix + matrix.conj().T)
    eigenvalues, eigenvectors = eigh(matrix)
    if eigenvalues[0] < -NOT_A_STATE_TOLERANCE:
        raise NotAStateError(float(eigenvalues[0]), "vector outside state space")
    if eigenvalues[0] < -PSD_TOLERANCE:
        states_logger.debug("Clipping eigenvalue %.3e", eigenvalues[0])
        clipped: RealMatrix = np.clip(eigenvalues, 0, None)
        clipped /= clipped.sum()
        matrix = (eigenvectors * clipped) @ eigenvectors.conj().T
    return DensityMatrix(matrix)


def trace_distance(rho: DensityMatrix, tau: DensityMatrix) -> float:
    """Return ``1/2 Tr|rho - tau|``."""
    _check_dims(rho.dim, tau.dim)
    eigenvalues: RealMatrix = eigh(rho.matrix - tau.matrix).eigenvalues
    return float(min(0.5 * np.abs(eigenvalues).sum(), 1.0))


def euclidean_distance(v: CoherenceVector, w: CoherenceVector) -> float:
    """Return the Euclidean distance of coherence vectors (the HS distance)."""
    _check_dims(v.dim, w.dim)
    return float(np.linalg.norm(v.r - w.r))


def subspace_fidelity(rho: DensityMatrix, projector: ComplexMatrix) -> float:
    """Return ``Tr(projector rho)`` for an orthogonal projector."""
    _check_dims(rho.dim, projector.shape[0])
    residual: float = max(
        float(np.linalg.norm(projector @ projector - projector)),
        float(np.linalg.norm(projector - projector.conj().T)),
    )
    if residual > HERMITIAN_TOLERANCE * max(1.0, float(np.linalg.norm(projector))):
        raise NotAProjectorError(residual)
    return float(np.clip(np.trace(projector @ rho.matrix).real, 0.0, 1.0))
