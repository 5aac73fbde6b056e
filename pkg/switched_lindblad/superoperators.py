"""Module with Lindblad generators and their real superoperator form.

The superoperator of a generator in an orthonormal Hermitian basis ``{F_k}`` is
the real matrix ``full[k, j] = Tr(F_k L(F_j))``, so that ``d/dt v = full @ v``
for the full vector ``v_k = Tr(rho F_k)``. Its first row vanishes because the
generator is trace preserving, and the remaining rows split into the affine
dynamics ``d/dt r = A r + b`` of the coherence vector.
"""

from __future__ import annotations

__all__: list[str] = [
    "InvarianceCheck",
    "LindbladGenerator",
    "SubspaceBlocks",
    "SubspaceSplit",
    "Superoperator",
    "apply_generator",
    "check_invariance",
    "common_fixed_point",
    "subspace_blocks",
    "subspace_split",
    "superoperator_matrix",
    "vectorize",
]

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from switched_lindblad.constants import (
    FIXED_POINT_TOLERANCE,
    HERMITIAN_TOLERANCE,
    SUBSPACE_ZERO_TOLERANCE,
)
from switched_lindblad.errors import (
    DimensionMismatchError,
    FixedPointNotAStateError,
    MultipleCommonFixedPointsError,
    NoCommonFixedPointError,
    NotAProjectorError,
    NotAStateError,
    NotHermitianError,
    NotInvariantError,
)
from switched_lindblad.linalg import as_complex_matrix, eigh, nullspace, require_square
from switched_lindblad.states import (
    CoherenceVector,
    OperatorBasis,
    from_coherence,
    gell_mann_basis,
    hermitian_block_basis,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from switched_lindblad.linalg import ComplexMatrix, RealMatrix

superoperators_logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LindbladGenerator:
    """A Hamiltonian together with the noise operators ``L_k`` of one dynamics."""

    hamiltonian: ComplexMatrix
    noise_operators: tuple[ComplexMatrix, ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        hamiltonian: ComplexMatrix = as_complex_matrix(
            self.hamiltonian,
            name="hamiltonian",
        )
        dim: int = require_square(hamiltonian)
        residual: float = float(np.linalg.norm(hamiltonian - hamiltonian.conj().T))
        scale: float = max(1.0, float(np.linalg.norm(hamiltonian)))
        if residual > HERMITIAN_TOLERANCE * scale:
            raise NotHermitianError(residual)
        noise_operators: tuple[ComplexMatrix, ...] = tuple(
            as_complex_matrix(operator, name="noise operator")
            for operator in self.noise_operators
        )
        for operator in noise_operators:
            if operator.shape != (dim, dim):
                raise DimensionMismatchError(dim, operator.shape[0])
        if len(noise_operators) > dim**2 - 1:
            msg: str = (
                f"At most {dim**2 - 1} noise operators are meaningful in dimension "
                f"{dim}, got {len(noise_operators)}"
            )
            raise ValueError(msg)
        object.__setattr__(self, "hamiltonian", hamiltonian)
        object.__setattr__(self, "noise_operators", noise_operators)

    @property
    def dim(self) -> int:
        return int(self.hamiltonian.shape[0])

    @property
    def scale(self) -> float:
        """Return a norm bound of the generator used to scale tolerances."""
        return float(np.linalg.norm(self.hamiltonian)) + sum(
            float(np.linalg.norm(operator)) ** 2 for operator in self.noise_operators
        )

    def __str__(self) -> str:
        return f"{self.__class__.__name__}('{self.label}')"

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(dim={self.dim}, label={self.label!r}, "
            f"noise_operators={len(self.noise_operators)})"
        )


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Real superoperator ``full`` with its affine split ``(A, b)``."""

    dim: int
    full: RealMatrix
    A: RealMatrix = field(init=False)  # noqa: N815
    b: RealMatrix = field(init=False)

    def __post_init__(self) -> None:
        full: RealMatrix = np.asarray(self.full, dtype=np.float64)
        if full.shape != (self.dim**2, self.dim**2):
            raise DimensionMismatchError(self.dim**2, full.shape[0])
        leak: float = float(np.max(np.abs(full[0])))
        if leak > 1e-12 * max(1.0, float(np.linalg.norm(full))):
            msg: str = f"First row is not zero ({leak:.3e}), the map is not trace preserving"
            raise ValueError(msg)
        object.__setattr__(self, "full", full)
        object.__setattr__(self, "A", full[1:, 1:])
        object.__setattr__(self, "b", full[1:, 0] / np.sqrt(self.dim))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim})"


class InvarianceCheck(NamedTuple):
    invariant: bool
    residual: float


@dataclass(frozen=True, eq=False)
class SubspaceSplit:
    """Orthonormal Hermitian basis adapted to ``H = H_S + H_R``.

    The first ``s_dim**2`` elements span the operators supported on ``H_S``
    (the first of them is ``Pi_S/sqrt(s_dim)``), the remaining ones span the
    coherences between ``H_S`` and ``H_R`` followed by the operators on ``H_R``.
    """

    dim: int
    projector: ComplexMatrix
    basis: OperatorBasis
    s_dim: int

    @property
    def one_indices(self) -> tuple[int, ...]:
        return (0,)

    @property
    def s_indices(self) -> tuple[int, ...]:
        return tuple(range(1, self.s_dim**2))

    @property
    def perp_indices(self) -> tuple[int, ...]:
        return tuple(range(self.s_dim**2, self.dim**2))

    def change_of_basis(self) -> RealMatrix:
        """Return the orthogonal ``C`` with ``C[k, j] = Tr(E_k F_j)``.

        ``F_j`` is the Gell-Mann basis, so ``C @ v`` maps Gell-Mann components
        to components in this basis.
        """
        gell_mann: OperatorBasis = gell_mann_basis(self.dim)
        return np.einsum(
            "kab,jba->kj",
            self.basis.elements,
            gell_mann.elements,
        ).real


class SubspaceBlocks(NamedTuple):
    """Blocks of a superoperator in a :class:`SubspaceSplit` basis."""

    b_s: RealMatrix
    l_s: RealMatrix
    l_x: RealMatrix
    l_perp: RealMatrix
    residual: float


def apply_generator(
    generator: LindbladGenerator,
    rho: ComplexMatrix,
) -> ComplexMatrix:
    """Return ``-i[H, rho] + sum_k (L_k rho L_k^+ - 1/2 {L_k^+ L_k, rho})``.

    ``rho`` may carry leading batch dimensions.
    """
    if rho.shape[-1] != generator.dim or rho.shape[-2] != generator.dim:
        raise DimensionMismatchError(generator.dim, rho.shape[-1])
    hamiltonian: ComplexMatrix = generator.hamiltonian
    result: ComplexMatrix = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    for operator in generator.noise_operators:
        dagger: ComplexMatrix = operator.conj().T
        number: ComplexMatrix = dagger @ operator
        result = result + (
            operator @ rho @ dagger - 0.5 * (number @ rho + rho @ number)
        )
    return result


def superoperator_matrix(
    generator: LindbladGenerator,
    elements: ComplexMatrix,
) -> RealMatrix:
    """Return ``M[k, j] = Tr(E_k L(E_j))`` for orthonormal Hermitian ``E``."""
    images: ComplexMatrix = apply_generator(generator, elements)
    return np.einsum("kab,jba->kj", elements, images).real


def vectorize(generator: LindbladGenerator, basis: OperatorBasis) -> Superoperator:
    """Return the superoperator of ``generator`` in ``basis``."""
    if generator.dim != basis.dim:
        raise DimensionMismatchError(basis.dim, generator.dim)
    superoperators_logger.debug("Vectorizing %s", generator)
    return Superoperator(generator.dim, superoperator_matrix(generator, basis.elements))


def common_fixed_point(
    superoperators: Sequence[Superoperator],
    basis: OperatorBasis | None = None,
) -> CoherenceVector:
    """Return the unique ``v`` with ``A_j v + b_j = 0`` for every ``j``.

    The homogeneous system ``[b_j | A_j] (c, v) = 0`` is stacked over all
    generators; a one dimensional kernel with ``c != 0`` yields the fixed point.
    """
    if not superoperators:
        msg: str = "At least one superoperator is required"
        raise ValueError(msg)
    dim: int = superoperators[0].dim
    for superoperator in superoperators:
        if superoperator.dim != dim:
            raise DimensionMismatchError(dim, superoperator.dim)

    stacked: RealMatrix = np.vstack(
        [np.column_stack((sup.b, sup.A)) for sup in superoperators],
    )
    scale: float = max(1.0, float(np.linalg.norm(stacked)))
    kernel: RealMatrix = nullspace(stacked, FIXED_POINT_TOLERANCE * scale)
    superoperators_logger.debug(
        "Stacked fixed point kernel has dimension %d",
        kernel.shape[1],
    )
    if kernel.shape[1] == 0:
        raise NoCommonFixedPointError
    if kernel.shape[1] > 1:
        raise MultipleCommonFixedPointsError(kernel.shape[1])

    direction: RealMatrix = kernel[:, 0]
    if abs(direction[0]) <= FIXED_POINT_TOLERANCE:
        raise NoCommonFixedPointError
    fixed_point: RealMatrix = direction[1:] / direction[0]

    residual: float = max(
        float(np.linalg.norm(sup.A @ fixed_point + sup.b)) for sup in superoperators
    )
    if residual > FIXED_POINT_TOLERANCE * scale:
        raise NoCommonFixedPointError

    vector: CoherenceVector = CoherenceVector(dim, fixed_point)
    try:
        from_coherence(vector, basis or gell_mann_basis(dim))
    except NotAStateError as not_a_state_err:
        raise FixedPointNotAStateError(
            not_a_state_err.min_eigenvalue,
        ) from not_a_state_err
    superoperators_logger.info("Found common fixed point (residual %.3e)", residual)
    return vector


def _validate_projector(projector: ComplexMatrix) -> None:
    residual: float = max(
        float(np.linalg.norm(projector @ projector - projector)),
        float(np.linalg.norm(projector - projector.conj().T)),
    )
    if residual > HERMITIAN_TOLERANCE * max(1.0, float(np.linalg.norm(projector))):
        raise NotAProjectorError(residual)


def _support_vectors(projector: ComplexMatrix) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Return orthonormal bases of the range and the kernel of a projector."""
    eigenvalues, eigenvectors = eigh(projector)
    inside: np.ndarray = eigenvalues > 0.5  # noqa: PLR2004
    return eigenvectors[:, inside], eigenvectors[:, ~inside]


def check_invariance(
    generator: LindbladGenerator,
    projector: ComplexMatrix,
) -> InvarianceCheck:
    """Check that operators supported on ``range(projector)`` stay there.

    The residual is the largest leakage ``||L(X) - P L(X) P||`` over the
    spanning set ``X = |s_i><s_j|`` of the operators on the subspace.
    """
    projector = as_complex_matrix(projector, name="projector")
    _validate_projector(projector)
    if projector.shape[0] != generator.dim:
        raise DimensionMismatchError(generator.dim, projector.shape[0])
    support, _ = _support_vectors(projector)
    spanning: ComplexMatrix = np.einsum(
        "ai,bj->ijab",
        support,
        support.conj(),
    ).reshape(-1, generator.dim, generator.dim)
    images: ComplexMatrix = apply_generator(generator, spanning)
    leakage: ComplexMatrix = images - projector @ images @ projector
    residual: float = float(np.max(np.linalg.norm(leakage, axis=(1, 2)), initial=0.0))
    invariant: bool = residual <= SUBSPACE_ZERO_TOLERANCE * max(1.0, generator.scale)
    superoperators_logger.debug(
        "Invariance of %s: %s (residual %.3e)",
        generator,
        invariant,
        residual,
    )
    return InvarianceCheck(invariant, residual)


def subspace_split(projector: ComplexMatrix) -> SubspaceSplit:
    """Return the basis adapted to ``range(projector)`` and its complement."""
    projector = as_complex_matrix(projector, name="projector")
    dim: int = require_square(projector)
    _validate_projector(projector)
    inside, outside = _support_vectors(projector)
    s_dim: int = inside.shape[1]
    r_dim: int = outside.shape[1]
    if s_dim == 0:
        msg: str = "The subspace must not be empty"
        raise ValueError(msg)

    frame: ComplexMatrix = np.hstack((inside, outside))
    local: list[ComplexMatrix] = []
    for element in hermitian_block_basis(s_dim):
        embedded: ComplexMatrix = np.zeros((dim, dim), dtype=np.complex128)
        embedded[:s_dim, :s_dim] = element
        local.append(embedded)
    for kind in ("symmetric", "antisymmetric"):
        for i in range(s_dim):
            for k in range(s_dim, dim):
                coherence: ComplexMatrix = np.zeros((dim, dim), dtype=np.complex128)
                if kind == "symmetric":
                    coherence[i, k] = coherence[k, i] = 1 / np.sqrt(2)
                else:
                    coherence[i, k] = -1j / np.sqrt(2)
                    coherence[k, i] = 1j / np.sqrt(2)
                local.append(coherence)
    if r_dim:
        for element in hermitian_block_basis(r_dim):
            embedded = np.zeros((dim, dim), dtype=np.complex128)
            embedded[s_dim:, s_dim:] = element
            local.append(embedded)

    elements: ComplexMatrix = frame @ np.array(local) @ frame.conj().T
    superoperators_logger.debug(
        "Built subspace split with dim(H_S)=%d, dim(H_R)=%d",
        s_dim,
        r_dim,
    )
    return SubspaceSplit(dim, projector, OperatorBasis(dim, elements), s_dim)


def subspace_blocks(
    superoperator: Superoperator,
    split: SubspaceSplit,
) -> SubspaceBlocks:
    """Return the blocks ``(b_S, L_S, L_X, L_perp)`` of an invariant generator.

    Raises ``NotInvariantError`` when the blocks that must vanish for an
    invariant subspace (the perp rows of the subspace columns, and the subspace
    population row) exceed the tolerance.
    """
    if superoperator.dim != split.dim:
        raise DimensionMismatchError(split.dim, superoperator.dim)
    change: RealMatrix = split.change_of_basis()
    adapted: RealMatrix = change @ superoperator.full @ change.T
    inner: int = split.s_dim**2
    zero_blocks: list[RealMatrix] = [adapted[0, :inner], adapted[inner:, :inner]]
    residual: float = max(
        float(np.max(np.abs(block), initial=0.0)) for block in zero_blocks
    )
    if residual > SUBSPACE_ZERO_TOLERANCE * max(1.0, float(np.linalg.norm(adapted))):
        raise NotInvariantError(residual)
    s_rows: slice = slice(1, inner)
    return SubspaceBlocks(
        b_s=adapted[s_rows, 0] / np.sqrt(split.s_dim),
        l_s=adapted[s_rows, s_rows],
        l_x=adapted[s_rows, inner:],
        l_perp=adapted[inner:, inner:],
        residual=residual,
    )
