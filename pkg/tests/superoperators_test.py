"""Tests for ``switched_lindblad.superoperators``."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

# pylint: disable=C0116, W0611
from switched_lindblad.errors import (
    DimensionMismatchError,
    MultipleCommonFixedPointsError,
    NoCommonFixedPointError,
    NotHermitianError,
    NotInvariantError,
)
from switched_lindblad.linalg import expm
from switched_lindblad.scenarios import scenario_ghz
from switched_lindblad.states import (
    DensityMatrix,
    basis_state,
    gell_mann_basis,
    pauli,
    to_coherence,
)
from switched_lindblad.superoperators import (
    LindbladGenerator,
    Superoperator,
    apply_generator,
    check_invariance,
    common_fixed_point,
    subspace_blocks,
    subspace_split,
    vectorize,
)
from tests.fixtures import bell_spec, rng

if TYPE_CHECKING:
    from switched_lindblad.linalg import ComplexMatrix, RealMatrix
    from switched_lindblad.scenarios import ScenarioSpec

GHZ_PROJECTOR: ComplexMatrix = basis_state(8, 0) + basis_state(8, 7)


def _damping(target: int) -> LindbladGenerator:
    operator: ComplexMatrix = np.zeros((2, 2), dtype=np.complex128)
    operator[target, 1 - target] = 1
    return LindbladGenerator(np.zeros((2, 2)), (operator,))


def _complex_gaussian(generator: np.random.Generator, dim: int) -> ComplexMatrix:
    return generator.normal(size=(dim, dim)) + 1j * generator.normal(size=(dim, dim))


def _random_generator(generator: np.random.Generator, dim: int) -> LindbladGenerator:
    raw: ComplexMatrix = _complex_gaussian(generator, dim)
    hamiltonian: ComplexMatrix = 0.25 * (raw + raw.conj().T)
    noise_operators: tuple[ComplexMatrix, ...] = tuple(
        0.5 * _complex_gaussian(generator, dim)
        for _ in range(int(generator.integers(1, 3)))
    )
    return LindbladGenerator(hamiltonian, noise_operators)


def _random_state(generator: np.random.Generator, dim: int) -> ComplexMatrix:
    raw: ComplexMatrix = _complex_gaussian(generator, dim)
    rho: ComplexMatrix = raw @ raw.conj().T
    return rho / np.trace(rho).real


def test_lindblad_generator_not_hermitian() -> None:
    with pytest.raises(NotHermitianError):
        LindbladGenerator(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_lindblad_generator_mismatched_noise_operator() -> None:
    with pytest.raises(DimensionMismatchError):
        LindbladGenerator(np.zeros((2, 2)), (np.eye(3),))


def test_lindblad_generator_too_many_noise_operators() -> None:
    with pytest.raises(ValueError):
        LindbladGenerator(np.zeros((2, 2)), (np.eye(2),) * 4)


def test_superoperator_not_trace_preserving() -> None:
    with pytest.raises(ValueError):
        Superoperator(2, np.ones((4, 4)))


def test_apply_generator_batch() -> None:
    generator: LindbladGenerator = LindbladGenerator(pauli("x"), (pauli("z"),))
    batch: ComplexMatrix = np.stack([basis_state(2, 0), basis_state(2, 1)])
    images: ComplexMatrix = apply_generator(generator, batch)
    assert images.shape == (2, 2, 2)
    np.testing.assert_allclose(images[1], apply_generator(generator, basis_state(2, 1)))


def test_apply_generator_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        apply_generator(LindbladGenerator(pauli("x")), np.eye(3))


def test_vectorize_dephasing() -> None:
    superoperator: Superoperator = vectorize(
        LindbladGenerator(np.zeros((2, 2)), (pauli("z"),)),
        gell_mann_basis(2),
    )
    np.testing.assert_allclose(superoperator.A, np.diag([-2.0, -2.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(superoperator.b, 0.0, atol=1e-14)
    np.testing.assert_allclose(superoperator.full[0], 0.0, atol=1e-14)


def test_vectorize_hamiltonian_is_antisymmetric() -> None:
    superoperator: Superoperator = vectorize(
        LindbladGenerator(pauli("y")),
        gell_mann_basis(2),
    )
    np.testing.assert_allclose(superoperator.A, -superoperator.A.T, atol=1e-14)


def test_vectorize_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        vectorize(LindbladGenerator(pauli("x")), gell_mann_basis(3))


def test_vectorize_cptp(rng: np.random.Generator) -> None:
    for _ in range(500):
        dim: int = int(rng.integers(2, 4))
        basis = gell_mann_basis(dim)
        full: RealMatrix = vectorize(_random_generator(rng, dim), basis).full
        propagator: RealMatrix = expm(full * rng.uniform(0.01, 2.0))
        rho: ComplexMatrix = _random_state(rng, dim)
        tau: ComplexMatrix = _random_state(rng, dim)
        rho_t: ComplexMatrix = basis.combine(propagator @ basis.components(rho).real)
        tau_t: ComplexMatrix = basis.combine(propagator @ basis.components(tau).real)

        assert abs(np.trace(rho_t) - 1) <= 1e-10
        assert np.linalg.eigvalsh(rho_t).min() >= -1e-8
        before: float = 0.5 * float(np.abs(np.linalg.eigvalsh(rho - tau)).sum())
        after: float = 0.5 * float(np.abs(np.linalg.eigvalsh(rho_t - tau_t)).sum())
        assert after <= before + 1e-9


def test_vectorize_affine_action(rng: np.random.Generator) -> None:
    basis = gell_mann_basis(3)
    generator: LindbladGenerator = _random_generator(rng, 3)
    superoperator: Superoperator = vectorize(generator, basis)
    for _ in range(100):
        rho: ComplexMatrix = _random_state(rng, 3)
        r: RealMatrix = to_coherence(DensityMatrix(rho), basis).r
        image = basis.components(apply_generator(generator, rho))
        assert abs(image[0]) <= 1e-12
        np.testing.assert_allclose(
            image[1:].real,
            superoperator.A @ r + superoperator.b,
            atol=1e-10,
        )


def test_vectorize_is_linear_in_the_generator(rng: np.random.Generator) -> None:
    basis = gell_mann_basis(3)
    first: LindbladGenerator = _random_generator(rng, 3)
    second: LindbladGenerator = _random_generator(rng, 3)
    combined = LindbladGenerator(
        first.hamiltonian + second.hamiltonian,
        first.noise_operators + second.noise_operators,
    )
    np.testing.assert_allclose(
        vectorize(combined, basis).full,
        vectorize(first, basis).full + vectorize(second, basis).full,
        atol=1e-12,
    )


def test_common_fixed_point_amplitude_damping() -> None:
    basis = gell_mann_basis(2)
    fixed_point = common_fixed_point([vectorize(_damping(0), basis)], basis)
    np.testing.assert_allclose(
        fixed_point.r,
        to_coherence(DensityMatrix(basis_state(2, 0)), basis).r,
        atol=1e-12,
    )


def test_common_fixed_point_bell(bell_spec: ScenarioSpec) -> None:
    basis = gell_mann_basis(4)
    fixed_point = common_fixed_point(
        [vectorize(generator, basis) for generator in bell_spec.generators],
        basis,
    )
    np.testing.assert_allclose(
        fixed_point.r,
        to_coherence(bell_spec.target, basis).r,
        atol=1e-9,
    )


def test_common_fixed_point_none() -> None:
    basis = gell_mann_basis(2)
    with pytest.raises(NoCommonFixedPointError):
        common_fixed_point(
            [vectorize(_damping(0), basis), vectorize(_damping(1), basis)],
        )


def test_common_fixed_point_multiple() -> None:
    dephasing = vectorize(
        LindbladGenerator(np.zeros((2, 2)), (pauli("z"),)),
        gell_mann_basis(2),
    )
    with pytest.raises(MultipleCommonFixedPointsError) as exc_info:
        common_fixed_point([dephasing])
    assert exc_info.value.dimension == 2


def test_common_fixed_point_empty() -> None:
    with pytest.raises(ValueError):
        common_fixed_point([])


@pytest.mark.parametrize(
    ("index", "expected_invariant"),
    (
        pytest.param(0, False, id="hamiltonian"),
        pytest.param(1, True, id="L1"),
        pytest.param(2, True, id="L2"),
    ),
)
def test_check_invariance_ghz(index: int, expected_invariant: bool) -> None:
    check = check_invariance(scenario_ghz().generators[index], GHZ_PROJECTOR)
    assert check.invariant is expected_invariant
    if expected_invariant:
        assert check.residual <= 1e-9


def test_check_invariance_commuting_hamiltonian() -> None:
    hamiltonian: ComplexMatrix = np.diag([1.0, 2.0, 3.0]).astype(np.complex128)
    projector: ComplexMatrix = basis_state(3, 0) + basis_state(3, 1)
    check = check_invariance(LindbladGenerator(hamiltonian), projector)
    assert check.invariant
    assert check.residual <= 1e-12


def test_check_invariance_damping_out_of_subspace() -> None:
    check = check_invariance(_damping(0), basis_state(2, 1))
    assert not check.invariant
    assert check.residual == pytest.approx(1.0)


def test_subspace_split_basis() -> None:
    split = subspace_split(GHZ_PROJECTOR)
    assert split.s_dim == 2
    assert len(split.s_indices) == 3
    assert len(split.perp_indices) == 60
    np.testing.assert_allclose(split.basis.gram(), np.eye(64), atol=1e-13)
    np.testing.assert_allclose(
        split.basis.elements[0],
        GHZ_PROJECTOR / np.sqrt(2),
        atol=1e-14,
    )
    change: RealMatrix = split.change_of_basis()
    np.testing.assert_allclose(change @ change.T, np.eye(64), atol=1e-13)


def test_subspace_split_empty() -> None:
    with pytest.raises(ValueError):
        subspace_split(np.zeros((2, 2)))


def test_subspace_blocks_ghz() -> None:
    split = subspace_split(GHZ_PROJECTOR)
    basis = gell_mann_basis(8)
    for generator in scenario_ghz().generators[1:]:
        blocks = subspace_blocks(vectorize(generator, basis), split)
        assert blocks.residual <= 1e-9
        assert blocks.l_s.shape == (3, 3)
        assert blocks.l_x.shape == (3, 60)
        assert blocks.l_perp.shape == (60, 60)


def test_subspace_blocks_not_invariant() -> None:
    hamiltonian = vectorize(scenario_ghz().generators[0], gell_mann_basis(8))
    with pytest.raises(NotInvariantError):
        subspace_blocks(hamiltonian, subspace_split(GHZ_PROJECTOR))
