"""Tests for ``switched_lindblad.linalg``."""

from __future__ import annotations

import numpy as np
import pytest

# pylint: disable=C0116, W0611
from switched_lindblad.errors import (
    NotHermitianError,
    NotPositiveDefiniteError,
    NotSquareError,
    SingularMatrixError,
)
from switched_lindblad.linalg import (
    as_complex_matrix,
    as_real_matrix,
    cholesky,
    eigh,
    expm,
    is_symmetric,
    nullspace,
    require_square,
    solve_linear,
    spectral_norm,
    spectral_radius,
)
from tests.fixtures import rng


@pytest.mark.parametrize(
    "values",
    (
        pytest.param([1.0, 2.0], id="one_dimensional"),
        pytest.param([[1.0, np.nan]], id="nan"),
        pytest.param([[np.inf]], id="infinite"),
    ),
)
def test_as_real_matrix_invalid(values: object) -> None:
    with pytest.raises(ValueError):
        as_real_matrix(values)


def test_as_complex_matrix() -> None:
    matrix = as_complex_matrix([[1, 1j]])
    assert matrix.dtype == np.complex128
    assert matrix.shape == (1, 2)


def test_require_square() -> None:
    assert require_square(np.eye(3)) == 3
    with pytest.raises(NotSquareError):
        require_square(np.ones((2, 3)))


def test_is_symmetric() -> None:
    assert is_symmetric(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not is_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_expm() -> None:
    np.testing.assert_allclose(expm(np.zeros((3, 3))), np.eye(3))
    np.testing.assert_allclose(
        expm(np.diag([1.0, -2.0])),
        np.diag([np.e, np.exp(-2.0)]),
        rtol=1e-14,
    )
    rotation = expm(np.array([[0.0, -np.pi / 2], [np.pi / 2, 0.0]]))
    np.testing.assert_allclose(rotation, [[0.0, -1.0], [1.0, 0.0]], atol=1e-14)


def test_expm_group_identities(rng: np.random.Generator) -> None:
    matrix = 0.5 * rng.normal(size=(6, 6))
    np.testing.assert_allclose(expm(matrix) @ expm(-matrix), np.eye(6), atol=1e-10)
    np.testing.assert_allclose(
        expm(0.3 * matrix) @ expm(0.7 * matrix),
        expm(matrix),
        rtol=1e-10,
        atol=1e-10,
    )


def test_eigh() -> None:
    eigenvalues, eigenvectors = eigh(np.array([[0, -1j], [1j, 0]]))
    np.testing.assert_allclose(eigenvalues, [-1.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(
        eigenvectors.conj().T @ eigenvectors,
        np.eye(2),
        atol=1e-14,
    )


def test_eigh_random_hermitian(rng: np.random.Generator) -> None:
    noise = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    matrix = noise + noise.conj().T
    eigenvalues, eigenvectors = eigh(matrix)
    np.testing.assert_allclose(
        (eigenvectors * eigenvalues) @ eigenvectors.conj().T,
        matrix,
        atol=1e-10,
    )
    assert np.all(np.diff(eigenvalues) >= 0)
    assert eigenvalues.sum() == pytest.approx(np.trace(matrix).real, abs=1e-10)
    assert np.prod(eigenvalues) == pytest.approx(
        np.linalg.det(matrix).real,
        rel=1e-8,
        abs=1e-9,
    )


def test_eigh_not_hermitian() -> None:
    with pytest.raises(NotHermitianError):
        eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_solve_linear() -> None:
    matrix = np.array([[2.0, 1.0], [1.0, 3.0]])
    rhs = np.array([3.0, 5.0])
    np.testing.assert_allclose(solve_linear(matrix, rhs), [0.8, 1.4], rtol=1e-14)


def test_solve_linear_random_residual(rng: np.random.Generator) -> None:
    matrix = rng.normal(size=(20, 20))
    rhs = rng.normal(size=20)
    solution = solve_linear(matrix, rhs)
    residual = np.linalg.norm(matrix @ solution - rhs)
    assert residual <= 1e-10 * (
        np.linalg.norm(matrix) * np.linalg.norm(solution) + np.linalg.norm(rhs)
    )


def test_solve_linear_singular() -> None:
    with pytest.raises(SingularMatrixError):
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


def test_solve_linear_mismatched_rhs() -> None:
    with pytest.raises(ValueError):
        solve_linear(np.eye(2), np.ones(3))


def test_cholesky() -> None:
    factor = cholesky(np.array([[4.0, 2.0], [2.0, 3.0]]))
    np.testing.assert_allclose(factor, [[2.0, 0.0], [1.0, np.sqrt(2.0)]], rtol=1e-14)


def test_cholesky_succeeds_iff_positive_definite(rng: np.random.Generator) -> None:
    for _ in range(50):
        noise = rng.normal(size=(5, 5))
        matrix = noise + noise.T + rng.uniform(-2.0, 6.0) * np.eye(5)
        smallest = np.linalg.eigvalsh(matrix)[0]
        if abs(smallest) < 1e-6:
            continue
        try:
            factor = cholesky(matrix)
        except NotPositiveDefiniteError:
            assert smallest < 0
        else:
            assert smallest > 0
            np.testing.assert_allclose(factor @ factor.T, matrix, atol=1e-10)


def test_cholesky_not_positive_definite() -> None:
    with pytest.raises(NotPositiveDefiniteError) as exc_info:
        cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert exc_info.value.index == 2


def test_cholesky_not_symmetric() -> None:
    with pytest.raises(ValueError):
        cholesky(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_nullspace() -> None:
    kernel = nullspace(np.array([[1.0, 1.0]]), 1e-12)
    assert kernel.shape == (2, 1)
    np.testing.assert_allclose(
        abs(kernel[:, 0] @ [1.0, -1.0]),
        np.sqrt(2.0),
        rtol=1e-14,
    )


def test_nullspace_full_rank() -> None:
    assert nullspace(np.eye(3), 1e-12).shape == (3, 0)


def test_nullspace_invalid_tolerance() -> None:
    with pytest.raises(ValueError):
        nullspace(np.eye(2), 0.0)


@pytest.mark.parametrize(
    ("matrix", "expected_norm"),
    (
        pytest.param(np.diag([3.0, -4.0]), 4.0, id="diagonal"),
        pytest.param(np.array([[0.0, 2.0], [0.0, 0.0]]), 2.0, id="nilpotent"),
        pytest.param(np.zeros((0, 0)), 0.0, id="empty"),
    ),
)
def test_spectral_norm(matrix: np.ndarray, expected_norm: float) -> None:
    assert spectral_norm(matrix) == pytest.approx(expected_norm, rel=1e-12)


def test_spectral_radius() -> None:
    assert spectral_radius(np.array([[0.0, 1.0], [-1.0, 0.0]])) == pytest.approx(1.0)
    assert spectral_radius(np.array([[0.5, 10.0], [0.0, 0.25]])) == pytest.approx(0.5)
