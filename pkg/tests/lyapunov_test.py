"""Tests for ``switched_lindblad.lyapunov``."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

# pylint: disable=C0116, W0611
from switched_lindblad.constants import DESIGN_LOG_LEVEL
from switched_lindblad.errors import (
    NotHurwitzError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)
from switched_lindblad.lyapunov import (
    ConvexCombination,
    LyapunovData,
    check_simplex,
    is_hurwitz,
    lyapunov_data,
    search_hurwitz_combination,
    solve_lyapunov,
    verify_assumption1,
)
from tests.fixtures import (
    bell_report,
    ghz_report,
    info_caplog,
    rng,
    rotation_matrices,
)

if TYPE_CHECKING:
    from switched_lindblad.linalg import RealMatrix
    from switched_lindblad.simulation import DesignReport


@pytest.mark.parametrize(
    ("a_c", "expected_p"),
    (
        pytest.param(-np.eye(3), 0.5 * np.eye(3), id="minus_identity"),
        pytest.param(np.diag([-1.0, -2.0]), np.diag([0.5, 0.25]), id="diagonal"),
    ),
)
def test_solve_lyapunov(a_c: RealMatrix, expected_p: RealMatrix) -> None:
    np.testing.assert_allclose(solve_lyapunov(a_c), expected_p, atol=1e-14)


def test_solve_lyapunov_residual(bell_report: DesignReport) -> None:
    a_c: RealMatrix = bell_report.combination.matrix
    p: RealMatrix = solve_lyapunov(a_c)
    np.testing.assert_allclose(p, p.T)
    np.testing.assert_allclose(a_c.T @ p + p @ a_c, -np.eye(a_c.shape[0]), atol=1e-8)


def test_solve_lyapunov_unstable() -> None:
    with pytest.raises(NotPositiveDefiniteError) as exc_info:
        solve_lyapunov(np.diag([1.0, -2.0]))
    assert exc_info.value.index == 1


def test_solve_lyapunov_singular() -> None:
    with pytest.raises(SingularMatrixError):
        solve_lyapunov(np.zeros((2, 2)))


@pytest.mark.parametrize(
    ("matrix", "expected_result"),
    (
        pytest.param(-np.eye(2), True, id="minus_identity"),
        pytest.param(np.array([[0.0, 1.0], [0.0, 0.0]]), False, id="nilpotent"),
        pytest.param(np.array([[0.0, 1.0], [-1.0, 0.0]]), False, id="rotation"),
        pytest.param(np.array([[-1.0, 10.0], [0.0, -1.0]]), True, id="non_normal"),
    ),
)
def test_is_hurwitz(matrix: RealMatrix, expected_result: bool) -> None:
    assert is_hurwitz(matrix) is expected_result


@pytest.mark.parametrize(
    "weights",
    (
        pytest.param((), id="empty"),
        pytest.param((1.5, -0.5), id="negative"),
        pytest.param((0.5, 0.6), id="not_normalized"),
    ),
)
def test_check_simplex_invalid(weights: tuple[float, ...]) -> None:
    with pytest.raises(ValueError):
        check_simplex(weights)


def test_convex_combination_invalid_weights() -> None:
    with pytest.raises(ValueError):
        ConvexCombination((0.3, 0.3), np.eye(2))


def test_verify_assumption1_bell(
    bell_report: DesignReport,
    info_caplog: pytest.LogCaptureFixture,
) -> None:
    combination: ConvexCombination = verify_assumption1(
        bell_report.matrices,
        (0.5, 0.5),
    )
    assert combination.weights == (0.5, 0.5)
    np.testing.assert_allclose(
        combination.matrix,
        0.5 * (bell_report.matrices[0] + bell_report.matrices[1]),
    )
    assert info_caplog.record_tuples == [
        (
            "switched_lindblad.lyapunov",
            DESIGN_LOG_LEVEL,
            "Accepted Hurwitz convex combination with weights (0.5, 0.5)",
        ),
    ]


def test_verify_assumption1_ghz(ghz_report: DesignReport) -> None:
    combination: ConvexCombination = verify_assumption1(
        ghz_report.matrices,
        (1 / 3, 1 / 3, 1 / 3),
    )
    assert is_hurwitz(combination.matrix)


def test_verify_assumption1_marginal() -> None:
    with pytest.raises(NotHurwitzError):
        verify_assumption1([np.array([[0.0, 1.0], [-1.0, 0.0]])], (1.0,))


def test_verify_assumption1_mismatched_weights() -> None:
    with pytest.raises(ValueError):
        verify_assumption1([-np.eye(2)], (0.5, 0.5))


def test_lyapunov_data_bell(bell_report: DesignReport) -> None:
    lyapunov: LyapunovData = lyapunov_data(
        bell_report.combination,
        bell_report.matrices,
    )
    assert lyapunov.lambda_min > 0
    assert lyapunov.lambda_max >= lyapunov.lambda_min
    np.testing.assert_allclose(
        0.5 * (lyapunov.q[0] + lyapunov.q[1]),
        -np.eye(15),
        atol=1e-8,
    )


def test_lyapunov_value_batch(
    bell_report: DesignReport,
    rng: np.random.Generator,
) -> None:
    lyapunov: LyapunovData = bell_report.lyapunov
    batch: RealMatrix = rng.normal(size=(4, 15))
    np.testing.assert_allclose(
        lyapunov.value(batch),
        [x @ lyapunov.p @ x for x in batch],
        rtol=1e-12,
    )


def test_lyapunov_descent_oracle(
    bell_report: DesignReport,
    rng: np.random.Generator,
) -> None:
    lyapunov: LyapunovData = bell_report.lyapunov
    for _ in range(1000):
        x: RealMatrix = rng.normal(size=15) * rng.uniform(1e-3, 1e3)
        squared_norm: float = float(x @ x)
        assert lyapunov.rates(x).min() <= -squared_norm + 1e-9 * squared_norm


def test_search_hurwitz_combination_bell(bell_report: DesignReport) -> None:
    combination: ConvexCombination | None = search_hurwitz_combination(
        bell_report.matrices,
        64,
    )
    assert combination is not None
    assert is_hurwitz(combination.matrix)
    assert sum(combination.weights) == pytest.approx(1.0)


def test_search_hurwitz_combination_vertex(rotation_matrices: list[RealMatrix]) -> None:
    combination: ConvexCombination | None = search_hurwitz_combination(
        [rotation_matrices[0], -np.eye(2)],
        16,
    )
    assert combination is not None
    assert combination.weights == (0.0, 1.0)


def test_search_hurwitz_combination_single_matrix() -> None:
    combination: ConvexCombination | None = search_hurwitz_combination([-np.eye(2)], 1)
    assert combination is not None
    assert combination.weights == (1.0,)


def test_search_hurwitz_combination_not_found(
    rotation_matrices: list[RealMatrix],
    caplog: pytest.LogCaptureFixture,
) -> None:
    assert search_hurwitz_combination(rotation_matrices, 16) is None
    assert caplog.record_tuples == [
        (
            "switched_lindblad.lyapunov",
            30,
            "No Hurwitz combination found within 16 candidates",
        ),
    ]


def test_search_hurwitz_combination_invalid_budget() -> None:
    with pytest.raises(ValueError):
        search_hurwitz_combination([-np.eye(2)], 0)


def test_search_hurwitz_combination_no_matrices() -> None:
    with pytest.raises(ValueError):
        search_hurwitz_combination([], 16)
