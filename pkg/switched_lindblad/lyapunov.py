"""Module with the Lyapunov machinery behind every switching law.

Hurwitz tests go through the Lyapunov equation ``A^T P + P A = -I``: a matrix is
Hurwitz exactly when the equation has a symmetric positive definite solution,
and positive definiteness is decided by a Cholesky factorization.
"""

from __future__ import annotations

__all__: list[str] = [
    "ConvexCombination",
    "LyapunovData",
    "check_simplex",
    "is_hurwitz",
    "lyapunov_data",
    "search_hurwitz_combination",
    "solve_lyapunov",
    "verify_assumption1",
]

import itertools
import logging
import math
import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from switched_lindblad.constants import (
    DESIGN_LOG_LEVEL,
    HURWITZ_SEARCH_SEED,
    LYAPUNOV_RESIDUAL_TOLERANCE,
    WEIGHT_TOLERANCE,
)
from switched_lindblad.errors import (
    NotHurwitzError,
    NotPositiveDefiniteError,
    NumericalError,
    SingularMatrixError,
)
from switched_lindblad.linalg import cholesky, eigh, require_square

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from switched_lindblad.linalg import RealMatrix

lyapunov_logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConvexCombination:
    """Simplex weights ``alpha_j`` and the combination ``A_c = sum alpha_j A_j``."""

    weights: tuple[float, ...]
    matrix: RealMatrix

    def __post_init__(self) -> None:
        weights: tuple[float, ...] = tuple(float(weight) for weight in self.weights)
        check_simplex(weights)
        object.__setattr__(self, "weights", weights)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(weights={self.weights})"


@dataclass(frozen=True, eq=False)
class LyapunovData:
    """``P`` solving ``A_c^T P + P A_c = -I`` and ``Q_j = A_j^T P + P A_j``."""

    p: RealMatrix
    q: tuple[RealMatrix, ...]

    @property
    def lambda_max(self) -> float:
        """Return the largest eigenvalue of ``P``."""
        return float(eigh(self.p).eigenvalues[-1])

    @property
    def lambda_min(self) -> float:
        """Return the smallest eigenvalue of ``P``."""
        return float(eigh(self.p).eigenvalues[0])

    def value(self, x: RealMatrix) -> RealMatrix:
        """Return ``V(x) = x^T P x``; ``x`` may be a batch of row vectors."""
        return np.einsum("...i,ij,...j->...", x, self.p, x)

    def rates(self, x: RealMatrix) -> RealMatrix:
        """Return ``x^T Q_j x`` for every generator ``j``."""
        return np.array([x @ q @ x for q in self.q])


def check_simplex(weights: Sequence[float]) -> None:
    """Raise ``ValueError`` unless ``weights`` is a point of the probability simplex."""
    if not weights:
        msg: str = "At least one weight is required"
        raise ValueError(msg)
    if min(weights) < 0:
        msg = f"Weights must be non negative, got {tuple(weights)}"
        raise ValueError(msg)
    if abs(math.fsum(weights) - 1) > WEIGHT_TOLERANCE:
        msg = f"Weights must sum to one, got {math.fsum(weights)!r}"
        raise ValueError(msg)


def solve_lyapunov(a_c: RealMatrix) -> RealMatrix:
    """Return the symmetric positive definite ``P`` with ``A_c^T P + P A_c = -I``.

    Raises ``SingularMatrixError`` when the equation has no accurate solution
    (some eigenvalue pair of ``A_c`` sums to zero) and ``NotPositiveDefiniteError``
    when the solution is not positive definite; both mean ``A_c`` is not Hurwitz.
    """
    order: int = require_square(a_c)
    identity: RealMatrix = np.eye(order)
    with warnings.catch_warnings(), np.errstate(all="ignore"):
        warnings.simplefilter("ignore")
        try:
            p: RealMatrix = scipy.linalg.solve_continuous_lyapunov(a_c.T, -identity)
        except (np.linalg.LinAlgError, ValueError) as lin_alg_err:
            lyapunov_logger.debug("Lyapunov solver failed: %s", lin_alg_err)
            raise SingularMatrixError(0.0) from lin_alg_err
    if not np.all(np.isfinite(p)):
        raise SingularMatrixError(0.0)
    p = 0.5 * (p + p.T)
    residual: float = float(np.linalg.norm(a_c.T @ p + p @ a_c + identity))
    scale: float = max(1.0, float(np.linalg.norm(a_c)) * float(np.linalg.norm(p)))
    if residual > LYAPUNOV_RESIDUAL_TOLERANCE * scale:
        lyapunov_logger.debug("Lyapunov residual %.3e too large", residual)
        raise SingularMatrixError(residual)
    cholesky(p)
    return p


def is_hurwitz(matrix: RealMatrix) -> bool:
    """Check whether every eigenvalue of ``matrix`` has negative real part."""
    try:
        solve_lyapunov(matrix)
    except SingularMatrixError as singular_err:
        lyapunov_logger.debug(
            "Not Hurwitz, Lyapunov equation singular: %s",
            singular_err,
        )
        return False
    except NotPositiveDefiniteError as not_pd_err:
        lyapunov_logger.debug(
            "Not Hurwitz, Lyapunov solution indefinite: %s",
            not_pd_err,
        )
        return False
    return True


def _combine(matrices: Sequence[RealMatrix], weights: Sequence[float]) -> RealMatrix:
    return sum(
        (weight * matrix for weight, matrix in zip(weights, matrices)),
        np.zeros_like(matrices[0]),
    )


def verify_assumption1(
    matrices: Sequence[RealMatrix],
    weights: Sequence[float],
) -> ConvexCombination:
    """Return the convex combination of ``matrices`` if it is Hurwitz."""
    if len(matrices) != len(weights):
        msg: str = f"Got {len(weights)} weight(s) for {len(matrices)} matrices"
        raise ValueError(msg)
    check_simplex(weights)
    combination: RealMatrix = _combine(matrices, weights)
    try:
        solve_lyapunov(combination)
    except NumericalError as numerical_err:
        raise NotHurwitzError(str(numerical_err)) from numerical_err
    lyapunov_logger.log(
        DESIGN_LOG_LEVEL,
        "Accepted Hurwitz convex combination with weights %s",
        tuple(round(float(weight), 6) for weight in weights),
    )
    return ConvexCombination(tuple(weights), combination)


def lyapunov_data(
    combination: ConvexCombination,
    matrices: Sequence[RealMatrix],
) -> LyapunovData:
    """Return ``P`` for ``combination`` and the derivative matrices ``Q_j``."""
    p: RealMatrix = solve_lyapunov(combination.matrix)
    q: tuple[RealMatrix, ...] = tuple(matrix.T @ p + p @ matrix for matrix in matrices)
    lyapunov_logger.log(
        DESIGN_LOG_LEVEL,
        "Computed Lyapunov matrix of order %d",
        p.shape[0],
    )
    return LyapunovData(p, q)


def _simplex_grid(parts: int, resolution: int) -> Iterator[tuple[float, ...]]:
    """Yield the points of the simplex whose coordinates are multiples of 1/resolution."""
    for cuts in itertools.combinations(range(resolution + parts - 1), parts - 1):
        bounds: tuple[int, ...] = (-1, *cuts, resolution + parts - 1)
        yield tuple(
            (bounds[i + 1] - bounds[i] - 1) / resolution for i in range(parts)
        )


def search_hurwitz_combination(
    matrices: Sequence[RealMatrix],
    budget: int,
    *,
    seed: int = HURWITZ_SEARCH_SEED,
) -> ConvexCombination | None:
    """Heuristically look for a Hurwitz convex combination.

    The vertices are tried first, then a simplex grid ordered by distance from
    the barycenter, then uniformly sampled simplex points, at most ``budget``
    candidates in total. ``None`` does not prove that no combination exists.
    """
    if not matrices:
        msg: str = "At least one generator matrix is required"
        raise ValueError(msg)
    if budget < 1:
        msg = f"Budget must be at least 1, got {budget}"
        raise ValueError(msg)
    parts: int = len(matrices)
    resolution: int = 1
    while parts > 1 and math.comb(resolution + parts, parts - 1) <= budget // 2:
        resolution += 1
    center: RealMatrix = np.full(parts, 1 / parts)
    grid: list[tuple[float, ...]] = sorted(
        _simplex_grid(parts, resolution),
        key=lambda point: float(np.linalg.norm(np.asarray(point) - center)),
    )
    vertices: list[tuple[float, ...]] = [
        tuple(float(i == j) for i in range(parts)) for j in range(parts)
    ]
    rng: np.random.Generator = np.random.default_rng(seed)
    samples: Iterator[tuple[float, ...]] = (
        tuple(float(weight) for weight in rng.dirichlet(np.ones(parts)))
        for _ in itertools.count()
    )
    candidates: Iterator[tuple[float, ...]] = itertools.islice(
        itertools.chain(vertices, grid, samples),
        budget,
    )
    for tried, weights in enumerate(candidates, start=1):
        weights = tuple(weight / math.fsum(weights) for weight in weights)
        if is_hurwitz(_combine(matrices, weights)):
            lyapunov_logger.log(
                DESIGN_LOG_LEVEL,
                "Found Hurwitz combination after %d candidate(s): %s",
                tried,
                tuple(round(weight, 6) for weight in weights),
            )
            return ConvexCombination(weights, _combine(matrices, weights))
    lyapunov_logger.warning("No Hurwitz combination found within %d candidates", budget)
    return None
