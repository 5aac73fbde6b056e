"""Module recasting affine coherence-vector dynamics as linear ones.

Generators sharing the fixed point ``v_bar`` become simultaneously linear in the
coordinates ``x = T_R v + T_Q`` with ``T_Q = -T_R v_bar``: every transformed
generator reads ``d/dt x = T_R A_j T_R^-1 x`` and ``v_bar`` is mapped to zero.
With the default ``T_R = I`` this is the translation ``x = v - v_bar``.
"""

from __future__ import annotations

__all__: list[str] = [
    "Linearization",
    "build_linearization",
    "from_translated",
    "reduce_to_perp",
    "to_translated",
]

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from switched_lindblad.constants import FIXED_POINT_TOLERANCE
from switched_lindblad.errors import (
    DimensionMismatchError,
    NotAFixedPointError,
    NotInvariantError,
)
from switched_lindblad.linalg import as_real_matrix, solve_linear
from switched_lindblad.superoperators import subspace_blocks

if TYPE_CHECKING:
    from collections.abc import Sequence

    from switched_lindblad.linalg import RealMatrix
    from switched_lindblad.states import CoherenceVector
    from switched_lindblad.superoperators import SubspaceSplit, Superoperator

linearization_logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Linearization:
    """Translation data and the transformed generators ``A~_j``."""

    fixed_point: CoherenceVector
    t_q: RealMatrix
    t_r: RealMatrix
    t_r_inverse: RealMatrix
    transformed: tuple[RealMatrix, ...]
    offsets: tuple[RealMatrix, ...]
    """Residual affine parts ``T_R (b_j - A_j T_R^-1 T_Q)``, zero up to rounding."""

    @property
    def homogeneous(self) -> RealMatrix:
        """Return ``R`` with ``x = R @ (1/sqrt(N), v)``."""
        return np.column_stack(
            (np.sqrt(self.fixed_point.dim) * self.t_q, self.t_r),
        )


def build_linearization(
    superoperators: Sequence[Superoperator],
    fixed_point: CoherenceVector,
    t_r: RealMatrix | None = None,
) -> Linearization:
    """Return the joint linear representation of generators sharing ``fixed_point``.

    ``t_r`` may be any invertible matrix; it defaults to the identity.
    """
    size: int = fixed_point.r.shape[0]
    for index, superoperator in enumerate(superoperators):
        if superoperator.A.shape[0] != size:
            raise DimensionMismatchError(size, superoperator.A.shape[0])
        residual: float = float(
            np.linalg.norm(superoperator.A @ fixed_point.r + superoperator.b),
        )
        scale: float = max(1.0, float(np.linalg.norm(superoperator.A)))
        if residual > FIXED_POINT_TOLERANCE * scale:
            linearization_logger.debug(
                "Generator %d violates the fixed point by %.3e",
                index,
                residual,
            )
            raise NotAFixedPointError(index, residual)

    transform: RealMatrix = (
        np.eye(size) if t_r is None else as_real_matrix(t_r, name="T_R")
    )
    inverse: RealMatrix = solve_linear(transform, np.eye(size))
    t_q: RealMatrix = -transform @ fixed_point.r
    transformed: list[RealMatrix] = []
    offsets: list[RealMatrix] = []
    for superoperator in superoperators:
        transformed.append(transform @ superoperator.A @ inverse)
        offsets.append(
            transform @ (superoperator.b - superoperator.A @ inverse @ t_q),
        )
    linearization_logger.info(
        "Linearized %d generator(s) around the common fixed point",
        len(transformed),
    )
    return Linearization(
        fixed_point=fixed_point,
        t_q=t_q,
        t_r=transform,
        t_r_inverse=inverse,
        transformed=tuple(transformed),
        offsets=tuple(offsets),
    )


def to_translated(v_r: RealMatrix, linearization: Linearization) -> RealMatrix:
    """Map a coherence vector to the linear coordinates ``x``."""
    if v_r.shape[-1] != linearization.t_q.shape[0]:
        raise DimensionMismatchError(linearization.t_q.shape[0], v_r.shape[-1])
    return v_r @ linearization.t_r.T + linearization.t_q


def from_translated(x: RealMatrix, linearization: Linearization) -> RealMatrix:
    """Map linear coordinates back to the coherence vector."""
    if x.shape[-1] != linearization.t_q.shape[0]:
        raise DimensionMismatchError(linearization.t_q.shape[0], x.shape[-1])
    return (x - linearization.t_q) @ linearization.t_r_inverse.T


def reduce_to_perp(
    superoperators: Sequence[Superoperator],
    split: SubspaceSplit,
) -> list[RealMatrix]:
    """Return the ``L_perp`` blocks that drive the components outside ``H_S``."""
    blocks: list[RealMatrix] = []
    for index, superoperator in enumerate(superoperators):
        try:
            blocks.append(subspace_blocks(superoperator, split).l_perp)
        except NotInvariantError as not_invariant_err:
            linearization_logger.debug(
                "Generator %d does not leave the subspace invariant",
                index,
            )
            raise NotInvariantError(
                not_invariant_err.residual,
                str(index),
            ) from not_invariant_err
    return blocks
