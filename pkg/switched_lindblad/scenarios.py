"""Module with the scenario description and the built-in scenarios."""

from __future__ import annotations

__all__: list[str] = [
    "BUILTIN_SCENARIOS",
    "ScenarioSpec",
    "scenario_bell",
    "scenario_ghz",
    "scenario_ghz_subspace",
    "scenario_robustness_counterexample",
]

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Final, Literal, Union

import numpy as np

from switched_lindblad.constants import (
    BELL_HORIZON,
    DEFAULT_MIN_INTERVAL,
    DEFAULT_STEP,
    GHZ_HORIZON,
    ROBUSTNESS_HORIZON,
    SUBSPACE_HORIZON,
    TIME_TOLERANCE,
)
from switched_lindblad.errors import DimensionMismatchError
from switched_lindblad.lyapunov import check_simplex
from switched_lindblad.states import (
    DensityMatrix,
    basis_state,
    maximally_mixed,
    pauli,
    pure_state,
    tensor,
)
from switched_lindblad.superoperators import (
    LindbladGenerator,
    SubspaceSplit,
    subspace_split,
)

if TYPE_CHECKING:
    from switched_lindblad.linalg import ComplexMatrix

Target = Union[DensityMatrix, SubspaceSplit]

scenarios_logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScenarioSpec:
    """Everything needed to design the switching laws and compare them.

    ``weights`` may be empty, in which case a Hurwitz combination is searched
    for during design. ``cycle_order`` is the visiting order of the time-based
    law, ascending when empty.
    """

    name: str
    generators: tuple[LindbladGenerator, ...]
    target: Target
    weights: tuple[float, ...]
    initial_state: DensityMatrix
    estimated_state: DensityMatrix
    horizon: float
    step: float = DEFAULT_STEP
    min_interval: float = DEFAULT_MIN_INTERVAL
    rates: tuple[float, ...] = ()
    cycle_order: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.generators:
            msg: str = "A scenario needs at least one generator"
            raise ValueError(msg)
        dim: int = self.generators[0].dim
        for generator in self.generators:
            if generator.dim != dim:
                raise DimensionMismatchError(dim, generator.dim)
        for state in (self.initial_state, self.estimated_state):
            if state.dim != dim:
                raise DimensionMismatchError(dim, state.dim)
        target_dim: int = (
            self.target.dim
            if isinstance(self.target, (DensityMatrix, SubspaceSplit))
            else -1
        )
        if target_dim != dim:
            raise DimensionMismatchError(dim, target_dim)

        if self.weights:
            if len(self.weights) != len(self.generators):
                msg = (
                    f"Got {len(self.weights)} weight(s) for "
                    f"{len(self.generators)} generator(s)"
                )
                raise ValueError(msg)
            check_simplex(self.weights)
        rates: tuple[float, ...] = tuple(self.rates) or (1.0,) * len(self.generators)
        if len(rates) != len(self.generators) or any(not 0 < r <= 1 for r in rates):
            msg = f"Rates must lie in (0, 1], one per generator, got {rates}"
            raise ValueError(msg)
        object.__setattr__(self, "rates", rates)
        if self.cycle_order and sorted(self.cycle_order) != list(
            range(len(self.generators)),
        ):
            msg = (
                f"Cycle order {tuple(self.cycle_order)} is not a permutation of the "
                "generator indices"
            )
            raise ValueError(msg)

        if not self.step > 0:
            msg = f"Integration step must be positive, got {self.step}"
            raise ValueError(msg)
        for name, value in (
            ("min_interval", self.min_interval),
            ("horizon", self.horizon),
        ):
            multiple: int = round(value / self.step)
            tolerance: float = TIME_TOLERANCE * max(1.0, value)
            if multiple < 1 or abs(multiple * self.step - value) > tolerance:
                msg = f"{name} {value} must be a positive multiple of the step {self.step}"
                raise ValueError(msg)

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    @property
    def is_subspace(self) -> bool:
        return isinstance(self.target, SubspaceSplit)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}('{self.name}')"

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(name={self.name!r}, dim={self.dim}, "
            f"generators={len(self.generators)}, horizon={self.horizon}, "
            f"step={self.step}, min_interval={self.min_interval})"
        )


def _zeros(dim: int) -> ComplexMatrix:
    return np.zeros((dim, dim), dtype=np.complex128)


def _transition(dim: int, *entries: tuple[int, int, complex]) -> ComplexMatrix:
    """Return ``sum c |row><col|`` over ``(row, col, c)``."""
    operator: ComplexMatrix = _zeros(dim)
    for row, col, coefficient in entries:
        operator[row, col] = coefficient
    return operator


def scenario_bell() -> ScenarioSpec:
    """Return the two-qubit Bell-state preparation scenario.

    One generator is the Hamiltonian ``sigma_y x sigma_0 + sigma_0 x sigma_y``
    alone, the other the noise operator ``sigma_z x I - i sigma_y x sigma_x``
    alone. Both fix ``(|00> + |11>)/sqrt(2)``.
    """
    identity: ComplexMatrix = np.eye(2, dtype=np.complex128)
    hamiltonian: ComplexMatrix = tensor(pauli("y"), pauli("0")) + tensor(
        pauli("0"),
        pauli("y"),
    )
    noise: ComplexMatrix = tensor(pauli("z"), identity) - 1j * tensor(
        pauli("y"),
        pauli("x"),
    )
    return ScenarioSpec(
        name="bell",
        generators=(
            LindbladGenerator(hamiltonian, label="hamiltonian"),
            LindbladGenerator(_zeros(4), (noise,), label="dissipator"),
        ),
        target=pure_state([1, 0, 0, 1]),
        weights=(0.5, 0.5),
        initial_state=DensityMatrix(basis_state(4, 0)),
        estimated_state=maximally_mixed(4),
        horizon=BELL_HORIZON,
        rates=(1.0, 1.0),
    )


def _ghz_noise_operators() -> tuple[ComplexMatrix, ComplexMatrix]:
    identity: ComplexMatrix = np.eye(2, dtype=np.complex128)
    first: ComplexMatrix = tensor(_transition(4, (0, 1, 1), (3, 2, 1)), identity)
    second: ComplexMatrix = tensor(identity, _transition(4, (0, 1, 1), (3, 2, 1j)))
    return first, second


def scenario_ghz() -> ScenarioSpec:
    """Return the three-qubit GHZ-state preparation scenario.

    The time-based law visits the Hamiltonian, then ``L2``, then ``L1``.
    """
    identity: ComplexMatrix = np.eye(2, dtype=np.complex128)
    hamiltonian: ComplexMatrix = tensor(pauli("x"), identity, identity) - tensor(
        identity,
        pauli("x"),
        pauli("x"),
    )
    first, second = _ghz_noise_operators()
    return ScenarioSpec(
        name="ghz",
        generators=(
            LindbladGenerator(hamiltonian, label="hamiltonian"),
            LindbladGenerator(_zeros(8), (first,), label="L1"),
            LindbladGenerator(_zeros(8), (second,), label="L2"),
        ),
        target=pure_state([1, 0, 0, 0, 0, 0, 0, 1]),
        weights=(1 / 3, 1 / 3, 1 / 3),
        initial_state=DensityMatrix(basis_state(8, 0)),
        estimated_state=maximally_mixed(8),
        horizon=GHZ_HORIZON,
        rates=(1.0, 1.0, 1.0),
        cycle_order=(0, 2, 1),
    )


def scenario_robustness_counterexample(
    estimate: Literal["pure", "mixed"] = "pure",
) -> ScenarioSpec:
    """Return the three-level scenario where a rank-deficient estimate fails.

    With the ``"pure"`` estimate ``|1><1|`` the state-based laws only ever pick
    the first generator, which alone does not move ``|2><2|``; the ``"mixed"``
    estimate ``I/3`` restores convergence.
    """
    estimated_state: DensityMatrix = (
        DensityMatrix(basis_state(3, 1)) if estimate == "pure" else maximally_mixed(3)
    )
    return ScenarioSpec(
        name="robustness" if estimate == "pure" else "robustness-mixed",
        generators=(
            LindbladGenerator(_zeros(3), (_transition(3, (0, 1, 1)),), label="L1"),
            LindbladGenerator(_zeros(3), (_transition(3, (1, 2, 1)),), label="L2"),
        ),
        target=DensityMatrix(basis_state(3, 0)),
        weights=(0.5, 0.5),
        initial_state=DensityMatrix(basis_state(3, 2)),
        estimated_state=estimated_state,
        horizon=ROBUSTNESS_HORIZON,
        rates=(1.0, 1.0),
    )


def scenario_ghz_subspace() -> ScenarioSpec:
    """Return the stabilization of ``span{|000>, |111>}`` by the GHZ noise operators.

    The GHZ Hamiltonian does not leave the subspace invariant and is left out.
    """
    first, second = _ghz_noise_operators()
    projector: ComplexMatrix = basis_state(8, 0) + basis_state(8, 7)
    return ScenarioSpec(
        name="subspace",
        generators=(
            LindbladGenerator(_zeros(8), (first,), label="L1"),
            LindbladGenerator(_zeros(8), (second,), label="L2"),
        ),
        target=subspace_split(projector),
        weights=(0.5, 0.5),
        initial_state=DensityMatrix(basis_state(8, 2)),
        estimated_state=maximally_mixed(8),
        horizon=SUBSPACE_HORIZON,
        rates=(1.0, 1.0),
    )


BUILTIN_SCENARIOS: Final[dict[str, Callable[[], ScenarioSpec]]] = {
    "bell": scenario_bell,
    "ghz": scenario_ghz,
    "robustness": scenario_robustness_counterexample,
    "subspace": scenario_ghz_subspace,
}
