"""Module designing the switching laws of a scenario and comparing them.

All strategies are evolved on the full vectors ``(1/sqrt(N), v)`` with the
generators' superoperators, so every logged state is an exact image of the
initial density matrix. The laws themselves are designed on the reduced linear
coordinates ``x = R (1/sqrt(N), v)``.
"""

from __future__ import annotations

__all__: list[str] = [
    "STRATEGIES",
    "DesignReport",
    "StrategySeries",
    "SummaryRow",
    "TrajectoryLog",
    "design",
    "first_crossing",
    "format_design_report",
    "format_summary",
    "run_comparison",
    "summarize",
]

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Final, NamedTuple

import numpy as np

from switched_lindblad.constants import (
    FIXED_POINT_TOLERANCE,
    HURWITZ_SEARCH_BUDGET,
    PSD_TOLERANCE,
    SIMULATION_LOG_LEVEL,
)
from switched_lindblad.errors import (
    DesignError,
    NotHurwitzError,
    TargetMismatchError,
)
from switched_lindblad.linearization import build_linearization, reduce_to_perp
from switched_lindblad.lyapunov import (
    lyapunov_data,
    search_hurwitz_combination,
    verify_assumption1,
)
from switched_lindblad.states import (
    DensityMatrix,
    OperatorBasis,
    euclidean_distance,
    gell_mann_basis,
    to_coherence,
)
from switched_lindblad.superoperators import (
    SubspaceSplit,
    common_fixed_point,
    subspace_blocks,
    vectorize,
)
from switched_lindblad.switching import (
    ConstantSchedule,
    StateBasedLaw,
    StateBasedMode,
    certify_epsilon,
    dwell_time_bound,
    evolve,
    run_steepest,
    run_suboptimal,
    time_based_law,
    time_grid,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from switched_lindblad.linalg import RealMatrix
    from switched_lindblad.lyapunov import ConvexCombination, LyapunovData
    from switched_lindblad.scenarios import ScenarioSpec
    from switched_lindblad.superoperators import Superoperator
    from switched_lindblad.switching import Schedule, Trajectory

STRATEGIES: Final[tuple[str, ...]] = (
    "no_switch",
    "time_based",
    "steepest",
    "suboptimal",
    "steepest_estimated",
    "suboptimal_estimated",
)
"""Strategy names in log order; ``*_estimated`` follow the estimated state."""

simulation_logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DesignReport:
    """The designed switching laws of a scenario and their certificates."""

    scenario: str
    superoperators: tuple[Superoperator, ...]
    matrices: tuple[RealMatrix, ...]
    reduction: RealMatrix
    combination: ConvexCombination
    lyapunov: LyapunovData
    epsilon: float
    certified: bool
    dwell_bound: float
    residual: float
    """Fixed-point residual, or zero-structure residual for subspace targets."""
    target_vector: RealMatrix | None = None
    cycle_order: tuple[int, ...] = ()
    """Visiting order of the time-based law, ascending when empty."""

    @property
    def full_matrices(self) -> tuple[RealMatrix, ...]:
        return tuple(superoperator.full for superoperator in self.superoperators)


class StrategySeries(NamedTuple):
    lyapunov: RealMatrix
    euclidean: RealMatrix
    trace_distance: RealMatrix
    active: npt.NDArray[np.int64]
    min_eigenvalue: RealMatrix
    switches: int


@dataclass(frozen=True, eq=False)
class TrajectoryLog:
    """Metric series of every strategy sampled on a common time grid.

    For subspace targets ``trace_distance`` holds ``1 - Tr(Pi_S rho)`` and
    ``euclidean`` the norm of the components outside the subspace. The active
    index of ``no_switch`` is ``-1``.
    """

    scenario: str
    times: RealMatrix
    series: dict[str, StrategySeries]

    def __post_init__(self) -> None:
        if np.any(np.diff(self.times) <= 0):
            msg: str = "Sampled times must be ascending"
            raise ValueError(msg)
        for name, series in self.series.items():
            lengths: set[int] = {len(values) for values in series[:5]}
            if lengths != {self.times.shape[0]}:
                msg = f"Series '{name}' does not match the {self.times.shape[0]} sampled times"
                raise ValueError(msg)

    @property
    def strategies(self) -> tuple[str, ...]:
        return tuple(self.series)


class SummaryRow(NamedTuple):
    strategy: str
    final_trace_distance: float
    first_crossing: float | None
    switches: int


def _combination(
    spec: ScenarioSpec,
    matrices: tuple[RealMatrix, ...],
) -> ConvexCombination:
    if spec.weights:
        return verify_assumption1(matrices, spec.weights)
    found: ConvexCombination | None = search_hurwitz_combination(
        matrices,
        HURWITZ_SEARCH_BUDGET,
    )
    if found is None:
        msg: str = (
            f"no Hurwitz convex combination among {HURWITZ_SEARCH_BUDGET} candidates"
        )
        raise NotHurwitzError(msg)
    return found


def _reduce(
    spec: ScenarioSpec,
    superoperators: tuple[Superoperator, ...],
    basis: OperatorBasis,
) -> tuple[tuple[RealMatrix, ...], RealMatrix, float, RealMatrix | None]:
    """Return the reduced matrices, ``R``, the residual and the target vector."""
    if isinstance(spec.target, SubspaceSplit):
        split: SubspaceSplit = spec.target
        matrices: tuple[RealMatrix, ...] = tuple(reduce_to_perp(superoperators, split))
        residual: float = max(
            subspace_blocks(superoperator, split).residual
            for superoperator in superoperators
        )
        inner: int = split.s_dim**2
        return matrices, split.change_of_basis()[inner:], residual, None

    target: DensityMatrix = spec.target
    fixed_point = common_fixed_point(superoperators, basis)
    distance: float = euclidean_distance(fixed_point, to_coherence(target, basis))
    if distance > FIXED_POINT_TOLERANCE * max(1.0, spec.dim):
        raise TargetMismatchError(distance)
    linearization = build_linearization(superoperators, fixed_point)
    residual = max(
        float(np.linalg.norm(superoperator.A @ fixed_point.r + superoperator.b))
        for superoperator in superoperators
    )
    return linearization.transformed, linearization.homogeneous, residual, fixed_point.r


def design(spec: ScenarioSpec) -> DesignReport:
    """Design the laws of ``spec``; design errors are logged with the scenario name."""
    basis: OperatorBasis = gell_mann_basis(spec.dim)
    superoperators: tuple[Superoperator, ...] = tuple(
        vectorize(generator, basis) for generator in spec.generators
    )
    try:
        matrices, reduction, residual, target_vector = _reduce(
            spec,
            superoperators,
            basis,
        )
        combination: ConvexCombination = _combination(spec, matrices)
        lyapunov: LyapunovData = lyapunov_data(combination, matrices)
    except DesignError as design_err:
        simulation_logger.error(
            "Design of scenario '%s' failed: %s",
            spec.name,
            design_err,
        )
        raise

    active_generators: int = sum(weight > 0 for weight in combination.weights)
    epsilon: float = active_generators * spec.min_interval
    certified: bool = certify_epsilon(
        combination,
        matrices,
        epsilon,
        spec.cycle_order,
    )
    if not certified:
        simulation_logger.warning(
            "Cycle period %g of scenario '%s' is not certified, the time-based law "
            "may not converge",
            epsilon,
            spec.name,
        )
    return DesignReport(
        scenario=spec.name,
        superoperators=superoperators,
        matrices=matrices,
        reduction=reduction,
        combination=combination,
        lyapunov=lyapunov,
        epsilon=epsilon,
        certified=certified,
        dwell_bound=dwell_time_bound(lyapunov, matrices, spec.rates),
        residual=residual,
        target_vector=target_vector,
        cycle_order=spec.cycle_order,
    )


def _metrics(
    spec: ScenarioSpec,
    report: DesignReport,
    basis: OperatorBasis,
    states: RealMatrix,
    active: npt.NDArray[np.int64],
    switches: int,
) -> StrategySeries:
    x: RealMatrix = states @ report.reduction.T
    rho: npt.NDArray[np.complex128] = basis.combine(states)
    rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    min_eigenvalue: RealMatrix = np.linalg.eigvalsh(rho)[:, 0]
    if isinstance(spec.target, SubspaceSplit):
        euclidean: RealMatrix = np.linalg.norm(x, axis=1)
        population: RealMatrix = np.einsum("ab,tba->t", spec.target.projector, rho).real
        distance: RealMatrix = np.clip(1 - population, 0.0, 1.0)
    else:
        euclidean = np.linalg.norm(states[:, 1:] - report.target_vector, axis=1)
        differences: RealMatrix = np.linalg.eigvalsh(rho - spec.target.matrix)
        distance = np.clip(0.5 * np.abs(differences).sum(axis=1), 0.0, 1.0)
    if float(min_eigenvalue.min()) < -PSD_TOLERANCE:
        simulation_logger.warning(
            "State left the state space by %.3e", -float(min_eigenvalue.min()),
        )
    return StrategySeries(
        lyapunov=report.lyapunov.value(x),
        euclidean=euclidean,
        trace_distance=distance,
        active=active,
        min_eigenvalue=min_eigenvalue,
        switches=switches,
    )


def run_comparison(
    spec: ScenarioSpec,
    *,
    refine: bool = False,
    report: DesignReport | None = None,
) -> TrajectoryLog:
    """Run every strategy of :data:`STRATEGIES` on ``spec``.

    State-based laws are designed on the estimated initial state and their
    switching sequences are replayed open-loop on the actual one. The runs are
    independent and execute in a thread pool.
    """
    report = report or design(spec)
    basis: OperatorBasis = gell_mann_basis(spec.dim)
    actual: RealMatrix = to_coherence(spec.initial_state, basis).homogeneous()
    estimated: RealMatrix = to_coherence(spec.estimated_state, basis).homogeneous()
    full: tuple[RealMatrix, ...] = report.full_matrices
    x_estimated: RealMatrix = report.reduction @ estimated

    def replay(
        h0: RealMatrix,
        schedule: Schedule,
        matrices: tuple[RealMatrix, ...] = full,
    ) -> Trajectory:
        return evolve(h0, matrices, schedule, spec.horizon, spec.step)

    def no_switch() -> dict[str, StrategySeries]:
        combined: RealMatrix = sum(
            (
                weight * matrix
                for weight, matrix in zip(report.combination.weights, full)
            ),
            np.zeros_like(full[0]),
        )
        trajectory: Trajectory = replay(actual, ConstantSchedule(0), (combined,))
        active: npt.NDArray[np.int64] = np.full_like(trajectory.active, -1)
        return {
            "no_switch": _metrics(spec, report, basis, trajectory.states, active, 0),
        }

    def time_based() -> dict[str, StrategySeries]:
        trajectory: Trajectory = replay(
            actual,
            time_based_law(
                report.combination,
                report.epsilon,
                report.cycle_order,
            ),
        )
        switches: int = int(np.count_nonzero(np.diff(trajectory.active)))
        return {
            "time_based": _metrics(
                spec,
                report,
                basis,
                trajectory.states,
                trajectory.active,
                switches,
            ),
        }

    def state_based(name: str) -> dict[str, StrategySeries]:
        if name == "steepest":
            law: StateBasedLaw = StateBasedLaw(
                StateBasedMode.STEEPEST_FIXED_INTERVAL,
                report.lyapunov,
                min_interval=spec.min_interval,
            )
            designed = run_steepest(
                x_estimated,
                report.matrices,
                law,
                spec.horizon,
                spec.step,
            )
        else:
            law = StateBasedLaw(
                StateBasedMode.SUBOPTIMAL,
                report.lyapunov,
                rates=spec.rates,
            )
            designed = run_suboptimal(
                x_estimated,
                report.matrices,
                law,
                spec.horizon,
                spec.step,
                refine=refine,
            )
        results: dict[str, StrategySeries] = {}
        for key, h0 in ((name, actual), (f"{name}_estimated", estimated)):
            trajectory: Trajectory = replay(h0, designed.record)
            results[key] = _metrics(
                spec,
                report,
                basis,
                trajectory.states,
                trajectory.active,
                designed.record.switch_count,
            )
        return results

    runners: list[Callable[[], dict[str, StrategySeries]]] = [
        no_switch,
        time_based,
        lambda: state_based("steepest"),
        lambda: state_based("suboptimal"),
    ]
    merged: dict[str, StrategySeries] = {}
    with ThreadPoolExecutor(max_workers=len(runners)) as executor:
        for future in [executor.submit(runner) for runner in runners]:
            merged.update(future.result())

    log: TrajectoryLog = TrajectoryLog(
        scenario=spec.name,
        times=time_grid(spec.horizon, spec.step),
        series={name: merged[name] for name in STRATEGIES},
    )
    simulation_logger.log(
        SIMULATION_LOG_LEVEL,
        "Compared %d strategies on scenario '%s' over %g time units",
        len(log.series),
        spec.name,
        spec.horizon,
    )
    return log


def first_crossing(
    times: RealMatrix,
    values: RealMatrix,
    fraction: float = 0.1,
) -> float | None:
    """Return the first time ``values`` drops to ``fraction`` of its initial value."""
    below: npt.NDArray[np.bool_] = values <= fraction * values[0]
    if not np.any(below):
        return None
    return float(times[int(np.argmax(below))])


def summarize(log: TrajectoryLog) -> list[SummaryRow]:
    """Return one summary row per strategy."""
    return [
        SummaryRow(
            strategy=name,
            final_trace_distance=float(series.trace_distance[-1]),
            first_crossing=first_crossing(log.times, series.lyapunov),
            switches=series.switches,
        )
        for name, series in log.series.items()
    ]


def format_summary(rows: list[SummaryRow]) -> str:
    lines: list[str] = [
        f"{'strategy':<22}{'final distance':>16}"
        f"{'V <= 0.1 V(0) at':>20}{'switches':>10}",
    ]
    for row in rows:
        crossing: str = (
            "-" if row.first_crossing is None else f"{row.first_crossing:.2f}"
        )
        lines.append(
            f"{row.strategy:<22}{row.final_trace_distance:>16.3e}"
            f"{crossing:>20}{row.switches:>10}",
        )
    return "\n".join(lines)


def format_design_report(report: DesignReport) -> str:
    """Return a human readable description of the designed laws."""
    eigenvalues: RealMatrix = np.linalg.eigvalsh(report.lyapunov.p)
    weights: str = ", ".join(f"{weight:.6g}" for weight in report.combination.weights)
    certification: str = "certified" if report.certified else "not certified"
    order: tuple[int, ...] = report.cycle_order or tuple(
        range(len(report.combination.weights)),
    )
    return "\n".join(
        (
            f"scenario: {report.scenario}",
            f"reduced dimension: {report.matrices[0].shape[0]}",
            f"weights: ({weights})",
            f"residual: {report.residual:.3e}",
            f"P eigenvalues: [{eigenvalues[0]:.6g}, {eigenvalues[-1]:.6g}]",
            "P:",
            np.array2string(
                report.lyapunov.p,
                precision=6,
                suppress_small=True,
                threshold=report.lyapunov.p.size,
                max_line_width=120,
            ),
            f"dwell-time bound: {report.dwell_bound:.6e}",
            f"epsilon: {report.epsilon:g} ({certification})",
            f"cycle order: {order}",
        ),
    )
