"""Module with the switching laws and their execution on the linear coordinates.

Every run works on the translated coordinates ``x`` in which each generator is
the linear flow ``d/dt x = A_j x``. Runs sample the state on a uniform grid of
``step``; the switching instants of a schedule need not lie on the grid.
"""

from __future__ import annotations

__all__: list[str] = [
    "ConstantSchedule",
    "Schedule",
    "Segment",
    "StateBasedLaw",
    "StateBasedMode",
    "SwitchRecord",
    "SwitchedRun",
    "TimeBasedLaw",
    "Trajectory",
    "certify_epsilon",
    "cyclic_law",
    "dwell_time_bound",
    "evolve",
    "hermitian_cyclic_check",
    "monodromy",
    "run_steepest",
    "run_suboptimal",
    "steepest_index",
    "time_based_law",
    "time_grid",
]

import abc
import bisect
import enum
import functools
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import scipy.optimize

from switched_lindblad.constants import (
    CONVERGED_TOLERANCE,
    DESIGN_LOG_LEVEL,
    DWELL_THETA_MAX,
    FIXED_POINT_TOLERANCE,
    MONODROMY_MARGIN,
    PROPAGATOR_CACHE_SIZE,
    REFINE_FRACTION,
    SYMMETRY_TOLERANCE,
    TIME_TOLERANCE,
    WEIGHT_TOLERANCE,
)
from switched_lindblad.linalg import (
    expm,
    is_symmetric,
    nullspace,
    spectral_norm,
    spectral_radius,
)
from switched_lindblad.lyapunov import check_simplex

if sys.version_info >= (3, 12):  # pragma: >=3.12 cover
    from typing import override
else:  # pragma: <3.12 cover
    from typing_extensions import override

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from switched_lindblad.linalg import RealMatrix
    from switched_lindblad.lyapunov import ConvexCombination, LyapunovData

switching_logger: logging.Logger = logging.getLogger(__name__)


class Segment(NamedTuple):
    """The generator ``index`` is active on ``[start, stop)`` of every cycle."""

    index: int
    start: float
    stop: float


class Schedule(abc.ABC):
    """A switching signal mapping time to the index of the active generator."""

    @abc.abstractmethod
    def index_at(self, time: float) -> int:
        """Return the generator active at ``time`` (right continuous)."""

    @abc.abstractmethod
    def breakpoints(self, start: float, stop: float) -> list[float]:
        """Return the switching instants strictly inside ``(start, stop)``."""

    def pieces(self, start: float, stop: float) -> list[tuple[int, float]]:
        """Return ``(index, duration)`` pieces covering ``[start, stop)`` in order."""
        edges: list[float] = [start, *self.breakpoints(start, stop), stop]
        result: list[tuple[int, float]] = []
        for left, right in zip(edges, edges[1:]):
            if right - left <= TIME_TOLERANCE:
                continue
            index: int = self.index_at(0.5 * (left + right))
            if result and result[-1][0] == index:
                result[-1] = (index, result[-1][1] + right - left)
            else:
                result.append((index, right - left))
        return result


@dataclass(frozen=True, eq=False)
class TimeBasedLaw(Schedule):
    """Cyclic open-loop law giving generator ``j`` the share ``weights[j]`` of each period.

    ``order`` is the order in which the generators are visited within a cycle;
    generators with zero weight are skipped.
    """

    weights: tuple[float, ...]
    period: float
    order: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        weights: tuple[float, ...] = tuple(float(weight) for weight in self.weights)
        check_simplex(weights)
        if not self.period > 0:
            msg: str = f"Cycle period must be positive, got {self.period}"
            raise ValueError(msg)
        order: tuple[int, ...] = tuple(self.order) or tuple(range(len(weights)))
        if sorted(order) != list(range(len(weights))):
            msg = f"Order {order} is not a permutation of the generator indices"
            raise ValueError(msg)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "order", order)

    @functools.cached_property
    def segments(self) -> tuple[Segment, ...]:
        """Return the segments partitioning ``[0, period)``."""
        segments: list[Segment] = []
        start: float = 0.0
        for index in self.order:
            if self.weights[index] <= WEIGHT_TOLERANCE:
                continue
            stop: float = start + self.weights[index] * self.period
            segments.append(Segment(index, start, stop))
            start = stop
        last: Segment = segments[-1]
        segments[-1] = Segment(last.index, last.start, self.period)
        return tuple(segments)

    def _phase(self, time: float) -> tuple[int, float]:
        cycle: int = math.floor(time / self.period)
        phase: float = time - cycle * self.period
        if phase >= self.period - TIME_TOLERANCE:
            return cycle + 1, 0.0
        return cycle, max(phase, 0.0)

    @override
    def index_at(self, time: float) -> int:
        _, phase = self._phase(time)
        for segment in self.segments:
            if phase < segment.stop - TIME_TOLERANCE:
                return segment.index
        return self.segments[-1].index  # pragma: no cover

    @override
    def breakpoints(self, start: float, stop: float) -> list[float]:
        first, _ = self._phase(start)
        last, _ = self._phase(stop)
        return [
            cycle * self.period + segment.start
            for cycle in range(first, last + 1)
            for segment in self.segments
            if start + TIME_TOLERANCE
            < cycle * self.period + segment.start
            < stop - TIME_TOLERANCE
        ]

    def __str__(self) -> str:
        return f"{self.__class__.__name__}(period={self.period:g})"


@dataclass(frozen=True, eq=False)
class SwitchRecord(Schedule):
    """Switching instants ``t_k`` and the generator ``j(t_k)`` activated at each."""

    times: tuple[float, ...]
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.times or len(self.times) != len(self.indices):
            msg: str = (
                f"Got {len(self.times)} switching time(s) "
                f"for {len(self.indices)} index(es)"
            )
            raise ValueError(msg)
        if any(later <= earlier for earlier, later in zip(self.times, self.times[1:])):
            msg = "Switching times must be strictly increasing"
            raise ValueError(msg)
        if min(self.indices) < 0:
            msg = f"Generator indices must be non negative, got {self.indices}"
            raise ValueError(msg)

    @property
    def switch_count(self) -> int:
        """Return the number of switches after the initial selection."""
        return len(self.times) - 1

    @property
    def gaps(self) -> RealMatrix:
        """Return the time spent between consecutive switches."""
        return np.diff(np.asarray(self.times, dtype=np.float64))

    @override
    def index_at(self, time: float) -> int:
        position: int = bisect.bisect_right(self.times, time + TIME_TOLERANCE) - 1
        return self.indices[max(position, 0)]

    @override
    def breakpoints(self, start: float, stop: float) -> list[float]:
        first: int = bisect.bisect_right(self.times, start + TIME_TOLERANCE)
        last: int = bisect.bisect_left(self.times, stop - TIME_TOLERANCE, lo=first)
        return list(self.times[first:last])

    def __str__(self) -> str:
        return f"{self.__class__.__name__}(switches={self.switch_count})"


@dataclass(frozen=True)
class ConstantSchedule(Schedule):
    """Keeps a single generator active forever."""

    index: int

    @override
    def index_at(self, time: float) -> int:
        return self.index

    @override
    def breakpoints(self, start: float, stop: float) -> list[float]:
        return []


class StateBasedMode(enum.Enum):
    STEEPEST_FIXED_INTERVAL = "steepest_fixed_interval"
    SUBOPTIMAL = "suboptimal"


@dataclass(frozen=True, eq=False)
class StateBasedLaw:
    """Feedback law selecting generators from the Lyapunov derivatives ``x^T Q_j x``.

    The steepest-descent mode re-selects every ``min_interval``; the suboptimal
    mode keeps a generator while ``x^T Q_j x <= -r_j x^T x``.
    """

    mode: StateBasedMode
    lyapunov: LyapunovData
    min_interval: float | None = None
    rates: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.mode is StateBasedMode.STEEPEST_FIXED_INTERVAL and not (
            self.min_interval is not None and self.min_interval > 0
        ):
            msg: str = f"Minimal switching interval must be positive, got {self.min_interval}"
            raise ValueError(msg)
        if self.mode is StateBasedMode.SUBOPTIMAL:
            rates: tuple[float, ...] = tuple(float(rate) for rate in self.rates)
            if len(rates) != len(self.lyapunov.q):
                msg = f"Got {len(rates)} rate(s) for {len(self.lyapunov.q)} generator(s)"
                raise ValueError(msg)
            if any(not 0 < rate <= 1 for rate in rates):
                msg = f"Rates must lie in (0, 1], got {rates}"
                raise ValueError(msg)
            object.__setattr__(self, "rates", rates)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}({self.mode.value})"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States sampled on the grid and the generator active from each sample on."""

    times: RealMatrix
    states: RealMatrix
    active: npt.NDArray[np.int64]


class SwitchedRun(NamedTuple):
    record: SwitchRecord
    trajectory: Trajectory


class _Propagators:
    """Memoized ``expm(A_j t)`` keyed by generator and rounded duration."""

    def __init__(self, matrices: Sequence[RealMatrix]) -> None:
        self.matrices: tuple[RealMatrix, ...] = tuple(matrices)
        self._cached = functools.lru_cache(maxsize=PROPAGATOR_CACHE_SIZE)(self._compute)

    def _compute(self, index: int, duration: float) -> RealMatrix:
        return expm(self.matrices[index] * duration)

    def __call__(self, index: int, duration: float) -> RealMatrix:
        if not 0 <= index < len(self.matrices):
            msg: str = f"Generator index {index} out of range for {len(self.matrices)} generator(s)"
            raise ValueError(msg)
        return self._cached(index, round(duration, 12))


def time_grid(horizon: float, step: float) -> RealMatrix:
    """Return ``0, step, ..., horizon``; ``horizon`` must be a multiple of ``step``."""
    if not step > 0:
        msg: str = f"Integration step must be positive, got {step}"
        raise ValueError(msg)
    if horizon < 0:
        msg = f"Horizon must be non negative, got {horizon}"
        raise ValueError(msg)
    count: int = round(horizon / step)
    if abs(count * step - horizon) > TIME_TOLERANCE * max(1.0, horizon):
        msg = f"Horizon {horizon} is not a multiple of the step {step}"
        raise ValueError(msg)
    return step * np.arange(count + 1, dtype=np.float64)


def _grid_multiple(interval: float, step: float) -> int:
    multiple: int = round(interval / step)
    tolerance: float = TIME_TOLERANCE * max(1.0, interval)
    if multiple < 1 or abs(multiple * step - interval) > tolerance:
        msg: str = f"Interval {interval} is not a positive multiple of the step {step}"
        raise ValueError(msg)
    return multiple


def time_based_law(
    combination: ConvexCombination,
    epsilon: float,
    order: Sequence[int] = (),
) -> TimeBasedLaw:
    """Return the cyclic law of period ``epsilon`` visiting generators in ``order``.

    An empty ``order`` visits the generators in ascending order.
    """
    law: TimeBasedLaw = TimeBasedLaw(combination.weights, epsilon, tuple(order))
    switching_logger.info("Built %s with %d segment(s)", law, len(law.segments))
    return law


def cyclic_law(durations: Sequence[float]) -> TimeBasedLaw:
    """Return the cyclic law keeping generator ``j`` active for ``durations[j]``."""
    if not durations or min(durations) <= 0:
        msg: str = f"Segment durations must be positive, got {tuple(durations)}"
        raise ValueError(msg)
    period: float = math.fsum(durations)
    weights: list[float] = [duration / period for duration in durations]
    weights[-1] = 1 - math.fsum(weights[:-1])
    return TimeBasedLaw(tuple(weights), period)


def monodromy(law: TimeBasedLaw, matrices: Sequence[RealMatrix]) -> RealMatrix:
    """Return the state transition matrix over one cycle of ``law``."""
    result: RealMatrix = np.eye(matrices[0].shape[0])
    for segment in law.segments:
        result = expm(matrices[segment.index] * (segment.stop - segment.start)) @ result
    return result


def certify_epsilon(
    combination: ConvexCombination,
    matrices: Sequence[RealMatrix],
    epsilon: float,
    order: Sequence[int] = (),
) -> bool:
    """Check that the time-based law of period ``epsilon`` contracts every cycle.

    The law is accepted when the spectral radius of its monodromy is below one.
    """
    if not epsilon > 0:
        msg: str = f"Cycle period must be positive, got {epsilon}"
        raise ValueError(msg)
    law: TimeBasedLaw = TimeBasedLaw(combination.weights, epsilon, tuple(order))
    radius: float = spectral_radius(monodromy(law, matrices))
    certified: bool = radius < 1 - MONODROMY_MARGIN
    switching_logger.log(
        DESIGN_LOG_LEVEL,
        "Monodromy spectral radius at epsilon=%g is %.12f (%s)",
        epsilon,
        radius,
        "certified" if certified else "not certified",
    )
    return certified


def steepest_index(x: RealMatrix, lyapunov: LyapunovData) -> int:
    """Return ``argmin_k x^T Q_k x``, the lowest index on ties."""
    return int(np.argmin(lyapunov.rates(x)))


def _converged(x: RealMatrix, scale: float) -> bool:
    """Check whether ``x`` is rounding noise relative to an initial norm ``scale``."""
    return float(np.linalg.norm(x)) <= CONVERGED_TOLERANCE * scale


def evolve(
    x0: RealMatrix,
    matrices: Sequence[RealMatrix],
    schedule: Schedule,
    horizon: float,
    step: float,
) -> Trajectory:
    """Replay ``schedule`` from ``x0``; switching instants may fall between samples."""
    times: RealMatrix = time_grid(horizon, step)
    propagators: _Propagators = _Propagators(matrices)
    states: RealMatrix = np.empty((times.shape[0], x0.shape[0]))
    active: npt.NDArray[np.int64] = np.empty(times.shape[0], dtype=np.int64)
    states[0] = x0
    for position in range(times.shape[0] - 1):
        x: RealMatrix = states[position]
        for index, duration in schedule.pieces(times[position], times[position + 1]):
            x = propagators(index, duration) @ x
        states[position + 1] = x
        active[position] = schedule.index_at(times[position])
    active[-1] = schedule.index_at(times[-1])
    return Trajectory(times, states, active)


def run_steepest(
    x0: RealMatrix,
    matrices: Sequence[RealMatrix],
    law: StateBasedLaw,
    horizon: float,
    step: float,
) -> SwitchedRun:
    """Run the steepest-descent law, re-selecting the generator every ``min_interval``.

    Once ``x`` has decayed to ``CONVERGED_TOLERANCE`` times its initial norm the
    current generator is kept.
    """
    if (
        law.mode is not StateBasedMode.STEEPEST_FIXED_INTERVAL
        or law.min_interval is None
    ):
        msg: str = f"{law} is not a steepest-descent law"
        raise ValueError(msg)
    if horizon < law.min_interval:
        msg = f"Horizon {horizon} is shorter than the switching interval {law.min_interval}"
        raise ValueError(msg)
    times: RealMatrix = time_grid(horizon, step)
    stride: int = _grid_multiple(law.min_interval, step)
    propagators: _Propagators = _Propagators(matrices)
    states: RealMatrix = np.empty((times.shape[0], x0.shape[0]))
    active: npt.NDArray[np.int64] = np.empty(times.shape[0], dtype=np.int64)
    states[0] = x0
    scale: float = float(np.linalg.norm(x0))
    index: int = steepest_index(x0, law.lyapunov)
    switch_times: list[float] = [0.0]
    switch_indices: list[int] = [index]
    for position in range(times.shape[0] - 1):
        if position % stride == 0 and not _converged(states[position], scale):
            index = steepest_index(states[position], law.lyapunov)
            if switch_indices[-1] != index:
                switch_times.append(float(times[position]))
                switch_indices.append(index)
        active[position] = index
        states[position + 1] = (
            propagators(index, times[position + 1] - times[position]) @ states[position]
        )
    active[-1] = index
    record: SwitchRecord = SwitchRecord(tuple(switch_times), tuple(switch_indices))
    switching_logger.info(
        "Steepest-descent run finished with %d switch(es)",
        record.switch_count,
    )
    return SwitchedRun(record, Trajectory(times, states, active))


def _violates(x: RealMatrix, q: RealMatrix, rate: float) -> bool:
    return float(x @ q @ x) > -rate * float(x @ x)


def _refine_crossing(
    x: RealMatrix,
    matrix: RealMatrix,
    q: RealMatrix,
    rate: float,
    interval: float,
) -> float:
    """Return the offset in ``(0, interval]`` where the descent condition first fails."""
    shifted: RealMatrix = q + rate * np.eye(q.shape[0])

    def margin(offset: float) -> float:
        y: RealMatrix = expm(matrix * offset) @ x
        return float(y @ shifted @ y)

    if margin(0.0) >= 0:
        return 0.0
    return float(
        scipy.optimize.bisect(margin, 0.0, interval, xtol=REFINE_FRACTION * interval),
    )


def run_suboptimal(
    x0: RealMatrix,
    matrices: Sequence[RealMatrix],
    law: StateBasedLaw,
    horizon: float,
    step: float,
    *,
    refine: bool = False,
) -> SwitchedRun:
    """Run the suboptimal law, switching when ``x^T Q_j x > -r_j x^T x``.

    The condition is checked at every grid point. With ``refine`` the switching
    instant is located inside the offending grid cell by bisection.
    Once ``x`` has decayed to ``CONVERGED_TOLERANCE`` times its initial norm no
    switch is triggered.
    """
    if law.mode is not StateBasedMode.SUBOPTIMAL:
        msg: str = f"{law} is not a suboptimal law"
        raise ValueError(msg)
    times: RealMatrix = time_grid(horizon, step)
    propagators: _Propagators = _Propagators(matrices)
    states: RealMatrix = np.empty((times.shape[0], x0.shape[0]))
    active: npt.NDArray[np.int64] = np.empty(times.shape[0], dtype=np.int64)
    states[0] = x0
    scale: float = float(np.linalg.norm(x0))
    index: int = steepest_index(x0, law.lyapunov)
    switch_times: list[float] = [0.0]
    switch_indices: list[int] = [index]
    for position in range(times.shape[0] - 1):
        start: float = float(times[position])
        stop: float = float(times[position + 1])
        active[position] = index
        x_next: RealMatrix = propagators(index, stop - start) @ states[position]
        if not _converged(x_next, scale) and _violates(
            x_next,
            law.lyapunov.q[index],
            law.rates[index],
        ):
            if refine:
                offset: float = _refine_crossing(
                    states[position],
                    matrices[index],
                    law.lyapunov.q[index],
                    law.rates[index],
                    stop - start,
                )
                crossing: RealMatrix = expm(matrices[index] * offset) @ states[position]
                selected: int = steepest_index(crossing, law.lyapunov)
                if (
                    selected != index
                    and start + offset > switch_times[-1] + TIME_TOLERANCE
                ):
                    switch_times.append(start + offset)
                    switch_indices.append(selected)
                    index = selected
                    x_next = expm(matrices[index] * (stop - start - offset)) @ crossing
            else:
                selected = steepest_index(x_next, law.lyapunov)
                if selected != index:
                    switch_times.append(stop)
                    switch_indices.append(selected)
                    index = selected
        states[position + 1] = x_next
    active[-1] = index
    record: SwitchRecord = SwitchRecord(tuple(switch_times), tuple(switch_indices))
    switching_logger.info(
        "Suboptimal run finished with %d switch(es)",
        record.switch_count,
    )
    return SwitchedRun(record, Trajectory(times, states, active))


def _dwell_objective(
    theta: float,
    rates: Sequence[float],
    etas: Sequence[float],
    norms: Sequence[float],
) -> float:
    terms: list[float] = []
    for rate, eta, norm in zip(rates, etas, norms):
        if rate >= 1:
            decay: float = 0.0
        else:
            decay = (1 - rate) / (theta**2 * eta) if eta > 0 else math.inf
        growth: float = math.log(theta) / norm if norm > 0 else math.inf
        terms.append(min(decay, growth))
    return min(terms)


def dwell_time_bound(
    lyapunov: LyapunovData,
    matrices: Sequence[RealMatrix],
    rates: Sequence[float],
) -> float:
    """Return a lower bound on the time between two suboptimal switches.

    The bound is ``sup_theta min_j min((1 - r_j)/(theta^2 eta_j), ln(theta)/|A_j|)``
    with ``eta_j = |A_j^T (Q_j + I) + (Q_j + I) A_j|``, all norms spectral, and
    ``theta`` ranging over ``(1, DWELL_THETA_MAX]``. It is zero as soon as some
    ``r_j = 1``.
    """
    if len(rates) != len(matrices) or any(not 0 < rate <= 1 for rate in rates):
        msg: str = f"Rates must lie in (0, 1], one per generator, got {tuple(rates)}"
        raise ValueError(msg)
    if all(rate >= 1 for rate in rates):
        switching_logger.log(
            DESIGN_LOG_LEVEL,
            "Dwell-time bound is 0 (all rates are 1)",
        )
        return 0.0
    identity: RealMatrix = np.eye(matrices[0].shape[0])
    etas: list[float] = [
        spectral_norm(matrix.T @ (q + identity) + (q + identity) @ matrix)
        for matrix, q in zip(matrices, lyapunov.q)
    ]
    norms: list[float] = [spectral_norm(matrix) for matrix in matrices]
    thetas: RealMatrix = np.geomspace(1.0, DWELL_THETA_MAX, 2049)[1:]
    values: RealMatrix = np.array(
        [_dwell_objective(float(theta), rates, etas, norms) for theta in thetas],
    )
    best: int = int(np.argmax(values))
    bound: float = float(values[best])
    if math.isfinite(bound) and bound > 0:
        refined = scipy.optimize.minimize_scalar(
            lambda theta: -_dwell_objective(theta, rates, etas, norms),
            bounds=(
                float(thetas[max(best - 1, 0)]),
                float(thetas[min(best + 1, thetas.shape[0] - 1)]),
            ),
            method="bounded",
        )
        bound = max(bound, -float(refined.fun))
    switching_logger.log(DESIGN_LOG_LEVEL, "Dwell-time bound is %.6e", bound)
    return bound


def hermitian_cyclic_check(matrices: Sequence[RealMatrix]) -> bool:
    """Check whether any cyclic law over ``matrices`` stabilizes the origin.

    This holds when every matrix is symmetric and their kernels intersect
    trivially; segment lengths then need no certification.
    """
    if not matrices:
        return False
    if not all(is_symmetric(matrix, SYMMETRY_TOLERANCE) for matrix in matrices):
        switching_logger.debug("Cyclic check failed: some generator is not symmetric")
        return False
    stacked: RealMatrix = np.vstack(matrices)
    scale: float = max(1.0, float(np.linalg.norm(stacked)))
    kernel: RealMatrix = nullspace(stacked, FIXED_POINT_TOLERANCE * scale)
    if kernel.shape[1]:
        switching_logger.debug(
            "Cyclic check failed: joint kernel of dimension %d",
            kernel.shape[1],
        )
        return False
    return True
