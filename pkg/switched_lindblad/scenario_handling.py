"""Module responsible for reading and writing scenarios, logs and plots.

Scenario documents are JSON objects. Complex matrices are nested arrays whose
entries are ``[re, im]`` pairs:

.. code-block:: json

    {
        "name": "bell",
        "generators": [
            {"label": "hamiltonian", "hamiltonian": [[[0, 0], ...], ...],
             "noise_operators": []}
        ],
        "target_state": [[[0.5, 0], ...], ...],
        "weights": [0.5, 0.5],
        "initial_state": [[[1, 0], ...], ...],
        "estimated_state": [[[0.25, 0], ...], ...],
        "horizon": 150.0,
        "step": 0.02,
        "min_interval": 0.06,
        "rates": [1.0, 1.0],
        "cycle_order": [0, 1]
    }

``target_subspace`` (an orthogonal projector) replaces ``target_state`` when a
subspace is to be stabilized; ``weights`` may be omitted to search for them.
``cycle_order`` may be omitted to visit the generators in ascending order.
"""

from __future__ import annotations

__all__: list[str] = [
    "CSV_COLUMNS",
    "load_scenario",
    "save_log",
    "save_scenario",
    "save_svg",
    "scenario_from_dict",
    "scenario_to_dict",
]

import csv
import json
import logging
from numbers import Real
from typing import TYPE_CHECKING, Any, Final

import numpy as np
from matplotlib.figure import Figure

from switched_lindblad.constants import (
    DEFAULT_MIN_INTERVAL,
    DEFAULT_STEP,
    EXIT_IO_FAILURE,
    SIMULATION_LOG_LEVEL,
)
from switched_lindblad.errors import ScenarioFormatError, SwitchedLindbladError
from switched_lindblad.scenarios import ScenarioSpec
from switched_lindblad.states import DensityMatrix
from switched_lindblad.superoperators import (
    LindbladGenerator,
    SubspaceSplit,
    subspace_split,
)

if TYPE_CHECKING:
    from pathlib import Path

    from switched_lindblad.linalg import ComplexMatrix
    from switched_lindblad.simulation import TrajectoryLog

CSV_COLUMNS: Final[tuple[str, ...]] = (
    "time",
    "strategy",
    "lyapunov",
    "euclidean",
    "trace_distance",
    "active_index",
)
_LOG_SCALE_FLOOR: Final = 1e-16

scenario_handling_logger: logging.Logger = logging.getLogger(__name__)


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _matrix_from_json(value: Any, field: str) -> ComplexMatrix:
    if not isinstance(value, list) or not value:
        raise ScenarioFormatError(field, "expected a non-empty array of rows")
    rows: list[list[complex]] = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != len(value):
            raise ScenarioFormatError(
                f"{field}[{i}]",
                f"expected a row of {len(value)} [re, im] pairs",
            )
        entries: list[complex] = []
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2  # noqa: PLR2004
                or not all(_is_number(part) for part in entry)
            ):
                raise ScenarioFormatError(
                    f"{field}[{i}][{j}]",
                    f"expected a [re, im] pair of numbers, got {entry!r}",
                )
            entries.append(complex(entry[0], entry[1]))
        rows.append(entries)
    return np.array(rows, dtype=np.complex128)


def _matrix_to_json(matrix: ComplexMatrix) -> list[list[list[float]]]:
    return [[[float(entry.real), float(entry.imag)] for entry in row] for row in matrix]


def _number(data: dict[str, Any], field: str, default: float | None = None) -> float:
    if field not in data:
        if default is None:
            raise ScenarioFormatError(field, "missing")
        return default
    if not _is_number(data[field]):
        raise ScenarioFormatError(field, f"expected a number, got {data[field]!r}")
    return float(data[field])


def _numbers(data: dict[str, Any], field: str) -> tuple[float, ...]:
    values: Any = data.get(field, [])
    if not isinstance(values, list) or not all(_is_number(value) for value in values):
        raise ScenarioFormatError(
            field,
            f"expected an array of numbers, got {values!r}",
        )
    return tuple(float(value) for value in values)


def _indices(data: dict[str, Any], field: str) -> tuple[int, ...]:
    values: Any = data.get(field, [])
    if not isinstance(values, list) or not all(
        isinstance(value, int) and not isinstance(value, bool) for value in values
    ):
        raise ScenarioFormatError(
            field,
            f"expected an array of integers, got {values!r}",
        )
    return tuple(values)


def _state(data: dict[str, Any], field: str) -> DensityMatrix:
    if field not in data:
        raise ScenarioFormatError(field, "missing")
    try:
        return DensityMatrix(_matrix_from_json(data[field], field))
    except ScenarioFormatError:
        raise
    except (SwitchedLindbladError, ValueError) as err:
        raise ScenarioFormatError(field, str(err)) from err


def _generator(value: Any, field: str) -> LindbladGenerator:
    if not isinstance(value, dict):
        raise ScenarioFormatError(field, "expected an object")
    if "hamiltonian" not in value:
        raise ScenarioFormatError(f"{field}.hamiltonian", "missing")
    noise: Any = value.get("noise_operators", [])
    if not isinstance(noise, list):
        raise ScenarioFormatError(f"{field}.noise_operators", "expected an array")
    label: Any = value.get("label", "")
    if not isinstance(label, str):
        raise ScenarioFormatError(f"{field}.label", "expected a string")
    hamiltonian: ComplexMatrix = _matrix_from_json(
        value["hamiltonian"],
        f"{field}.hamiltonian",
    )
    noise_operators: tuple[ComplexMatrix, ...] = tuple(
        _matrix_from_json(operator, f"{field}.noise_operators[{k}]")
        for k, operator in enumerate(noise)
    )
    try:
        return LindbladGenerator(hamiltonian, noise_operators, label=label)
    except (SwitchedLindbladError, ValueError) as err:
        raise ScenarioFormatError(field, str(err)) from err


def scenario_from_dict(data: Any) -> ScenarioSpec:
    """Build a scenario from a decoded JSON document.

    Raises ``ScenarioFormatError`` naming the offending field.
    """
    if not isinstance(data, dict):
        raise ScenarioFormatError("<root>", "expected a JSON object")
    name: Any = data.get("name", "custom")
    if not isinstance(name, str):
        raise ScenarioFormatError("name", "expected a string")
    generators_data: Any = data.get("generators")
    if not isinstance(generators_data, list) or not generators_data:
        raise ScenarioFormatError("generators", "expected a non-empty array")
    generators: tuple[LindbladGenerator, ...] = tuple(
        _generator(value, f"generators[{k}]") for k, value in enumerate(generators_data)
    )

    target: DensityMatrix | SubspaceSplit
    if ("target_state" in data) == ("target_subspace" in data):
        raise ScenarioFormatError(
            "target_state",
            "exactly one of 'target_state' and 'target_subspace' is required",
        )
    if "target_state" in data:
        target = _state(data, "target_state")
    else:
        try:
            target = subspace_split(
                _matrix_from_json(data["target_subspace"], "target_subspace"),
            )
        except ScenarioFormatError:
            raise
        except (SwitchedLindbladError, ValueError) as err:
            raise ScenarioFormatError("target_subspace", str(err)) from err

    try:
        return ScenarioSpec(
            name=name,
            generators=generators,
            target=target,
            weights=_numbers(data, "weights"),
            initial_state=_state(data, "initial_state"),
            estimated_state=_state(data, "estimated_state"),
            horizon=_number(data, "horizon"),
            step=_number(data, "step", DEFAULT_STEP),
            min_interval=_number(data, "min_interval", DEFAULT_MIN_INTERVAL),
            rates=_numbers(data, "rates"),
            cycle_order=_indices(data, "cycle_order"),
        )
    except ScenarioFormatError:
        raise
    except (SwitchedLindbladError, ValueError) as err:
        raise ScenarioFormatError("<root>", str(err)) from err


def scenario_to_dict(spec: ScenarioSpec) -> dict[str, Any]:
    """Return the JSON document describing ``spec``."""
    data: dict[str, Any] = {
        "name": spec.name,
        "generators": [
            {
                "label": generator.label,
                "hamiltonian": _matrix_to_json(generator.hamiltonian),
                "noise_operators": [
                    _matrix_to_json(operator) for operator in generator.noise_operators
                ],
            }
            for generator in spec.generators
        ],
    }
    if isinstance(spec.target, SubspaceSplit):
        data["target_subspace"] = _matrix_to_json(spec.target.projector)
    else:
        data["target_state"] = _matrix_to_json(spec.target.matrix)
    if spec.weights:
        data["weights"] = list(spec.weights)
    data.update(
        {
            "initial_state": _matrix_to_json(spec.initial_state.matrix),
            "estimated_state": _matrix_to_json(spec.estimated_state.matrix),
            "horizon": spec.horizon,
            "step": spec.step,
            "min_interval": spec.min_interval,
            "rates": list(spec.rates),
        },
    )
    if spec.cycle_order:
        data["cycle_order"] = list(spec.cycle_order)
    return data


def load_scenario(path: Path) -> ScenarioSpec:
    """Read a scenario JSON file (with error handling)."""
    scenario_handling_logger.debug("Reading scenario from '%s'", path)
    try:
        spec: ScenarioSpec = scenario_from_dict(
            json.loads(path.read_text(encoding="utf-8")),
        )
    except FileNotFoundError as no_file_err:
        scenario_handling_logger.critical("Unable to find '%s'", path)
        raise SystemExit(EXIT_IO_FAILURE) from no_file_err
    except PermissionError as perm_err:
        scenario_handling_logger.critical(
            "Permission denied to open and read from '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from perm_err
    except OSError as os_err:
        scenario_handling_logger.critical(
            "I/O-related error occurred while opening and reading from '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from os_err
    except json.JSONDecodeError as json_decode_err:
        scenario_handling_logger.critical(
            "Given JSON file is not correctly formatted: '%s' (line %d, column %d: %s)",
            path,
            json_decode_err.lineno,
            json_decode_err.colno,
            json_decode_err.msg,
        )
        raise SystemExit(EXIT_IO_FAILURE) from json_decode_err
    except ScenarioFormatError as format_err:
        scenario_handling_logger.critical("Invalid scenario '%s': %s", path, format_err)
        raise SystemExit(EXIT_IO_FAILURE) from format_err
    except Exception as err:
        scenario_handling_logger.exception("Unexpected %s", err.__class__.__name__)
        raise SystemExit(EXIT_IO_FAILURE) from err
    scenario_handling_logger.info("Read %r from '%s'", spec, path)
    return spec


def save_scenario(spec: ScenarioSpec, path: Path) -> None:
    """Write ``spec`` as a JSON file (with error handling)."""
    scenario_handling_logger.debug("Writing scenario to '%s'", path)
    try:
        path.write_text(json.dumps(scenario_to_dict(spec), indent=4), encoding="utf-8")
    except PermissionError as perm_err:
        scenario_handling_logger.critical(
            "Permission denied to open and write to '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from perm_err
    except FileNotFoundError as no_file_err:
        scenario_handling_logger.critical("Unable to find '%s'", path)
        raise SystemExit(EXIT_IO_FAILURE) from no_file_err
    except OSError as os_err:
        scenario_handling_logger.critical(
            "I/O-related error occurred while opening and writing to '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from os_err
    except Exception as err:
        scenario_handling_logger.exception("Unexpected %s", err.__class__.__name__)
        raise SystemExit(EXIT_IO_FAILURE) from err
    scenario_handling_logger.log(
        SIMULATION_LOG_LEVEL,
        "Wrote scenario %s to '%s'",
        spec,
        path,
    )


def _write_csv(log: TrajectoryLog, path: Path) -> int:
    rows: int = 0
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for strategy, series in log.series.items():
            for k, time in enumerate(log.times):
                writer.writerow(
                    (
                        f"{time:.17g}",
                        strategy,
                        f"{series.lyapunov[k]:.17g}",
                        f"{series.euclidean[k]:.17g}",
                        f"{series.trace_distance[k]:.17g}",
                        int(series.active[k]),
                    ),
                )
                rows += 1
    return rows


def save_log(log: TrajectoryLog, path: Path) -> None:
    """Write ``log`` as CSV (with error handling).

    One row is written per strategy and sampled time.
    """
    scenario_handling_logger.debug("Writing trajectory log to '%s'", path)
    try:
        rows: int = _write_csv(log, path)
    except PermissionError as perm_err:
        scenario_handling_logger.critical(
            "Permission denied to open and write to '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from perm_err
    except FileNotFoundError as no_file_err:
        scenario_handling_logger.critical("Unable to find '%s'", path)
        raise SystemExit(EXIT_IO_FAILURE) from no_file_err
    except OSError as os_err:
        scenario_handling_logger.critical(
            "I/O-related error occurred while opening and writing to '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from os_err
    except Exception as err:
        scenario_handling_logger.exception("Unexpected %s", err.__class__.__name__)
        raise SystemExit(EXIT_IO_FAILURE) from err
    scenario_handling_logger.log(
        SIMULATION_LOG_LEVEL,
        "Wrote %d row(s) to '%s'",
        rows,
        path,
    )


def _draw(log: TrajectoryLog) -> Figure:
    figure: Figure = Figure(figsize=(8, 7))
    lyapunov_axes, distance_axes = figure.subplots(2, 1, sharex=True)
    for strategy, series in log.series.items():
        style: str = "--" if strategy.endswith("_estimated") else "-"
        lyapunov_axes.semilogy(
            log.times,
            np.maximum(series.lyapunov, _LOG_SCALE_FLOOR),
            style,
            label=strategy,
        )
        distance_axes.semilogy(
            log.times,
            np.maximum(series.trace_distance, _LOG_SCALE_FLOOR),
            style,
            label=strategy,
        )
    lyapunov_axes.set_ylabel("Lyapunov function")
    lyapunov_axes.set_title(log.scenario)
    lyapunov_axes.legend(fontsize="small")
    distance_axes.set_ylabel("distance to target")
    distance_axes.set_xlabel("time")
    figure.tight_layout()
    return figure


def save_svg(log: TrajectoryLog, path: Path) -> None:
    """Plot the Lyapunov and distance curves of ``log`` on log scales as SVG."""
    scenario_handling_logger.debug("Plotting trajectory log to '%s'", path)
    try:
        _draw(log).savefig(path, format="svg", metadata={"Date": None})
    except PermissionError as perm_err:
        scenario_handling_logger.critical(
            "Permission denied to open and write to '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from perm_err
    except FileNotFoundError as no_file_err:
        scenario_handling_logger.critical("Unable to find '%s'", path)
        raise SystemExit(EXIT_IO_FAILURE) from no_file_err
    except OSError as os_err:
        scenario_handling_logger.critical(
            "I/O-related error occurred while opening and writing to '%s'",
            path,
        )
        raise SystemExit(EXIT_IO_FAILURE) from os_err
    except Exception as err:
        scenario_handling_logger.exception("Unexpected %s", err.__class__.__name__)
        raise SystemExit(EXIT_IO_FAILURE) from err
    scenario_handling_logger.log(SIMULATION_LOG_LEVEL, "Wrote plot to '%s'", path)
