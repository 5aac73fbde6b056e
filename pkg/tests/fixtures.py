"""Custom ``pytest`` fixtures."""

from __future__ import annotations

__all__: list[str] = [
    "bell_log",
    "bell_report",
    "bell_spec",
    "dephasing_matrices",
    "ghz_report",
    "info_caplog",
    "invalid_scenario_file",
    "malformed_scenario_file",
    "mismatched_scenario_file",
    "rng",
    "rotation_matrices",
    "scenario_file",
    "short_bell_log",
    "short_bell_spec",
    "test_log",
    "test_log_as_str",
]

import dataclasses
import json
import logging
from typing import TYPE_CHECKING

import numpy as np
import pytest

from switched_lindblad.scenario_handling import scenario_to_dict
from switched_lindblad.scenarios import scenario_bell, scenario_ghz
from switched_lindblad.simulation import design, run_comparison
from switched_lindblad.states import gell_mann_basis, maximally_mixed, pauli
from switched_lindblad.superoperators import LindbladGenerator, vectorize

if TYPE_CHECKING:
    from pathlib import Path

    from switched_lindblad.linalg import RealMatrix
    from switched_lindblad.scenarios import ScenarioSpec
    from switched_lindblad.simulation import DesignReport, TrajectoryLog


@pytest.fixture
def info_caplog(caplog: pytest.LogCaptureFixture) -> pytest.LogCaptureFixture:
    """Return a ``pytest.caplog`` fixture with the logging level set to ``INFO`` / 20."""
    caplog.set_level(logging.INFO)
    return caplog


@pytest.fixture
def rng() -> np.random.Generator:
    """Return a seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def bell_spec() -> ScenarioSpec:
    return scenario_bell()


@pytest.fixture
def short_bell_spec() -> ScenarioSpec:
    """Return the Bell scenario shortened to one time unit."""
    return dataclasses.replace(scenario_bell(), horizon=1.0)


@pytest.fixture
def short_bell_log(short_bell_spec: ScenarioSpec) -> TrajectoryLog:
    return run_comparison(short_bell_spec)


@pytest.fixture(scope="module")
def bell_report() -> DesignReport:
    return design(scenario_bell())


@pytest.fixture(scope="module")
def bell_log(bell_report: DesignReport) -> TrajectoryLog:
    """Return the comparison of every strategy on the Bell scenario."""
    return run_comparison(scenario_bell(), report=bell_report)


@pytest.fixture(scope="module")
def ghz_report() -> DesignReport:
    return design(scenario_ghz())


@pytest.fixture
def dephasing_matrices() -> list[RealMatrix]:
    """Return the qubit dephasing generators with ``L = sigma_z`` and ``L = sigma_x``."""
    return [
        vectorize(
            LindbladGenerator(np.zeros((2, 2), dtype=np.complex128), (pauli(axis),)),
            gell_mann_basis(2),
        ).A
        for axis in ("z", "x")
    ]


@pytest.fixture
def rotation_matrices() -> list[RealMatrix]:
    """Return two antisymmetric (purely Hamiltonian) generators."""
    return [
        np.array([[0.0, 1.0], [-1.0, 0.0]]),
        np.array([[0.0, -2.0], [2.0, 0.0]]),
    ]


@pytest.fixture
def scenario_file(tmp_path: Path, short_bell_spec: ScenarioSpec) -> Path:
    """Return a temporary scenario ``JSON`` file of the shortened Bell scenario."""
    test_scenario_file: Path = tmp_path / "bell.json"

    test_scenario_file.write_text(
        json.dumps(scenario_to_dict(short_bell_spec)),
        encoding="utf-8",
    )

    return test_scenario_file


@pytest.fixture
def malformed_scenario_file(tmp_path: Path, short_bell_spec: ScenarioSpec) -> Path:
    """Return a scenario file whose first Hamiltonian entry is not a ``[re, im]`` pair."""
    data = scenario_to_dict(short_bell_spec)
    data["generators"][0]["hamiltonian"][0][1] = "one"
    test_scenario_file: Path = tmp_path / "malformed.json"

    test_scenario_file.write_text(json.dumps(data), encoding="utf-8")

    return test_scenario_file


@pytest.fixture
def mismatched_scenario_file(tmp_path: Path, short_bell_spec: ScenarioSpec) -> Path:
    """Return a scenario file whose target is not the fixed point of its generators."""
    spec: ScenarioSpec = dataclasses.replace(short_bell_spec, target=maximally_mixed(4))
    test_scenario_file: Path = tmp_path / "mismatched.json"

    test_scenario_file.write_text(json.dumps(scenario_to_dict(spec)), encoding="utf-8")

    return test_scenario_file


@pytest.fixture
def invalid_scenario_file(tmp_path: Path) -> Path:
    """Return a file that is not valid ``JSON``."""
    test_scenario_file: Path = tmp_path / "invalid.json"

    test_scenario_file.write_text('{\n    "name": "broken",\n', encoding="utf-8")

    return test_scenario_file


@pytest.fixture
def test_log(tmp_path: Path) -> Path:
    """Return a temporary log file."""
    test_log_file: Path = tmp_path / "test.log"
    test_log_file.touch()
    return test_log_file


@pytest.fixture
def test_log_as_str(test_log: Path) -> str:
    """Return a temporary log file as a string."""
    return str(test_log)
