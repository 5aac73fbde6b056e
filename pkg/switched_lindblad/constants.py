"""Module defining and containing global constants.

Numerical tolerances are collected here so every module checks its contracts
against the same table.
"""

from __future__ import annotations

__all__: list[str] = [
    "BELL_HORIZON",
    "CONVERGED_TOLERANCE",
    "DEFAULT_LOG_LOCATION",
    "DEFAULT_MIN_INTERVAL",
    "DEFAULT_STEP",
    "DESIGN_LOG_LEVEL",
    "DWELL_THETA_MAX",
    "EIGH_TOLERANCE",
    "EXIT_DESIGN_FAILURE",
    "EXIT_FAILURE",
    "EXIT_IO_FAILURE",
    "EXIT_SUCCESS",
    "FIXED_POINT_TOLERANCE",
    "GHZ_HORIZON",
    "HERMITIAN_TOLERANCE",
    "HURWITZ_SEARCH_BUDGET",
    "HURWITZ_SEARCH_SEED",
    "LOG_FORMAT",
    "LYAPUNOV_RESIDUAL_TOLERANCE",
    "MAX_VERBOSITY_LEVEL",
    "MONODROMY_MARGIN",
    "NOT_A_STATE_TOLERANCE",
    "PROGRAM_LOCATION",
    "PROPAGATOR_CACHE_SIZE",
    "PSD_TOLERANCE",
    "REFINE_FRACTION",
    "ROBUSTNESS_HORIZON",
    "SIMULATION_LOG_LEVEL",
    "SINGULAR_PIVOT_TOLERANCE",
    "STREAM_HANDLER_FORMATTER",
    "SUBSPACE_HORIZON",
    "SUBSPACE_ZERO_TOLERANCE",
    "SYMMETRY_TOLERANCE",
    "TIME_TOLERANCE",
    "TRACE_TOLERANCE",
    "VERBOSE_OUTPUT_LEVELS",
    "WEIGHT_TOLERANCE",
]

import logging
from pathlib import Path
from typing import Final

PROGRAM_LOCATION: Final[Path] = Path(__file__).resolve().parent
DEFAULT_LOG_LOCATION: Final[Path] = PROGRAM_LOCATION / "switched-lindblad.log"

LOG_FORMAT: Final = "%(name)s [%(levelname)s] %(asctime)s - %(message)s"
DESIGN_LOG_LEVEL: Final = 60
SIMULATION_LOG_LEVEL: Final = 70
STREAM_HANDLER_FORMATTER: Final[logging.Formatter] = logging.Formatter(
    "[%(levelname)s] %(message)s",
)

VERBOSE_OUTPUT_LEVELS: Final[dict[int, int]] = {
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}
MAX_VERBOSITY_LEVEL: Final = 3

# linalg
HERMITIAN_TOLERANCE: Final = 1e-10
SYMMETRY_TOLERANCE: Final = 1e-10
EIGH_TOLERANCE: Final = 1e-10
SINGULAR_PIVOT_TOLERANCE: Final = 1e-12

# states
TRACE_TOLERANCE: Final = 1e-10
PSD_TOLERANCE: Final = 1e-9
NOT_A_STATE_TOLERANCE: Final = 1e-6

# superoperators and linearization
FIXED_POINT_TOLERANCE: Final = 1e-8
SUBSPACE_ZERO_TOLERANCE: Final = 1e-9

# switching
CONVERGED_TOLERANCE: Final = 1e-12
WEIGHT_TOLERANCE: Final = 1e-12
LYAPUNOV_RESIDUAL_TOLERANCE: Final = 1e-8
MONODROMY_MARGIN: Final = 1e-12
DWELL_THETA_MAX: Final = 100.0
REFINE_FRACTION: Final = 1e-3
TIME_TOLERANCE: Final = 1e-9
HURWITZ_SEARCH_BUDGET: Final = 256
HURWITZ_SEARCH_SEED: Final = 20130101
PROPAGATOR_CACHE_SIZE: Final = 512

# scenarios
DEFAULT_STEP: Final = 0.02
DEFAULT_MIN_INTERVAL: Final = 0.06
BELL_HORIZON: Final = 150.0
GHZ_HORIZON: Final = 250.0
ROBUSTNESS_HORIZON: Final = 100.0
SUBSPACE_HORIZON: Final = 250.0

EXIT_SUCCESS: Final = 0
EXIT_FAILURE: Final = 1
EXIT_DESIGN_FAILURE: Final = 2
EXIT_IO_FAILURE: Final = 3
