#!/usr/bin/env python3
"""Main module."""
from __future__ import annotations

__all__: list[str] = ["main"]

import argparse
import logging
from typing import TYPE_CHECKING, TextIO

from switched_lindblad import __version__
from switched_lindblad.args_handling import (
    handle_builtin_args,
    handle_design_args,
    handle_export_args,
    handle_run_args,
)
from switched_lindblad.constants import (
    DEFAULT_LOG_LOCATION,
    DESIGN_LOG_LEVEL,
    LOG_FORMAT,
    MAX_VERBOSITY_LEVEL,
    SIMULATION_LOG_LEVEL,
    STREAM_HANDLER_FORMATTER,
    VERBOSE_OUTPUT_LEVELS,
)
from switched_lindblad.scenarios import BUILTIN_SCENARIOS
from switched_lindblad.utils import (
    positive_float_from_str,
    rates_from_str,
    resolved_path_from_str,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

main_logger: logging.Logger = logging.getLogger(__name__)


def _add_comparison_args(parser: argparse.ArgumentParser) -> None:
    """Add the options shared by every subcommand running a comparison."""
    parser.add_argument(
        "-o",
        "--out",
        dest="out",
        type=resolved_path_from_str,
        metavar="PATH",
        help="Write the trajectory log as CSV",
    )
    parser.add_argument(
        "--svg",
        dest="svg",
        type=resolved_path_from_str,
        metavar="PATH",
        help="Plot the Lyapunov and distance curves as SVG",
    )
    parser.add_argument(
        "--step",
        dest="step",
        type=positive_float_from_str,
        metavar="TIME",
        help="Integration step (default: scenario value)",
    )
    parser.add_argument(
        "--horizon",
        dest="horizon",
        type=positive_float_from_str,
        metavar="TIME",
        help="Simulated time, a multiple of the step (default: scenario value)",
    )
    parser.add_argument(
        "--dt",
        dest="min_interval",
        type=positive_float_from_str,
        metavar="TIME",
        help="Minimal switching interval of the steepest-descent law, "
        "a multiple of the step (default: scenario value)",
    )
    parser.add_argument(
        "--rates",
        dest="rates",
        type=rates_from_str,
        metavar="R1,R2,...",
        help="Descent rates of the suboptimal law, each in (0, 1] (default: scenario value)",
    )
    parser.add_argument(
        "--refine",
        action="store_true",
        dest="refine",
        help="Locate suboptimal switching instants inside the grid cell by bisection",
    )


def _parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse arguments from ``argv``."""
    parser: argparse.ArgumentParser = argparse.ArgumentParser(
        prog="switched-lindblad",
        description="Design and compare switching laws stabilizing quantum states "
        "with Lindblad generators.",
    )
    parser.add_argument(
        "-V",
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
        help="Show version of switched-lindblad",
    )
    parser.add_argument(
        "-d",
        "--debug",
        action="store_true",
        dest="debugging",
        help="Enable debugging by setting logging level to DEBUG",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        dest="verbosity_level",
        default=0,
        help="Increase output verbosity (up to 3 levels; third requires debugging)",
    )
    parser.add_argument(
        "--log-location",
        dest="log_location",
        default=DEFAULT_LOG_LOCATION,
        type=resolved_path_from_str,
        metavar="PATH",
        help="Specify custom location for the log file (default: location of the program)",
    )

    subparsers: argparse._SubParsersAction[argparse.ArgumentParser] = (
        parser.add_subparsers(
            title="subcommands",
            description="Run a built-in or custom scenario, inspect its design "
            "or export a built-in scenario",
            required=True,
        )
    )

    # built-in scenarios
    builtin_help: dict[str, str] = {
        "bell": "Stabilize a Bell state with a Hamiltonian and a dissipative generator",
        "ghz": "Stabilize a GHZ state with three generators",
        "robustness": "Show how a rank-deficient state estimate defeats state-based laws",
        "subspace": "Stabilize span{|000>, |111>} with the GHZ noise operators",
    }
    for name, help_text in builtin_help.items():
        builtin_parser: argparse.ArgumentParser = subparsers.add_parser(
            name,
            help=help_text,
        )
        builtin_parser.set_defaults(handle=handle_builtin_args, scenario_name=name)
        if name == "robustness":
            builtin_parser.add_argument(
                "--estimate",
                dest="estimate",
                choices=("pure", "mixed"),
                default="pure",
                help="Estimated initial state: |1><1| (pure) or I/3 (mixed) "
                "(default: pure)",
            )
        _add_comparison_args(builtin_parser)

    # "run" subcommand
    run_parser: argparse.ArgumentParser = subparsers.add_parser(
        "run",
        help="Run a scenario JSON file",
    )
    run_parser.set_defaults(handle=handle_run_args)
    run_parser.add_argument(
        dest="scenario",
        type=resolved_path_from_str,
        metavar="PATH",
        help="Path to the scenario JSON file",
    )
    _add_comparison_args(run_parser)

    # "design" subcommand
    design_parser: argparse.ArgumentParser = subparsers.add_parser(
        "design",
        help="Print the switching laws designed for a scenario JSON file",
    )
    design_parser.set_defaults(handle=handle_design_args)
    design_parser.add_argument(
        dest="scenario",
        type=resolved_path_from_str,
        metavar="PATH",
        help="Path to the scenario JSON file",
    )

    # "export" subcommand
    export_parser: argparse.ArgumentParser = subparsers.add_parser(
        "export",
        help="Write a built-in scenario as JSON",
    )
    export_parser.set_defaults(handle=handle_export_args)
    export_parser.add_argument(
        dest="scenario_name",
        choices=tuple(BUILTIN_SCENARIOS),
        metavar="NAME",
        help=f"Built-in scenario ({', '.join(BUILTIN_SCENARIOS)})",
    )
    export_parser.add_argument(
        dest="path",
        type=resolved_path_from_str,
        metavar="PATH",
        help="Destination of the JSON file",
    )

    return parser.parse_args(argv)


def _setup_logging(args: argparse.Namespace) -> None:
    """Set up logging based on the provided arguments."""
    # Define custom "DESIGN" and "SIMULATION" logging level >= logging.CRITICAL (50)
    # so it can be handled by the stream handler if verbose logging is enabled
    logging.addLevelName(DESIGN_LOG_LEVEL, "DESIGN")
    logging.addLevelName(SIMULATION_LOG_LEVEL, "SIMULATION")

    file_handler: logging.FileHandler = logging.FileHandler(
        filename=args.log_location,
        mode="w",
        encoding="utf-8",
    )

    handlers: list[logging.Handler] = [file_handler]

    if args.verbosity_level:
        stream_handler: logging.StreamHandler[TextIO] = logging.StreamHandler()
        stream_handler.setFormatter(STREAM_HANDLER_FORMATTER)
        stream_handler.setLevel(
            VERBOSE_OUTPUT_LEVELS.get(
                args.verbosity_level,
                VERBOSE_OUTPUT_LEVELS[MAX_VERBOSITY_LEVEL],
            ),
        )
        handlers.append(stream_handler)

    log_level: int = logging.INFO if not args.debugging else logging.DEBUG

    logging.basicConfig(
        level=log_level,
        format=LOG_FORMAT,
        handlers=handlers,
    )

    if args.verbosity_level > MAX_VERBOSITY_LEVEL:
        main_logger.warning(
            "Maximum verbosity level exceeded. Using maximum level of 3.",
        )

    if args.verbosity_level >= MAX_VERBOSITY_LEVEL and not args.debugging:
        main_logger.warning(
            "Using maximum verbosity level, but debugging is disabled. "
            "To get the full output add the '-d' flag to enable debugging",
        )

    main_logger.info(
        "Started logging at '%s' with level %s",
        args.log_location,
        log_level,
    )


def _check_specified_locations(args: argparse.Namespace) -> None:
    """Check the output locations have their respective file types."""
    if args.log_location.suffix.casefold() != ".log":
        main_logger.warning(
            "Given logging location '%s' is not a '.log' file. "
            "Using default location: '%s'",
            args.log_location,
            DEFAULT_LOG_LOCATION,
        )
        args.log_location = DEFAULT_LOG_LOCATION

    for dest, suffix in (("out", ".csv"), ("svg", ".svg")):
        location = getattr(args, dest, None)
        if location is not None and location.suffix.casefold() != suffix:
            main_logger.warning(
                "Given location '%s' does not end with '%s'",
                location,
                suffix,
            )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the program."""
    args: argparse.Namespace = _parse_args(argv)

    _check_specified_locations(args)

    _setup_logging(args)

    main_logger.debug("args=%s", repr(args))

    exit_code: int = args.handle(args)

    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
