"""Module responsible for handling the args."""

from __future__ import annotations

__all__: list[str] = [
    "handle_builtin_args",
    "handle_design_args",
    "handle_export_args",
    "handle_run_args",
]

import dataclasses
import logging
from typing import TYPE_CHECKING, Any

from switched_lindblad.constants import (
    EXIT_DESIGN_FAILURE,
    EXIT_FAILURE,
    EXIT_SUCCESS,
)
from switched_lindblad.errors import DesignError
from switched_lindblad.scenario_handling import (
    load_scenario,
    save_log,
    save_scenario,
    save_svg,
)
from switched_lindblad.scenarios import (
    BUILTIN_SCENARIOS,
    scenario_robustness_counterexample,
)
from switched_lindblad.simulation import (
    design,
    format_design_report,
    format_summary,
    run_comparison,
    summarize,
)

if TYPE_CHECKING:
    import argparse

    from switched_lindblad.scenarios import ScenarioSpec
    from switched_lindblad.simulation import DesignReport, TrajectoryLog

args_handling_logger: logging.Logger = logging.getLogger(__name__)


def _apply_overrides(
    spec: ScenarioSpec,
    args: argparse.Namespace,
) -> ScenarioSpec | None:
    """Return ``spec`` with the command-line overrides, or ``None`` if they are invalid."""
    overrides: dict[str, Any] = {
        field: value
        for field, value in (
            ("step", args.step),
            ("horizon", args.horizon),
            ("min_interval", args.min_interval),
            ("rates", args.rates),
        )
        if value is not None
    }
    if not overrides:
        return spec
    args_handling_logger.debug("Overriding %s with %s", spec, overrides)
    try:
        return dataclasses.replace(spec, **overrides)
    except ValueError as value_err:
        args_handling_logger.critical("Invalid overrides for %s: %s", spec, value_err)
        return None


def _design(spec: ScenarioSpec) -> DesignReport | None:
    try:
        return design(spec)
    except DesignError as design_err:
        args_handling_logger.critical(
            "Unable to design switching laws for %s: %s",
            spec,
            design_err,
        )
        return None


def _compare(spec: ScenarioSpec, args: argparse.Namespace) -> int:
    """Run the strategy comparison of ``spec`` and write the requested outputs."""
    overridden: ScenarioSpec | None = _apply_overrides(spec, args)
    if overridden is None:
        return EXIT_FAILURE
    report: DesignReport | None = _design(overridden)
    if report is None:
        return EXIT_DESIGN_FAILURE

    log: TrajectoryLog = run_comparison(overridden, refine=args.refine, report=report)
    print(format_summary(summarize(log)))

    if args.out is not None:
        save_log(log, args.out)

    if args.svg is not None:
        save_svg(log, args.svg)

    return EXIT_SUCCESS


def handle_builtin_args(args: argparse.Namespace) -> int:
    """Handle the ``bell``, ``ghz``, ``robustness`` and ``subspace`` subcommands."""
    args_handling_logger.debug("args.scenario_name=%s", args.scenario_name)
    spec: ScenarioSpec = (
        scenario_robustness_counterexample(args.estimate)
        if args.scenario_name == "robustness"
        else BUILTIN_SCENARIOS[args.scenario_name]()
    )
    return _compare(spec, args)


def handle_run_args(args: argparse.Namespace) -> int:
    """Handle the ``run`` subcommand."""
    return _compare(load_scenario(args.scenario), args)


def handle_design_args(args: argparse.Namespace) -> int:
    """Handle the ``design`` subcommand."""
    spec: ScenarioSpec = load_scenario(args.scenario)
    report: DesignReport | None = _design(spec)
    if report is None:
        return EXIT_DESIGN_FAILURE
    print(format_design_report(report))
    return EXIT_SUCCESS


def handle_export_args(args: argparse.Namespace) -> int:
    """Handle the ``export`` subcommand."""
    save_scenario(BUILTIN_SCENARIOS[args.scenario_name](), args.path)
    return EXIT_SUCCESS
