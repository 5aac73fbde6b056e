"""Tests for ``switched_lindblad.utils``."""

from __future__ import annotations

import argparse
import platform
from pathlib import Path
from typing import Final

import pytest

from switched_lindblad.utils import (
    positive_float_from_str,
    rates_from_str,
    resolved_path_from_str,
)

DRIVE: Final[str] = Path().resolve().drive

# pylint: disable=C0116


@pytest.mark.skipif(
    platform.system() != "Windows",
    reason="Test behavior on Windows-systems",
)
@pytest.mark.parametrize(
    ("path_as_str", "expected_path"),
    (
        pytest.param(
            "/path/to/some/file.json",
            Path(f"{DRIVE}/path/to/some/file.json"),
            id="regular_str",
        ),
        pytest.param(
            "  /path/to/some/file.json  ",
            Path(f"{DRIVE}/path/to/some/file.json"),
            id="trailing_whitespaces_str",
        ),
    ),
)
def test_resolved_path_from_str_windows(
    path_as_str: str,
    expected_path: Path,
) -> None:  # pragma: win32 cover
    assert resolved_path_from_str(path_as_str) == expected_path


@pytest.mark.skipif(
    platform.system() != "Linux" and platform.system() != "Darwin",
    reason="Test behavior on Posix systems",
)
@pytest.mark.parametrize(
    ("path_as_str", "expected_path"),
    (
        pytest.param(
            "/path/to/some/file.json",
            Path("/path/to/some/file.json"),
            id="regular_str",
        ),
        pytest.param(
            "  /path/to/some/file.json  ",
            Path("/path/to/some/file.json"),
            id="trailing_whitespaces_str",
        ),
    ),
)
def test_resolved_path_from_str_posix(
    path_as_str: str,
    expected_path: Path,
) -> None:  # pragma: posix cover
    assert resolved_path_from_str(path_as_str) == expected_path


@pytest.mark.parametrize(
    ("value_as_str", "expected_value"),
    (
        pytest.param("0.02", 0.02, id="step"),
        pytest.param(" 150 ", 150.0, id="whitespace"),
        pytest.param("1e-3", 0.001, id="exponent"),
    ),
)
def test_positive_float_from_str(value_as_str: str, expected_value: float) -> None:
    assert positive_float_from_str(value_as_str) == expected_value


@pytest.mark.parametrize(
    "value_as_str",
    (
        pytest.param("0", id="zero"),
        pytest.param("-1.5", id="negative"),
        pytest.param("inf", id="infinite"),
        pytest.param("nan", id="nan"),
        pytest.param("fast", id="not_a_number"),
    ),
)
def test_positive_float_from_str_invalid(value_as_str: str) -> None:
    with pytest.raises(argparse.ArgumentTypeError):
        positive_float_from_str(value_as_str)


@pytest.mark.parametrize(
    ("rates_as_str", "expected_rates"),
    (
        pytest.param("1,1", (1.0, 1.0), id="unit_rates"),
        pytest.param("0.5, 0.25", (0.5, 0.25), id="whitespace"),
        pytest.param("0.5", (0.5,), id="single"),
    ),
)
def test_rates_from_str(rates_as_str: str, expected_rates: tuple[float, ...]) -> None:
    assert rates_from_str(rates_as_str) == expected_rates


@pytest.mark.parametrize(
    "rates_as_str",
    (
        pytest.param("1.5,1", id="above_one"),
        pytest.param("0,1", id="zero"),
        pytest.param("1,,1", id="empty_item"),
    ),
)
def test_rates_from_str_invalid(rates_as_str: str) -> None:
    with pytest.raises(argparse.ArgumentTypeError):
        rates_from_str(rates_as_str)
