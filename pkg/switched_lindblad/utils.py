"""Module containing useful utilities."""

from __future__ import annotations

__all__: list[str] = [
    "positive_float_from_str",
    "rates_from_str",
    "resolved_path_from_str",
]

import argparse
import math
from pathlib import Path


def resolved_path_from_str(path_as_str: str) -> Path:
    """Return the absolute path given a string of a path."""
    return Path(path_as_str.strip()).resolve()


def positive_float_from_str(value_as_str: str) -> float:
    """Return a strictly positive, finite ``float`` parsed from a string."""
    try:
        value: float = float(value_as_str.strip())
    except ValueError as value_err:
        msg: str = f"'{value_as_str}' is not a number"
        raise argparse.ArgumentTypeError(msg) from value_err
    if not math.isfinite(value) or value <= 0:
        msg = f"'{value_as_str}' is not a positive number"
        raise argparse.ArgumentTypeError(msg)
    return value


def rates_from_str(rates_as_str: str) -> tuple[float, ...]:
    """Return the comma separated descent rates, each in ``(0, 1]``."""
    rates: list[float] = []
    for item in rates_as_str.split(","):
        rate: float = positive_float_from_str(item)
        if rate > 1:
            msg: str = f"Rate '{item.strip()}' is not in (0, 1]"
            raise argparse.ArgumentTypeError(msg)
        rates.append(rate)
    return tuple(rates)
