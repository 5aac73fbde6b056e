"""``switched-lindblad`` package."""

from __future__ import annotations

__version__: Final[str] = "1.0.0"
__title__: Final[str] = "switched-lindblad"
__author__: Final[str] = "realshouzy"
__license__: Final[str] = "MIT"
__copyright__: Final[str] = "Copyright (c) 2022-present realshouzy"

from typing import Final
