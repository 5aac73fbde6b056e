#!/usr/bin/env python3
"""Run module as file."""
from __future__ import annotations

from switched_lindblad.main import main

if __name__ == "__main__":
    raise SystemExit(main())
