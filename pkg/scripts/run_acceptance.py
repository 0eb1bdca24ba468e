"""Run the acceptance suite and print the per-criterion table.

    python3 scripts/run_acceptance.py
"""
import pathlib
import sys

import pytest

root = pathlib.Path(__file__).resolve().parent.parent
sys.exit(pytest.main(["-q", str(root / "tests" / "test_acceptance.py")]))
