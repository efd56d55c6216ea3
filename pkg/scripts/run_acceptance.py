"""Run acceptance criteria 1-9 and print one pass/fail line each; exit 1 if any fails."""
import runpy
import sys
from pathlib import Path

if __name__ == "__main__":
    here = Path(__file__).resolve().parent.parent / "tests"
    sys.path.insert(0, str(here))
    runpy.run_path(str(here / "test_acceptance.py"), run_name="__main__")
