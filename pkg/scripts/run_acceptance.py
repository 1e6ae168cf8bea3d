"""Run the twelve acceptance criteria and print one PASS/FAIL line each.

    python3 scripts/run_acceptance.py [--only 3 5 12]
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import test_acceptance as acc  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", type=int, nargs="+", choices=sorted(acc.CRITERIA))
    args = parser.parse_args()
    failures = 0
    for n in args.only or sorted(acc.CRITERIA):
        passed, detail = acc.CRITERIA[n]()
        failures += not passed
        print(acc._line(n, passed, detail), flush=True)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
