#!/usr/bin/env python3
"""Run the acceptance battery outside pytest; exits nonzero on any failure.

Example:
    python scripts/run_acceptance.py          # full battery (~30 s)
    python scripts/run_acceptance.py --fast   # shrunken heavy grids
"""

import argparse
import sys

from so21 import acceptance


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fast", action="store_true")
    args = parser.parse_args()

    results = acceptance.run_all(fast=args.fast)
    for res in results:
        print(res.line())
    failed = [res for res in results if not res.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} criteria passed")
    sys.exit(3 if failed else 0)


if __name__ == "__main__":
    main()
