#!/usr/bin/env python3
"""Verify every catalog entry and print a one-line summary per entry.

Usage: python scripts/verify_catalog.py [--trace]
"""

import argparse
import sys

from floersplit import catalog
from floersplit.cobordism import trace_towers, verify_splitting


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trace", action="store_true", help="also print the tower replays")
    args = ap.parse_args()

    failures = 0
    for name in catalog.names():
        inst = catalog.load_entry(name)
        v = verify_splitting(inst)
        status = "pass" if v.passed else "FAIL"
        print(
            f"{name:32s} Lef(W)={str(v.lef_w):>4s} Lef(What)={str(v.lef_w_hat):>4s} "
            f"lambda={str(v.lambda_fo):>4s} h(X)={str(v.h_x):>2s} h(Y)={str(v.h_y):>2s}  {status}"
        )
        if args.trace:
            for tower in trace_towers(inst).towers:
                active = sum(1 for s in tower.steps if s.active)
                print(
                    f"    tower deg {tower.degree} ({tower.kind}): "
                    f"{active} active step(s), removed {tower.removed}"
                )
        failures += 0 if v.passed else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
