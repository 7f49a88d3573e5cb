#!/usr/bin/env python3
"""Run every verification suite at the default bounds and print a summary.

Equivalent to `kappa verify --suite all`, but with a human-oriented digest
instead of the full JSON report.  Exits nonzero if anything fails.
"""

import argparse
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kapparing.identities import SweepBounds
from kapparing.verification import RingSweepBounds, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--max-sum", type=int, default=None)
    parser.add_argument("--max-len", type=int, default=None)
    args = parser.parse_args()

    identity_bounds = SweepBounds()
    ring_bounds = RingSweepBounds()
    if args.max_sum is not None:
        identity_bounds = SweepBounds(max_sum=args.max_sum)
        ring_bounds = RingSweepBounds(max_sum=args.max_sum)
    if args.max_len is not None:
        identity_bounds = SweepBounds(max_len=args.max_len, max_sum=identity_bounds.max_sum)
        ring_bounds = RingSweepBounds(max_len=args.max_len, max_sum=ring_bounds.max_sum)

    started = time.monotonic()
    rows = run_suite("all", identity_bounds, ring_bounds, jobs=args.jobs)
    elapsed = time.monotonic() - started

    by_check = Counter(row.get("check", row.get("identity", "?")) for row in rows)
    failures = [row for row in rows if not row.get("pass", False)]
    print(f"{len(rows)} checks in {elapsed:.1f}s")
    for name, count in sorted(by_check.items()):
        failed = sum(1 for row in failures if row.get("check", row.get("identity")) == name)
        marker = "ok " if failed == 0 else "FAIL"
        print(f"  {marker} {name}: {count - failed}/{count}")
    if failures:
        print("\nfirst failures:")
        for row in failures[:5]:
            print(f"  {row}")
        return 1
    print("all checks passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
