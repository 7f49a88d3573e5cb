#!/usr/bin/env python3
"""Settle the closed-form truncation convention with data.

The closed expansion formula needs a cutoff factor limiting basis monomials
to at most d indices.  Two candidate conventions exist:

  partial_sum      sum((-1)**k * C(len(t)-len(r), k-len(r)) for k in len(r)..d)
  single_binomial  (-1)**M * C(len(t)-len(r), M-len(r)),  M = min(len(t), d)

This script compares both against the recursive method over the standard
sweep and prints which one matches everywhere, plus the first disagreements
of the losing variant.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kapparing.ring import TRUNCATION_VARIANTS
from kapparing.verification import RingSweepBounds, reconcile_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-sum", type=int, default=6)
    parser.add_argument("--max-len", type=int, default=4)
    parser.add_argument("--show", type=int, default=5, help="disagreements to print")
    args = parser.parse_args()

    bounds = RingSweepBounds(max_len=args.max_len, max_sum=args.max_sum)
    rows, summary = reconcile_sweep(bounds)

    print(f"{summary['cases']} coefficient cases swept")
    for variant in TRUNCATION_VARIANTS:
        print(f"  {variant}: {summary['matches'][variant]}/{summary['cases']} match recursive")
    print(f"variants agreeing everywhere: {summary['variants_fully_agreeing']}")

    shown = 0
    for row in rows:
        if shown >= args.show:
            break
        if not all(row[f"{v}_matches"] for v in TRUNCATION_VARIANTS):
            print(
                f"  disagreement at a={row['a']} d={row['d']} p={row['partition']}: "
                + ", ".join(f"{v}={row[v]}" for v in ("recursive",) + TRUNCATION_VARIANTS)
            )
            shown += 1

    return 0 if summary["variants_fully_agreeing"] == ["partial_sum"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
