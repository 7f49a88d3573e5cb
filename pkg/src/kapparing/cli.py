"""Command line front end.

Subcommands:

* ``product``   - expand a kappa monomial product in the additive basis.
* ``xcoeff``    - one expansion coefficient, with cross-method agreement.
* ``pair``      - pair a kappa monomial against a stratum dimension sequence.
* ``solve``     - recover all expansion coefficients from pairings alone.
* ``verify``    - run verification suites; nonzero exit on any failure.
* ``reconcile`` - compare closed-form truncation variants against the
  recursive method and report which one matches everywhere.

Reports go to stdout as JSON (default) or CSV and are byte-deterministic for
identical requests, including under ``--jobs > 1``; wall-clock timing and
cache statistics go to stderr so they cannot perturb the reports.  Exit code
0 means success with every check passing, 1 a failed check or internal
inconsistency (the report is still emitted), 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from .identities import SweepBounds
from .numbers import format_rational, parse_rational
from .oracle import (
    RankDeficientPairingError,
    pair_kappa_stratum,
    pairing_system,
    solve_coeffs_by_pairing,
)
from .partitions import block_sums, canonical_partition, multiset, set_partitions
from .ring import (
    METHODS,
    KappaPoly,
    basis_coeff,
    kappa_product,
    preload_coeff_caches,
    snapshot_coeff_caches,
)
from .verification import (
    RingSweepBounds,
    run_ordered,
    reconcile_case_worker,
    ring_sweep_cases,
    run_suite,
    summarize_reconcile,
)

CACHE_FORMAT_TAG = "kappa-coeff-cache-v1"
CACHE_ENV_VAR = "KAPPA_CACHE"


class InputError(ValueError):
    """Invalid request data; maps to exit code 2."""


def parse_int_list(text: str, what: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise InputError(f"{what} must be a comma-separated integer list, got {text!r}") from exc


def parse_partition_arg(text: str, ground: int):
    try:
        blocks = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--partition must be a JSON nested integer list, got {text!r}") from exc
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise InputError("--partition must be a list of lists of indices")
    try:
        p = canonical_partition(blocks)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    total = sum(len(b) for b in p)
    if total != ground:
        raise InputError(f"partition covers {total} indices but the multiset has {ground}")
    return p


def resolve_cache_path(flag_value: Optional[str]) -> Optional[str]:
    # The environment variable wins over the flag so wrapper scripts can
    # redirect a hard-coded invocation.
    return os.environ.get(CACHE_ENV_VAR) or flag_value


def load_cache_file(path: str) -> None:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format") != CACHE_FORMAT_TAG:
            raise ValueError(f"unexpected format tag {payload.get('format')!r}")
        socle = {
            parse_int_list(key, "cache key"): parse_rational(value)
            for key, value in payload.get("socle", {}).items()
        }
        correction = {
            parse_int_list(key, "cache key"): parse_rational(value)
            for key, value in payload.get("correction", {}).items()
        }
    except FileNotFoundError:
        return
    except Exception as exc:  # corrupt cache: warn and recompute from scratch
        print(f"warning: ignoring unreadable cache {path}: {exc}", file=sys.stderr)
        return
    preload_coeff_caches(socle, correction)


def save_cache_file(path: str) -> None:
    snapshot = snapshot_coeff_caches()
    payload = {
        "format": CACHE_FORMAT_TAG,
        "socle": {
            ",".join(map(str, key)): format_rational(value)
            for key, value in sorted(snapshot["socle"].items())
        },
        "correction": {
            ",".join(map(str, key)): format_rational(value)
            for key, value in sorted(snapshot["correction"].items())
        },
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def emit(report: dict, fmt: str, rows_key: Optional[str] = None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2))
        sys.stdout.write("\n")
        return
    if fmt == "csv":
        rows = report.get(rows_key, []) if rows_key else [report]
        flattened = [
            {
                key: json.dumps(value) if isinstance(value, (list, dict)) else value
                for key, value in row.items()
            }
            for row in rows
        ]
        fieldnames: list[str] = []
        for flat in flattened:
            for key in flat:
                if key not in fieldnames:
                    fieldnames.append(key)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, restval="", lineterminator="\n")
        writer.writeheader()
        writer.writerows(flattened)
        sys.stdout.write(buffer.getvalue())
        return
    raise InputError(f"unknown format {fmt!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kappa",
        description="Exact kappa-class products and their verification oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, cache: bool = True, jobs: bool = False):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if cache:
            p.add_argument("--cache", default=None, help="path of the coefficient cache file")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    p_product = sub.add_parser("product", help="expand a kappa monomial product in the basis")
    p_product.add_argument("--a", required=True, help="comma-separated kappa indices, e.g. 1,1")
    p_product.add_argument("--genus", type=int, default=0)
    p_product.add_argument("--marked", type=int, required=True)
    p_product.add_argument("--method", choices=METHODS + ("pairing",), default="closed")
    add_common(p_product)

    p_xcoeff = sub.add_parser("xcoeff", help="one basis coefficient, all methods cross-checked")
    p_xcoeff.add_argument("--a", required=True)
    p_xcoeff.add_argument("--partition", required=True, help="JSON blocks over positions, e.g. [[0,1]]")
    p_xcoeff.add_argument("--d", type=int, required=True, help="degree budget (max basis length)")
    p_xcoeff.add_argument("--method", choices=METHODS + ("pairing",), default="closed")
    add_common(p_xcoeff)

    p_pair = sub.add_parser("pair", help="pair a kappa monomial against a dimension sequence")
    p_pair.add_argument("--a", required=True)
    p_pair.add_argument("--dims", required=True, help="comma-separated component dimensions")
    add_common(p_pair, cache=False)

    p_solve = sub.add_parser("solve", help="recover basis coefficients from stratum pairings")
    p_solve.add_argument("--a", required=True)
    p_solve.add_argument("--marked", type=int, required=True)
    add_common(p_solve, cache=False)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument(
        "--suite",
        choices=("identities", "ring", "oracle", "reconcile", "all"),
        default="all",
    )
    p_verify.add_argument("--max-sum", type=int, default=None, help="cap on sum of sweep multisets")
    p_verify.add_argument("--max-len", type=int, default=None, help="cap on length of sweep multisets")
    add_common(p_verify, jobs=True)

    p_reconcile = sub.add_parser("reconcile", help="compare closed-form truncation variants")
    p_reconcile.add_argument("--max-sum", type=int, default=None)
    p_reconcile.add_argument("--max-len", type=int, default=None)
    add_common(p_reconcile, jobs=True)

    return parser


def cmd_product(args) -> tuple[dict, int]:
    a = parse_int_list(args.a, "--a")
    if args.marked < 0 or args.genus < 0:
        raise InputError("--marked and --genus must be nonnegative")
    d = 2 * args.genus + args.marked - sum(a) - 2
    if args.method == "pairing":
        if d <= 0:
            poly = KappaPoly.zero()
        else:
            poly = KappaPoly(solve_coeffs_by_pairing(a, args.marked + 2 * args.genus))
    else:
        poly = kappa_product(a, args.genus, args.marked, method=args.method)
    report = {
        "command": "product",
        "inputs": {"a": sorted(a), "genus": args.genus, "marked": args.marked, "method": args.method},
        "degree_budget": d,
        "terms": poly.to_json_rows(),
    }
    return report, 0


def cmd_xcoeff(args) -> tuple[dict, int]:
    a = multiset(parse_int_list(args.a, "--a"))
    p = parse_partition_arg(args.partition, len(a))
    if args.d < 1:
        raise InputError("--d must be >= 1")
    if len(p) > args.d:
        raise InputError(f"partition has {len(p)} blocks, outside the basis range d={args.d}")
    values = {method: basis_coeff(p, a, args.d, method=method) for method in METHODS}
    if args.method == "pairing":
        # pairing determines the aggregated coefficient of the block-sum monomial
        n = sum(a) + args.d + 2
        solved = solve_coeffs_by_pairing(a, n)
        key = block_sums(p, a)
        aggregate = Fraction(0)
        for q in set_partitions(len(a)):
            if len(q) <= args.d and block_sums(q, a) == key:
                aggregate += basis_coeff(q, a, args.d, method="closed")
        value = solved.get(key, Fraction(0))
        agree = aggregate == value and len(set(values.values())) == 1
    else:
        value = values[args.method]
        agree = len(set(values.values())) == 1
    report = {
        "command": "xcoeff",
        "inputs": {
            "a": list(a),
            "partition": [list(blk) for blk in p],
            "d": args.d,
            "method": args.method,
        },
        "value": format_rational(value),
        "methods": {method: format_rational(val) for method, val in sorted(values.items())},
        "methods_agree": bool(agree),
    }
    return report, 0 if agree else 1


def cmd_pair(args) -> tuple[dict, int]:
    a = parse_int_list(args.a, "--a")
    dims = parse_int_list(args.dims, "--dims")
    if any(v < 0 for v in dims):
        raise InputError("--dims entries must be nonnegative")
    value = pair_kappa_stratum(a, dims)
    report = {
        "command": "pair",
        "inputs": {"a": sorted(a), "dims": sorted(dims)},
        "value": format_rational(value),
    }
    return report, 0


def cmd_solve(args) -> tuple[dict, int]:
    a = parse_int_list(args.a, "--a")
    d = args.marked - sum(a) - 2
    if d < 1:
        raise InputError(f"degree budget d={d} leaves no basis to solve for")
    rows, unknowns, matrix, rhs = pairing_system(a, args.marked)
    solution = solve_coeffs_by_pairing(a, args.marked)
    report = {
        "command": "solve",
        "inputs": {"a": sorted(a), "marked": args.marked},
        "degree_budget": d,
        "coefficients": [
            {"monomial": list(mu), "coefficient": format_rational(solution[mu])}
            for mu in sorted(solution, key=lambda m: (-len(m), m))
        ],
        "matrix": {"rows": len(matrix), "cols": len(unknowns), "rank": len(unknowns)},
        "residual_zero": True,
    }
    return report, 0


def _sweep_bounds(args) -> tuple[SweepBounds, RingSweepBounds]:
    identity_bounds = SweepBounds()
    ring_bounds = RingSweepBounds()
    if args.max_sum is not None:
        identity_bounds = SweepBounds(max_sum=args.max_sum)
        ring_bounds = RingSweepBounds(max_sum=args.max_sum)
    if args.max_len is not None:
        identity_bounds = SweepBounds(
            max_len=args.max_len,
            max_sum=identity_bounds.max_sum,
            tree_max_len=min(args.max_len, identity_bounds.tree_max_len),
            vanishing_max_len=min(args.max_len, identity_bounds.vanishing_max_len),
        )
        ring_bounds = RingSweepBounds(max_len=args.max_len, max_sum=ring_bounds.max_sum)
    return identity_bounds, ring_bounds


def cmd_verify(args) -> tuple[dict, int]:
    identity_bounds, ring_bounds = _sweep_bounds(args)
    rows = run_suite(args.suite, identity_bounds, ring_bounds, jobs=args.jobs)
    failed = sum(1 for row in rows if not row.get("pass", False))
    report = {
        "command": "verify",
        "suite": args.suite,
        "bounds": {
            "identities": identity_bounds.__dict__,
            "ring": {**ring_bounds.__dict__, "genus_lifts": list(ring_bounds.genus_lifts)},
        },
        "reports": rows,
        "counts": {"total": len(rows), "failed": failed},
        "pass": failed == 0,
    }
    return report, 0 if failed == 0 else 1


def cmd_reconcile(args) -> tuple[dict, int]:
    _, ring_bounds = _sweep_bounds(args)
    nested = run_ordered(reconcile_case_worker, ring_sweep_cases(ring_bounds), jobs=args.jobs)
    rows = [row for rows_ in nested for row in rows_]
    summary = summarize_reconcile(rows)
    report = {
        "command": "reconcile",
        "bounds": {**ring_bounds.__dict__, "genus_lifts": list(ring_bounds.genus_lifts)},
        "cases": rows,
        "summary": summary,
    }
    return report, 0 if summary["pass"] else 1


COMMANDS = {
    "product": cmd_product,
    "xcoeff": cmd_xcoeff,
    "pair": cmd_pair,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "reconcile": cmd_reconcile,
}

ROWS_KEYS = {
    "product": "terms",
    "xcoeff": None,
    "pair": None,
    "solve": "coefficients",
    "verify": "reports",
    "reconcile": "cases",
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    cache_path = resolve_cache_path(getattr(args, "cache", None))
    if cache_path:
        load_cache_file(cache_path)
    try:
        report, code = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except RankDeficientPairingError as exc:
        diagnostic = {
            "command": args.command,
            "error": "rank_deficient_pairing",
            "detail": str(exc),
            "rank": exc.rank,
            "matrix": [[format_rational(x) for x in row] for row in exc.matrix],
        }
        emit(diagnostic, getattr(args, "format", "json"))
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    emit(report, args.format, ROWS_KEYS[args.command])
    if cache_path:
        try:
            save_cache_file(cache_path)
        except OSError as exc:
            print(f"warning: could not write cache {cache_path}: {exc}", file=sys.stderr)
    snapshot = snapshot_coeff_caches()
    print(
        f"done in {time.monotonic() - started:.3f}s; cache: "
        f"{len(snapshot['socle'])} socle, {len(snapshot['correction'])} correction values",
        file=sys.stderr,
    )
    return code


if __name__ == "__main__":
    raise SystemExit(main())
