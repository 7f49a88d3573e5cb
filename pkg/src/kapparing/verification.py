"""Cross-validation sweeps tying the ring, the oracle, and the identities together.

Each function returns JSON-ready rows (dicts with a "pass" key) in a
deterministic order, so the CLI can emit them directly and fan the work out
to processes without changing the output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .identities import SweepBounds, check_identity, identity_sweep_cases
from .numbers import format_rational
from .oracle import integrate_kappa_top, pair_kappa_stratum, solve_coeffs_by_pairing
from .partitions import Multiset, block_sums, index_multisets, multiset, set_partitions
from .ring import (
    TRUNCATION_VARIANTS,
    KappaPoly,
    basis_coeff,
    faber_expand,
    kappa_product,
    kappa_to_psi,
    socle_coeff,
)


@dataclass(frozen=True)
class RingSweepBounds:
    """Grid for the coefficient cross-method sweep."""

    max_len: int = 4
    max_sum: int = 6
    max_entry: int = 4
    max_budget: int = 4
    genus_lifts: tuple[int, ...] = (1, 2)


def ring_sweep_cases(bounds: RingSweepBounds = RingSweepBounds()) -> list[tuple[Multiset, int]]:
    """All (index multiset, degree budget) pairs in the sweep, ordered."""
    return [
        (a, d)
        for a in index_multisets(bounds.max_len, max_sum=bounds.max_sum, max_entry=bounds.max_entry)
        for d in range(1, bounds.max_budget + 1)
    ]


def check_methods_agree(a: Iterable[int], d: int) -> dict:
    """One sweep case: all coefficient methods and the pairing solve must agree.

    Compares recursive/ck/closed per basis partition, then aggregates equal
    block-sum monomials and compares against the coefficients recovered from
    stratum pairings alone (and against kappa_product itself).
    """
    a = multiset(a)
    n = sum(a) + d + 2
    aggregated: dict[Multiset, Fraction] = {}
    methods_ok = True
    for p in set_partitions(len(a)):
        if len(p) > d:
            continue
        values = {
            method: basis_coeff(p, a, d, method=method)
            for method in ("recursive", "ck", "closed")
        }
        if len(set(values.values())) != 1:
            methods_ok = False
        key = block_sums(p, a)
        aggregated[key] = aggregated.get(key, Fraction(0)) + values["closed"]
    solved = solve_coeffs_by_pairing(a, n)
    pairing_ok = all(aggregated.get(mu, Fraction(0)) == coeff for mu, coeff in solved.items())
    pairing_ok = pairing_ok and all(
        solved.get(mu, Fraction(0)) == coeff for mu, coeff in aggregated.items()
    )
    poly = kappa_product(a, 0, n)
    product_ok = all(poly.coefficient(mu) == coeff for mu, coeff in solved.items()) and all(
        solved.get(mu, Fraction(0)) == coeff for mu, coeff in poly.terms.items()
    )
    return {
        "check": "method_agreement",
        "a": list(a),
        "d": d,
        "marked": n,
        "methods_agree": methods_ok,
        "pairing_agrees": pairing_ok,
        "product_agrees": product_ok,
        "pass": methods_ok and pairing_ok and product_ok,
    }


def check_genus_lift(a: Iterable[int], d: int, genus: int) -> dict:
    """kappa_product at genus g must equal the genus-zero product at n + 2g."""
    a = multiset(a)
    n = sum(a) + d + 2
    lifted = kappa_product(a, genus, n - 2 * genus) if n - 2 * genus >= 0 else None
    base = kappa_product(a, 0, n)
    ok = lifted is not None and lifted == base
    return {
        "check": "genus_lift",
        "a": list(a),
        "d": d,
        "genus": genus,
        "marked": n - 2 * genus,
        "pass": bool(ok),
    }


def check_top_degree(a: Iterable[int]) -> dict:
    """At degree budget 1 the product collapses to socle_coeff(a) * kappa_{sum a},
    and three independent routes must give that number."""
    a = multiset(a)
    n = sum(a) + 3
    poly = kappa_product(a, 0, n)
    lam = socle_coeff(a)
    expected = KappaPoly({(sum(a),): lam}) if lam else KappaPoly.zero()
    integral = integrate_kappa_top(a, n)
    paired = pair_kappa_stratum(a, (sum(a),))
    ok = poly == expected and integral == lam and paired == lam
    return {
        "check": "top_degree",
        "a": list(a),
        "marked": n,
        "socle": format_rational(lam),
        "pass": bool(ok),
    }


def check_round_trip(a: Iterable[int]) -> dict:
    """kappa -> psi -> kappa must reproduce the monomial exactly."""
    a = multiset(a)
    psi = kappa_to_psi(a)
    back = KappaPoly.zero()
    for key, coeff in psi.terms.items():
        back = back + coeff * faber_expand(key)
    ok = back == KappaPoly.monomial(a)
    return {"check": "round_trip", "a": list(a), "pass": bool(ok)}


def random_round_trip_cases(count: int = 20, seed: int = 20240211) -> list[Multiset]:
    rng = random.Random(seed)
    cases = []
    for _ in range(count):
        length = rng.randint(1, 4)
        cases.append(multiset(rng.randint(1, 5) for _ in range(length)))
    return cases


def reconcile_case(a: Iterable[int], d: int) -> list[dict]:
    """Compare every closed-form truncation variant against the recursive value,
    one row per basis partition."""
    a = multiset(a)
    rows = []
    for p in set_partitions(len(a)):
        if len(p) > d:
            continue
        reference = basis_coeff(p, a, d, method="recursive")
        row = {
            "a": list(a),
            "d": d,
            "partition": [list(blk) for blk in p],
            "recursive": format_rational(reference),
        }
        for variant in TRUNCATION_VARIANTS:
            value = basis_coeff(p, a, d, method="closed", truncation=variant)
            row[variant] = format_rational(value)
            row[f"{variant}_matches"] = value == reference
        rows.append(row)
    return rows


def reconcile_sweep(bounds: RingSweepBounds = RingSweepBounds()) -> tuple[list[dict], dict]:
    """Run the truncation reconciliation across the sweep.

    Returns (case rows, summary).  The summary names every variant that
    agrees with the recursive method on all rows; the expansion is healthy
    exactly when that list is ["partial_sum"].
    """
    rows: list[dict] = []
    for a, d in ring_sweep_cases(bounds):
        rows.extend(reconcile_case(a, d))
    summary = summarize_reconcile(rows)
    return rows, summary


def summarize_reconcile(rows: list[dict]) -> dict:
    totals = {variant: sum(1 for row in rows if row[f"{variant}_matches"]) for variant in TRUNCATION_VARIANTS}
    fully = [variant for variant in TRUNCATION_VARIANTS if totals[variant] == len(rows)]
    return {
        "cases": len(rows),
        "matches": totals,
        "variants_fully_agreeing": fully,
        "pinned_variant": "partial_sum",
        "pass": fully == ["partial_sum"],
    }


def pinned_product_checks() -> list[dict]:
    """The two hand-pinned expansions, cross-checked by every oracle route."""
    rows = []

    a = (1, 1)
    poly5 = kappa_product(a, 0, 5)
    lam = socle_coeff(a)
    ok5 = (
        poly5 == KappaPoly({(2,): Fraction(5)})
        and lam == 5
        and integrate_kappa_top(a, 5) == 5
        and pair_kappa_stratum(a, (2,)) == 5
    )
    rows.append(
        {
            "check": "pinned_product",
            "a": [1, 1],
            "genus": 0,
            "marked": 5,
            "terms": poly5.to_json_rows(),
            "pass": bool(ok5),
        }
    )

    poly6 = kappa_product(a, 0, 6)
    solved = solve_coeffs_by_pairing(a, 6)
    ok6 = (
        poly6 == KappaPoly({(1, 1): Fraction(1)})
        and poly6.coefficient((2,)) == 0
        and solved == {(1, 1): Fraction(1), (2,): Fraction(0)}
    )
    rows.append(
        {
            "check": "pinned_product",
            "a": [1, 1],
            "genus": 0,
            "marked": 6,
            "terms": poly6.to_json_rows(),
            "pass": bool(ok6),
        }
    )
    return rows


# Top-level workers so process pools can pickle them.

def identity_case_worker(case: tuple[str, dict]) -> dict:
    name, params = case
    return check_identity(name, **params).to_json_dict()


def method_case_worker(case: tuple[Multiset, int]) -> dict:
    a, d = case
    return check_methods_agree(a, d)


def genus_case_worker(case: tuple[Multiset, int, int]) -> dict:
    a, d, genus = case
    return check_genus_lift(a, d, genus)


def reconcile_case_worker(case: tuple[Multiset, int]) -> list[dict]:
    a, d = case
    return reconcile_case(a, d)


def run_ordered(worker, cases, jobs: int = 1) -> list:
    if jobs <= 1 or len(cases) <= 1:
        return [worker(case) for case in cases]
    import concurrent.futures

    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, cases))


def determinism_spot_check(jobs: int = 2) -> dict:
    """Recompute a fixed slice of identity cases through a process pool and
    compare the serialized rows byte for byte with the in-process results."""
    import json

    bounds = SweepBounds(
        max_len=2,
        max_sum=4,
        tree_max_len=2,
        vanishing_max_len=2,
        stirling_max_n=4,
        ff_bound=1,
        ff_max_n=2,
        ff3_bound=0,
        ff3_max_n=0,
    )
    cases = identity_sweep_cases(bounds)[:40]
    sequential = [identity_case_worker(case) for case in cases]
    pooled = run_ordered(identity_case_worker, cases, jobs=jobs)
    ok = json.dumps(sequential, sort_keys=True) == json.dumps(pooled, sort_keys=True)
    return {"check": "determinism", "cases": len(cases), "jobs": jobs, "pass": ok}


def run_suite(
    suite: str,
    identity_bounds: SweepBounds = SweepBounds(),
    ring_bounds: RingSweepBounds = RingSweepBounds(),
    jobs: int = 1,
) -> list[dict]:
    """Run one verification suite and return its rows.

    Suites: ``identities`` (the five identity grids), ``ring`` (pinned
    products, method agreement, genus lifts, top degree, round trips),
    ``oracle`` (three-path socle agreement), ``reconcile`` (truncation
    variants), ``all``.
    """
    rows: list[dict] = []
    if suite in ("identities", "all"):
        rows.extend(run_ordered(identity_case_worker, identity_sweep_cases(identity_bounds), jobs))
    if suite in ("ring", "all"):
        rows.extend(pinned_product_checks())
        rows.extend(run_ordered(method_case_worker, ring_sweep_cases(ring_bounds), jobs))
        genus_cases = [
            (a, d, g)
            for (a, d) in ring_sweep_cases(ring_bounds)
            for g in ring_bounds.genus_lifts
        ]
        rows.extend(run_ordered(genus_case_worker, genus_cases, jobs))
        for a in index_multisets(ring_bounds.max_len, max_sum=ring_bounds.max_sum, max_entry=ring_bounds.max_entry):
            rows.append(check_top_degree(a))
        for a in random_round_trip_cases():
            rows.append(check_round_trip(a))
    if suite in ("oracle", "all"):
        for a in index_multisets(ring_bounds.max_len, max_sum=ring_bounds.max_sum, max_entry=ring_bounds.max_entry):
            lam = socle_coeff(a)
            integral = integrate_kappa_top(a, sum(a) + 3)
            paired = pair_kappa_stratum(a, (sum(a),))
            rows.append(
                {
                    "check": "socle_three_paths",
                    "a": list(a),
                    "ring": format_rational(lam),
                    "integral": format_rational(integral),
                    "pairing": format_rational(paired),
                    "pass": lam == integral == paired,
                }
            )
    if suite in ("reconcile", "all"):
        nested = run_ordered(reconcile_case_worker, ring_sweep_cases(ring_bounds), jobs)
        flat = [row for rows_ in nested for row in rows_]
        summary = summarize_reconcile(flat)
        rows.append({"check": "reconcile_summary", **summary})
    if suite == "all":
        rows.append(determinism_spot_check(jobs=max(jobs, 2)))
    return rows
