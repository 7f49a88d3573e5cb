"""Brute-force checkers for the standalone combinatorial identities.

Each identity is evaluated exactly on both sides from its definition; the
left side is always the partition (or direct) sum, the right side the closed
form, and where a third independent route exists (the labeled-tree oracle)
all of them must coincide.  A check never proves anything symbolically; it
confirms instances, which is what the sweeps are for.

Identity names:

* ``binomial_product``     - sum over k-block set partitions of the product
  of shifted multinomials equals a binomial times one shifted multinomial.
* ``tree_sum``             - sum over k-block set partitions of block-sum
  powers equals binomial(n-1, k-1) * (sum A)**(n-k); cross-checked against
  an exhaustive labeled-tree (code) enumeration.
* ``stirling_alternating`` - sum of (-1)**k (k-1)! S(n, k) is -1 at n=1 and
  0 for n >= 2.
* ``vanishing``            - sum over set partitions of correction times
  socle coefficients is 0 for multisets of size >= 2 and 1 for singletons.
* ``ff_multinomial``       - the multinomial theorem for falling factorials.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .numbers import binomial, factorial, falling_factorial, format_rational, multinomial
from .partitions import (
    block_sum_vector,
    block_sums,
    block_values,
    multiset,
    set_partitions,
    stirling2,
)
from .ring import correction_coeff, socle_coeff

IDENTITY_NAMES = (
    "binomial_product",
    "tree_sum",
    "stirling_alternating",
    "vanishing",
    "ff_multinomial",
)


@dataclass(frozen=True)
class IdentityReport:
    """One checked identity instance with both sides' exact values.

    ``oracle`` carries the third, independently computed value when the
    identity has one (the labeled-tree enumeration for ``tree_sum``).
    """

    identity: str
    params: dict = field(compare=False)
    lhs: Fraction = Fraction(0)
    rhs: Fraction = Fraction(0)
    oracle: Optional[Fraction] = None

    @property
    def passed(self) -> bool:
        if self.oracle is not None and self.oracle != self.rhs:
            return False
        return self.lhs == self.rhs

    def to_json_dict(self) -> dict:
        row = {
            "identity": self.identity,
            "params": self.params,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "pass": self.passed,
        }
        if self.oracle is not None:
            row["oracle"] = format_rational(self.oracle)
        return row


def prufer_decode(code: Iterable[int], vertex_count: int) -> tuple[tuple[int, int], ...]:
    """The unique labeled tree on 0..vertex_count-1 with the given code.

    Standard decoding: each code entry connects the smallest current leaf to
    it.  The code must have length vertex_count - 2 with valid labels.
    """
    code = tuple(code)
    if vertex_count < 2:
        raise ValueError("need at least 2 vertices")
    if len(code) != vertex_count - 2:
        raise ValueError(f"code length {len(code)} != vertex_count - 2")
    for c in code:
        if not 0 <= c < vertex_count:
            raise ValueError(f"invalid vertex label {c}")
    degree = [1] * vertex_count
    for c in code:
        degree[c] += 1
    leaves = [v for v in range(vertex_count) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for c in code:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, c), max(leaf, c)))
        degree[leaf] = 0
        degree[c] -= 1
        if degree[c] == 1:
            heapq.heappush(leaves, c)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return tuple(edges)


def prufer_encode(edges: Iterable[tuple[int, int]], vertex_count: int) -> tuple[int, ...]:
    """Inverse of prufer_decode."""
    adjacency: dict[int, set[int]] = {v: set() for v in range(vertex_count)}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    if sum(len(nb) for nb in adjacency.values()) != 2 * (vertex_count - 1):
        raise ValueError("edge list is not a tree")
    leaves = [v for v in range(vertex_count) if len(adjacency[v]) == 1]
    heapq.heapify(leaves)
    code = []
    for _ in range(vertex_count - 2):
        leaf = heapq.heappop(leaves)
        neighbor = adjacency[leaf].pop()
        adjacency[neighbor].discard(leaf)
        code.append(neighbor)
        if len(adjacency[neighbor]) == 1:
            heapq.heappush(leaves, neighbor)
    return tuple(code)


def labeled_trees(vertex_count: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All labeled trees on 0..vertex_count-1, one per code."""
    if vertex_count == 1:
        yield ()
        return
    for code in itertools.product(range(vertex_count), repeat=vertex_count - 2):
        yield prufer_decode(code, vertex_count)


def tree_sum_oracle(a: Iterable[int], k: int) -> int:
    """Exhaustive code-space evaluation of the tree sum.

    Consider trees on a hub vertex of value 1 plus one vertex per entry of
    ``a``, the hub having degree exactly k.  In code terms the hub appears
    exactly k - 1 times, so the sum of entry-value products over all such
    trees is enumerated directly over codes of length len(a) - 1.
    """
    a = multiset(a)
    n = len(a)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n}, got k={k}")
    values = (1,) + a
    total = 0
    for code in itertools.product(range(n + 1), repeat=n - 1):
        if sum(1 for c in code if c == 0) != k - 1:
            continue
        prod = 1
        for c in code:
            prod *= values[c]
        total += prod
    return total


def _check_binomial_product(a: Iterable[int], k: int) -> IdentityReport:
    a = multiset(a)
    lhs = 0
    for p in set_partitions(len(a), blocks=k):
        term = multinomial(s + 1 for s in block_sum_vector(p, a))
        for blk in p:
            term *= multinomial(a[i] + 1 for i in blk)
        lhs += term
    rhs = binomial(len(a) - 1, k - 1) * multinomial(v + 1 for v in a)
    return IdentityReport(
        identity="binomial_product",
        params={"a": list(a), "k": k},
        lhs=Fraction(lhs),
        rhs=Fraction(rhs),
    )


def _check_tree_sum(a: Iterable[int], k: int) -> IdentityReport:
    a = multiset(a)
    lhs = 0
    for p in set_partitions(len(a), blocks=k):
        term = 1
        for j, s in enumerate(block_sum_vector(p, a)):
            term *= s ** (len(p[j]) - 1)
        lhs += term
    rhs = binomial(len(a) - 1, k - 1) * sum(a) ** (len(a) - k)
    oracle = tree_sum_oracle(a, k)
    return IdentityReport(
        identity="tree_sum",
        params={"a": list(a), "k": k},
        lhs=Fraction(lhs),
        rhs=Fraction(rhs),
        oracle=Fraction(oracle),
    )


def _check_stirling_alternating(n: int) -> IdentityReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = sum((-1) ** k * factorial(k - 1) * stirling2(n, k) for k in range(1, n + 1))
    rhs = -1 if n == 1 else 0
    return IdentityReport(
        identity="stirling_alternating",
        params={"n": n},
        lhs=Fraction(lhs),
        rhs=Fraction(rhs),
    )


def _check_vanishing(b: Iterable[int]) -> IdentityReport:
    b = multiset(b)
    if len(b) < 1:
        raise ValueError("multiset must be nonempty")
    total = Fraction(0)
    for p in set_partitions(len(b)):
        term = socle_coeff(block_sums(p, b))
        for j in range(len(p)):
            term *= correction_coeff(block_values(p, b, j))
        total += term
    rhs = Fraction(1) if len(b) == 1 else Fraction(0)
    return IdentityReport(
        identity="vanishing",
        params={"b": list(b)},
        lhs=total,
        rhs=rhs,
    )


def _check_ff_multinomial(xs: Iterable[int], n: int) -> IdentityReport:
    xs = tuple(xs)
    if n < 0:
        raise ValueError("n must be nonnegative")
    lhs = Fraction(falling_factorial(sum(xs), n))
    rhs = Fraction(0)
    for ks in _compositions(n, len(xs)):
        term = multinomial(ks)
        for x, k in zip(xs, ks):
            term *= falling_factorial(x, k)
        rhs += term
    return IdentityReport(
        identity="ff_multinomial",
        params={"xs": list(xs), "n": n},
        lhs=lhs,
        rhs=rhs,
    )


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_CHECKS = {
    "binomial_product": _check_binomial_product,
    "tree_sum": _check_tree_sum,
    "stirling_alternating": _check_stirling_alternating,
    "vanishing": _check_vanishing,
    "ff_multinomial": _check_ff_multinomial,
}


def check_identity(name: str, **params) -> IdentityReport:
    """Evaluate both sides of the named identity exactly and report equality."""
    if name not in _CHECKS:
        raise ValueError(f"unknown identity {name!r}; expected one of {IDENTITY_NAMES}")
    return _CHECKS[name](**params)


@dataclass(frozen=True)
class SweepBounds:
    """Cost dials for the identity sweeps.

    Defaults match the package's acceptance bar; CI can lower them, larger
    values just take longer.
    """

    max_len: int = 5
    max_sum: int = 8
    max_entry: int = 4
    tree_max_len: int = 5
    tree_max_entry: int = 3
    stirling_max_n: int = 10
    vanishing_max_len: int = 5
    vanishing_max_entry: int = 4
    ff_bound: int = 5
    ff_max_n: int = 8
    ff3_bound: int = 2
    ff3_max_n: int = 5


def identity_sweep(bounds: SweepBounds = SweepBounds()) -> list[IdentityReport]:
    """Run every identity over its bounded parameter grid, deterministically ordered."""
    return [check_identity(name, **params) for name, params in identity_sweep_cases(bounds)]


def identity_sweep_cases(bounds: SweepBounds = SweepBounds()) -> list[tuple[str, dict]]:
    """The (name, params) grid behind identity_sweep, exposed so runs can fan out."""
    from .partitions import index_multisets

    cases: list[tuple[str, dict]] = []
    for a in index_multisets(bounds.max_len, max_sum=bounds.max_sum, max_entry=bounds.max_entry):
        for k in range(1, len(a) + 1):
            cases.append(("binomial_product", {"a": list(a), "k": k}))
    for a in index_multisets(bounds.tree_max_len, max_entry=bounds.tree_max_entry):
        for k in range(1, len(a) + 1):
            cases.append(("tree_sum", {"a": list(a), "k": k}))
    for n in range(1, bounds.stirling_max_n + 1):
        cases.append(("stirling_alternating", {"n": n}))
    for b in index_multisets(bounds.vanishing_max_len, max_entry=bounds.vanishing_max_entry):
        cases.append(("vanishing", {"b": list(b)}))
    for x in range(-bounds.ff_bound, bounds.ff_bound + 1):
        for y in range(-bounds.ff_bound, bounds.ff_bound + 1):
            for n in range(bounds.ff_max_n + 1):
                cases.append(("ff_multinomial", {"xs": [x, y], "n": n}))
    for xs in itertools.product(range(-bounds.ff3_bound, bounds.ff3_bound + 1), repeat=3):
        for n in range(bounds.ff3_max_n + 1):
            cases.append(("ff_multinomial", {"xs": list(xs), "n": n}))
    return cases
