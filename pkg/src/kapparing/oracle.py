"""Independent verification machinery on genus-zero moduli.

Everything in this module is deliberately computed without touching the
expansion formulas in :mod:`kapparing.ring`: psi-monomial integrals come from
the multinomial formula, top-degree kappa integrals from the signed sum of
psi integrals, pairings against boundary strata from distributing kappa
indices over stratum components, and expansion coefficients from solving the
resulting exact linear system.  Agreement with the ring module is therefore a
genuine cross-check, not a tautology.

A boundary stratum of the genus-zero space is a tree of components; by the
perfect-pairing structure of its Chow ring, the pairing of a kappa-ring class
against the stratum depends only on the multiset of component dimensions.
``DimensionSequence`` is that multiset; ``StableTree`` realizes one concrete
tree per sequence for inspection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .numbers import multinomial
from .partitions import Multiset, SetPartition, block_sums, ground_size, multiset, set_partitions

DimensionSequence = Multiset


class RankDeficientPairingError(RuntimeError):
    """The pairing system did not determine the coefficients uniquely.

    At desk scale this would contradict the perfect-pairing premise, so it is
    surfaced loudly together with the offending matrix instead of being
    papered over with a pseudo-inverse.
    """

    def __init__(self, message: str, matrix: list[list[Fraction]], rank: int):
        super().__init__(message)
        self.matrix = matrix
        self.rank = rank


@dataclass(frozen=True)
class StableTree:
    """A marked tree of genus-zero components.

    ``markings[v]`` lists the marked points carried by vertex v (labels
    1..n); ``edges`` are unordered vertex pairs.  Stability means every
    vertex has degree + markings >= 3.
    """

    edges: tuple[tuple[int, int], ...]
    markings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        nv = len(self.markings)
        degree = [0] * nv
        for u, v in self.edges:
            if not (0 <= u < nv and 0 <= v < nv) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
            degree[u] += 1
            degree[v] += 1
        labels = [m for ms in self.markings for m in ms]
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise ValueError("marking sets must partition 1..n")
        if nv and len(self.edges) != nv - 1:
            raise ValueError("not a tree: wrong edge count")
        if nv:
            reach = {0}
            frontier = [0]
            adjacency = {u: set() for u in range(nv)}
            for u, v in self.edges:
                adjacency[u].add(v)
                adjacency[v].add(u)
            while frontier:
                u = frontier.pop()
                for w in adjacency[u]:
                    if w not in reach:
                        reach.add(w)
                        frontier.append(w)
            if len(reach) != nv:
                raise ValueError("not a tree: disconnected")
        for v in range(nv):
            if degree[v] + len(self.markings[v]) < 3:
                raise ValueError(f"vertex {v} unstable: valence {degree[v] + len(self.markings[v])}")

    @property
    def valences(self) -> tuple[int, ...]:
        degree = [0] * len(self.markings)
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return tuple(degree[v] + len(self.markings[v]) for v in range(len(self.markings)))

    @property
    def dimension_sequence(self) -> DimensionSequence:
        return multiset(val - 3 for val in self.valences)

    @property
    def total_markings(self) -> int:
        return sum(len(ms) for ms in self.markings)


def psi_integral(exponents: Sequence[int]) -> int:
    """Integral of a product of psi powers over genus-zero moduli.

    With m >= 3 marked points and exponents e_1..e_m, the value is the
    multinomial coefficient (m-3)! / prod(e_i!) when sum(e_i) == m - 3 and 0
    otherwise.
    """
    exponents = tuple(exponents)
    m = len(exponents)
    if m < 3:
        raise ValueError("need at least 3 marked points")
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be nonnegative")
    if sum(exponents) != m - 3:
        return 0
    return multinomial(exponents)


def integrate_psi_pushforward(p: SetPartition, a: Iterable[int], n: int) -> int:
    """Integral over n-pointed genus-zero moduli of the pushed-forward psi class
    attached to the block sums of p.

    Routed through :func:`psi_integral` on n + len(p) points with exponents
    (block sum + 1) at the forgotten points; 0 on degree mismatch.
    """
    a = multiset(a)
    if ground_size(p) != len(a):
        raise ValueError("partition does not match the index multiset")
    sums = block_sums(p, a)
    exponents = (0,) * n + tuple(s + 1 for s in sums)
    if len(exponents) < 3:
        return 0
    return psi_integral(exponents)


def integrate_kappa_top(a: Iterable[int], n: int) -> Fraction:
    """Integral of the kappa monomial over n-pointed genus-zero moduli.

    Nonzero only in the top degree sum(a) == n - 3, where it is the signed
    sum over set partitions of psi-pushforward integrals:

        sum over p of (-1)**(len(a) + len(p)) * integral(psi(p)).
    """
    a = multiset(a)
    if any(v < 1 for v in a):
        raise ValueError("kappa indices must be >= 1")
    if sum(a) != n - 3:
        return Fraction(0)
    total = 0
    for p in set_partitions(len(a)):
        sign = -1 if (len(a) + len(p)) % 2 else 1
        total += sign * integrate_psi_pushforward(p, a, n)
    return Fraction(total)


_TOP_CACHE: dict[Multiset, Fraction] = {}


def _top_evaluation(b: Multiset) -> Fraction:
    """integrate_kappa_top at the marking count that makes the degree top."""
    if not b:
        return Fraction(1)
    cached = _TOP_CACHE.get(b)
    if cached is None:
        cached = integrate_kappa_top(b, sum(b) + 3)
        _TOP_CACHE[b] = cached
    return cached


def pair_kappa_stratum(b: Iterable[int], dims: Iterable[int]) -> Fraction:
    """Pair a kappa monomial against a boundary stratum with the given
    component dimensions.

    Sum over all assignments of the monomial's indices to components such
    that each component receives indices summing to its dimension, of the
    product of per-component top evaluations (empty component: factor 1).
    Zero when the total degree does not match or no assignment fits.
    """
    b = multiset(b)
    if any(v < 1 for v in b):
        raise ValueError("kappa indices must be >= 1")
    dims = multiset(dims)
    if sum(b) != sum(dims):
        return Fraction(0)
    ncomp = len(dims)
    if ncomp == 0:
        return Fraction(1) if not b else Fraction(0)
    total = Fraction(0)
    for assignment in itertools.product(range(ncomp), repeat=len(b)):
        received = [0] * ncomp
        for idx, comp in zip(b, assignment):
            received[comp] += idx
        if tuple(received) != dims:
            continue
        term = Fraction(1)
        for comp in range(ncomp):
            bucket = multiset(idx for idx, c in zip(b, assignment) if c == comp)
            term *= _top_evaluation(bucket)
        total += term
    return total


def integer_partitions(total: int, max_parts: int) -> Iterator[Multiset]:
    """Partitions of ``total`` into at most ``max_parts`` parts >= 1, canonical
    and in deterministic (lexicographic) order."""
    if total == 0:
        yield ()
        return

    def extend(remaining: int, parts_left: int, minimum: int, acc: list[int]) -> Iterator[Multiset]:
        if remaining == 0:
            yield tuple(acc)
            return
        if parts_left == 0:
            return
        for part in range(minimum, remaining + 1):
            acc.append(part)
            yield from extend(remaining - part, parts_left - 1, part, acc)
            acc.pop()

    yield from extend(total, max_parts, 1, [])


def dimension_sequences(total: int, length: int) -> Iterator[DimensionSequence]:
    """Multisets of ``length`` nonnegative entries summing to ``total``."""
    for partition in integer_partitions(total, length):
        yield multiset((0,) * (length - len(partition)) + partition)


def pairing_system(
    a: Iterable[int], n: int
) -> tuple[list[DimensionSequence], list[Multiset], list[list[Fraction]], list[Fraction]]:
    """Assemble the exact linear system determining the expansion coefficients.

    Unknowns are basis monomials: integer partitions of sum(a) into at most
    d = n - sum(a) - 2 parts.  One equation per dimension sequence of length
    exactly d summing to sum(a): pairing the expansion against that stratum
    must reproduce the pairing of the original monomial.
    """
    a = multiset(a)
    if any(v < 1 for v in a):
        raise ValueError("kappa indices must be >= 1")
    d = n - sum(a) - 2
    if d < 1:
        raise ValueError(f"degree budget d={d} leaves no basis to solve for")
    unknowns = sorted(integer_partitions(sum(a), d))
    rows = sorted(set(dimension_sequences(sum(a), d)))
    matrix = [[pair_kappa_stratum(mu, dims) for mu in unknowns] for dims in rows]
    rhs = [pair_kappa_stratum(a, dims) for dims in rows]
    return rows, unknowns, matrix, rhs


def solve_exact(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square-or-tall exact linear system with a unique solution.

    Fraction-free forward elimination (Bareiss) over the augmented matrix,
    then back substitution.  Raises RankDeficientPairingError when the
    columns are not independent or the system is inconsistent.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    original = [row[:] for row in aug]
    rank = 0
    prev_pivot = Fraction(1)
    pivot_cols = []
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, nrows):
            if aug[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        aug[rank], aug[pivot_row] = aug[pivot_row], aug[rank]
        pivot = aug[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols + 1):
                aug[r][c] = (pivot * aug[r][c] - aug[r][col] * aug[rank][c]) / prev_pivot
            aug[r][col] = Fraction(0)
        prev_pivot = pivot
        pivot_cols.append(col)
        rank += 1
    if rank < ncols:
        raise RankDeficientPairingError(
            f"pairing system has rank {rank} < {ncols} unknowns",
            [row[:-1] for row in original],
            rank,
        )
    for r in range(rank, nrows):
        if aug[r][ncols] != 0:
            raise RankDeficientPairingError(
                "pairing system is inconsistent", [row[:-1] for row in original], rank
            )
    solution = [Fraction(0)] * ncols
    for i in range(rank - 1, -1, -1):
        col = pivot_cols[i]
        acc = aug[i][ncols]
        for c in range(col + 1, ncols):
            acc -= aug[i][c] * solution[c]
        solution[col] = acc / aug[i][col]
    return solution


def solve_coeffs_by_pairing(a: Iterable[int], n: int) -> dict[Multiset, Fraction]:
    """Recover the basis expansion of a kappa monomial from stratum pairings.

    The system is solved over every basis monomial (integer partition of
    sum(a) into at most d parts) and verified to have a unique solution with
    an exactly-zero residual.  The returned map is keyed by the block-sum
    multisets actually reachable from partitions of a's index set; monomials
    outside that family must solve to zero and are checked, not returned.
    """
    a = multiset(a)
    rows, unknowns, matrix, rhs = pairing_system(a, n)
    solution = solve_exact(matrix, rhs)
    for i, row in enumerate(matrix):
        residual = sum(row[j] * solution[j] for j in range(len(unknowns))) - rhs[i]
        if residual != 0:
            raise RankDeficientPairingError(
                f"nonzero residual in row {i} for dims {rows[i]}", matrix, len(unknowns)
            )
    d = n - sum(a) - 2
    reachable = {
        block_sums(p, a) for p in set_partitions(len(a)) if len(p) <= d
    }
    by_monomial = dict(zip(unknowns, solution))
    for mu, value in by_monomial.items():
        if mu not in reachable and value != 0:
            raise RankDeficientPairingError(
                f"unreachable basis monomial {mu} received nonzero coefficient {value}",
                matrix,
                len(unknowns),
            )
    return {mu: by_monomial[mu] for mu in sorted(reachable)}


def build_stratum_tree(dims: Iterable[int], n: int) -> StableTree:
    """A chain-shaped stable tree realizing the dimension sequence.

    Component v gets valence dims_v + 3; markings 1..n are distributed left to
    right after reserving edge slots.  The marking count must satisfy
    n == sum(dims_v + 3) - 2 * (len(dims) - 1).
    """
    dims = multiset(dims)
    if not dims:
        raise ValueError("dimension sequence must be nonempty")
    valences = [dv + 3 for dv in dims]
    length = len(dims)
    required = sum(valences) - 2 * (length - 1)
    if required != n:
        raise ValueError(f"dimension sequence needs {required} markings, got {n}")
    edges = tuple((v, v + 1) for v in range(length - 1))
    degree = [0] * length
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    markings: list[tuple[int, ...]] = []
    next_label = 1
    for v in range(length):
        count = valences[v] - degree[v]
        markings.append(tuple(range(next_label, next_label + count)))
        next_label += count
    return StableTree(edges=edges, markings=tuple(markings))
