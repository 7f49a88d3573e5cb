"""Set partitions of labeled index sets.

Partitions are the indexing backbone of every expansion formula in this
package: a kappa monomial with k indices is regrouped along set partitions
of the label set {0..k-1}.  Everything here is a plain immutable tuple in a
canonical form, so values can be dict keys and compared by ``==``.

Conventions:

* ``Multiset`` is a non-decreasing tuple of nonnegative integers.
* ``SetPartition`` is a tuple of blocks; each block is an ascending tuple of
  indices, blocks are ordered by their minimum element, and together they
  partition ``{0..k-1}``.  The empty tuple is the unique partition of the
  empty set.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Optional

Multiset = tuple[int, ...]
Block = tuple[int, ...]
SetPartition = tuple[Block, ...]


def multiset(values: Iterable[int]) -> Multiset:
    """Canonical multiset: entries sorted non-decreasing."""
    ms = tuple(sorted(values))
    for v in ms:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ValueError(f"multiset entries must be nonnegative integers, got {v!r}")
    return ms


def canonical_partition(blocks: Iterable[Iterable[int]]) -> SetPartition:
    """Validate and canonicalize a set partition.

    Blocks must be nonempty, pairwise disjoint, and cover {0..k-1} where k is
    the total number of indices.  Raises ValueError otherwise.
    """
    normalized = sorted(tuple(sorted(b)) for b in blocks)
    seen: set[int] = set()
    total = 0
    for blk in normalized:
        if not blk:
            raise ValueError("set partition blocks must be nonempty")
        total += len(blk)
        seen.update(blk)
    if len(seen) != total:
        raise ValueError("set partition blocks must be pairwise disjoint")
    if seen and (min(seen) != 0 or max(seen) != total - 1):
        raise ValueError(f"set partition must cover 0..{total - 1}, got indices {sorted(seen)}")
    return tuple(normalized)


def ground_size(p: SetPartition) -> int:
    return sum(len(b) for b in p)


def set_partitions(k: int, blocks: Optional[int] = None) -> Iterator[SetPartition]:
    """Stream every set partition of {0..k-1} exactly once, in canonical form.

    Enumeration follows restricted-growth-string order, so the stream never
    materializes the full Bell-sized family.  With ``blocks`` given, only
    partitions with exactly that many blocks are emitted (empty stream when
    blocks > k).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if blocks is not None and blocks < 0:
        raise ValueError("blocks must be nonnegative")
    if k == 0:
        if blocks in (None, 0):
            yield ()
        return
    if blocks == 0:
        return

    rgs = [0] * k

    def assemble() -> SetPartition:
        nblocks = max(rgs) + 1
        out: list[list[int]] = [[] for _ in range(nblocks)]
        for i, b in enumerate(rgs):
            out[b].append(i)
        # first occurrences of 0,1,2,... are increasing, so this is canonical
        return tuple(tuple(b) for b in out)

    def extend(i: int, top: int) -> Iterator[SetPartition]:
        if i == k:
            if blocks is None or top + 1 == blocks:
                yield assemble()
            return
        if blocks is not None and top + 1 > blocks:
            return
        for v in range(top + 2):
            rgs[i] = v
            yield from extend(i + 1, max(top, v))

    yield from extend(1, 0)


def refines(q: SetPartition, p: SetPartition) -> bool:
    """True iff every block of q lies inside a single block of p (q <= p)."""
    if ground_size(q) != ground_size(p):
        raise ValueError(
            f"partitions have different ground sets ({ground_size(q)} vs {ground_size(p)})"
        )
    owner = block_owner(p)
    try:
        return all(len({owner[e] for e in blk}) <= 1 for blk in q)
    except KeyError as exc:
        raise ValueError(f"index {exc.args[0]} missing from the other partition") from exc


def block_owner(p: SetPartition) -> dict[int, int]:
    """Map each index to the position of its block in p."""
    return {e: j for j, blk in enumerate(p) for e in blk}


def induced_partition(p: SetPartition, q: SetPartition) -> SetPartition:
    """Regroup q's blocks along p: a partition of {0..len(q)-1}.

    Position j stands for q's j-th block (canonical order); two positions
    share a block exactly when the corresponding q-blocks lie in a common
    p-block.  Requires q <= p; the result always has len(p) blocks.
    """
    if not refines(q, p):
        raise ValueError("induced_partition requires q to refine p")
    owner = block_owner(p)
    groups: dict[int, list[int]] = {}
    for j, blk in enumerate(q):
        groups.setdefault(owner[blk[0]], []).append(j)
    return canonical_partition(groups.values())


def restrict_partition(q: SetPartition, block: Iterable[int]) -> SetPartition:
    """Restrict q to a subset of its ground set, re-indexed 0..|block|-1.

    The subset must be a union of q-blocks; a q-block straddling the boundary
    is an error.
    """
    sel = sorted(set(block))
    k = ground_size(q)
    for e in sel:
        if not 0 <= e < k:
            raise ValueError(f"index {e} outside ground set 0..{k - 1}")
    pos = {e: i for i, e in enumerate(sel)}
    inside: list[Block] = []
    for blk in q:
        hits = sum(1 for e in blk if e in pos)
        if hits == 0:
            continue
        if hits != len(blk):
            raise ValueError(f"block {blk} straddles the restriction boundary")
        inside.append(tuple(pos[e] for e in blk))
    return canonical_partition(inside)


def refinements(p: SetPartition) -> Iterator[SetPartition]:
    """All q with q <= p, in a deterministic order.

    Built blockwise: a refinement of p is an independent partition of each
    p-block.
    """
    per_block = []
    for blk in p:
        local = [
            tuple(tuple(blk[i] for i in sub) for sub in lp)
            for lp in set_partitions(len(blk))
        ]
        per_block.append(local)
    for combo in itertools.product(*per_block):
        yield canonical_partition(itertools.chain.from_iterable(combo))


def blocks_within(fine: SetPartition, coarse: SetPartition) -> tuple[int, ...]:
    """For each coarse block (canonical order), the number of fine blocks inside it.

    Requires fine <= coarse.
    """
    if not refines(fine, coarse):
        raise ValueError("blocks_within requires the first partition to refine the second")
    owner = block_owner(coarse)
    counts = [0] * len(coarse)
    for blk in fine:
        counts[owner[blk[0]]] += 1
    return tuple(counts)


def block_sum_vector(p: SetPartition, a: Multiset) -> tuple[int, ...]:
    """Per-block sums of a-values, aligned with p's canonical block order."""
    if ground_size(p) != len(a):
        raise ValueError(f"partition of {ground_size(p)} indices against multiset of size {len(a)}")
    return tuple(sum(a[i] for i in blk) for blk in p)


def block_sums(p: SetPartition, a: Multiset) -> Multiset:
    """The multiset of per-block sums of a-values."""
    return multiset(block_sum_vector(p, a))


def block_values(p: SetPartition, a: Multiset, j: int) -> Multiset:
    """The multiset of a-values falling in p's j-th block."""
    return multiset(a[i] for i in p[j])


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Number of partitions of an n-set into exactly k nonempty blocks."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 arguments must be nonnegative")
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell(n: int) -> int:
    """Number of partitions of an n-set."""
    return sum(stirling2(n, k) for k in range(n + 1))


def index_multisets(
    max_len: int,
    max_sum: Optional[int] = None,
    max_entry: Optional[int] = None,
    min_len: int = 1,
) -> Iterator[Multiset]:
    """All canonical multisets with entries >= 1 within the given bounds.

    Used to parameterize verification sweeps; ordering is deterministic
    (by length, then lexicographic).
    """
    if max_sum is None and max_entry is None:
        raise ValueError("index_multisets needs max_sum or max_entry to bound the sweep")
    for length in range(min_len, max_len + 1):
        top = max_entry if max_entry is not None else max_sum
        for combo in itertools.combinations_with_replacement(range(1, top + 1), length):
            if max_sum is not None and sum(combo) > max_sum:
                continue
            yield combo
