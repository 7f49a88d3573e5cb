"""Independent brute-force oracles for the test suite.

Everything here is deliberately written against the standard library only,
with different algorithms than the package (insertion-recursion enumeration
instead of growth strings, math.comb instead of the factorial table), so a
shared bug cannot hide.
"""

import math
from fractions import Fraction


def naive_set_partitions(elements):
    """All partitions of a list, by inserting the last element everywhere."""
    elements = list(elements)
    if not elements:
        return [[]]
    rest, last = elements[:-1], elements[-1]
    out = []
    for smaller in naive_set_partitions(rest):
        for i, block in enumerate(smaller):
            out.append(smaller[:i] + [block + [last]] + smaller[i + 1 :])
        out.append(smaller + [[last]])
    return out


def as_block_sets(partition):
    """Order-insensitive canonical view of a partition."""
    return frozenset(frozenset(block) for block in partition)


def naive_stirling2(n, k):
    return sum(1 for p in naive_set_partitions(range(n)) if len(p) == k)


def naive_bell(n):
    return len(naive_set_partitions(range(n)))


def naive_multinomial(parts):
    parts = list(parts)
    value = math.factorial(sum(parts))
    for part in parts:
        value //= math.factorial(part)
    return value


def naive_socle(a):
    """Signed multinomial sum over partitions, the top-degree evaluation."""
    a = sorted(a)
    total = 0
    for p in naive_set_partitions(range(len(a))):
        sign = (-1) ** (len(a) + len(p))
        sums = [sum(a[i] for i in block) for block in p]
        total += sign * naive_multinomial(s + 1 for s in sums)
    return Fraction(total)


def naive_correction(a):
    """Signed factorial-weighted multinomial sum over partitions."""
    a = sorted(a)
    if not a:
        return Fraction(1)
    total = 0
    for p in naive_set_partitions(range(len(a))):
        term = (-1) ** (len(a) + len(p)) * math.factorial(len(p) - 1)
        for block in p:
            term *= naive_multinomial(a[i] + 1 for i in block)
        total += term
    return Fraction(total)
