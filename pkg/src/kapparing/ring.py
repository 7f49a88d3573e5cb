"""The kappa-ring algebra on moduli of curves of compact type.

A kappa monomial is a canonical multiset of indices >= 1 (the empty multiset
is the ring unit).  The central operation is ``kappa_product``: expand the
class kappa_{a_1}...kappa_{a_k} on the moduli space of genus g curves of
compact type with n marked points in the additive basis of kappa monomials
with at most d = 2g + n - sum(A) - 2 indices.  Positive genus enters only
through the reindexing n -> n + 2g; all coefficients are computed in the
genus-zero model.

The expansion coefficient of one basis partition can be computed three ways
(``basis_coeff`` methods):

* ``recursive`` - the triangular sum over refinements q <= p of
  socle(q) * correction([p:q]).
* ``ck``        - per-block aggregation: sum over compositions (k_i) with
  sum <= d of the product of per-block split weights.
* ``closed``    - the fully explicit sum over chains t <= r <= p, with an
  alternating truncation factor cutting the expansion at d parts.

The three must agree; the test suite and the ``reconcile`` sweep enforce it.

The closed form's truncation factor has two candidate conventions (see
``TRUNCATION_VARIANTS``).  ``partial_sum`` evaluates the truncated
alternating binomial sum directly and is the pinned default; the
``single_binomial`` convention, which replaces the sum by a single binomial
with top index len(t) - len(r) evaluated at min(len(t), d), does not
reproduce the recursive values and is kept only so the reconciliation sweep
can demonstrate that with data.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .numbers import alt_binomial_partial_sum, binomial, factorial, format_rational, multinomial
from .partitions import (
    Multiset,
    SetPartition,
    block_sum_vector,
    block_sums,
    block_values,
    blocks_within,
    canonical_partition,
    ground_size,
    induced_partition,
    multiset,
    refinements,
    set_partitions,
)

METHODS = ("recursive", "ck", "closed")
TRUNCATION_VARIANTS = ("partial_sum", "single_binomial")

KappaMonomial = Multiset


def kappa_monomial(indices: Iterable[int]) -> KappaMonomial:
    """Canonical kappa monomial: sorted indices, all >= 1; () is the unit."""
    ms = multiset(indices)
    if any(v < 1 for v in ms):
        raise ValueError(f"kappa indices must be >= 1, got {ms}")
    return ms


class _Combination:
    """A finite formal sum of monomial keys with exact rational coefficients.

    Zero coefficients are never stored; equality is term-by-term.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Multiset, Union[int, Fraction]]] = None):
        cleaned: dict[Multiset, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    cleaned[multiset(key)] = coeff
        self.terms = cleaned

    @classmethod
    def zero(cls):
        return cls()

    def coefficient(self, key: Iterable[int]) -> Fraction:
        return self.terms.get(multiset(key), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def __add__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        combined = dict(self.terms)
        for key, coeff in other.terms.items():
            combined[key] = combined.get(key, Fraction(0)) + coeff
        return type(self)(combined)

    def __sub__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self + (-1) * other

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        return type(self)({key: scalar * coeff for key, coeff in self.terms.items()})

    def sorted_terms(self) -> list[tuple[Multiset, Fraction]]:
        """Terms ordered by (length descending, lexicographic)."""
        return sorted(self.terms.items(), key=lambda item: (-len(item[0]), item[0]))

    def to_json_rows(self) -> list[dict]:
        return [
            {"monomial": list(key), "coefficient": format_rational(coeff)}
            for key, coeff in self.sorted_terms()
        ]

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{coeff}*{key}" for key, coeff in self.sorted_terms())
        return f"{type(self).__name__}({body})"


class KappaPoly(_Combination):
    """Formal rational combination of kappa monomials."""

    @classmethod
    def unit(cls) -> "KappaPoly":
        return cls({(): Fraction(1)})

    @classmethod
    def monomial(cls, indices: Iterable[int], coeff: Union[int, Fraction] = 1) -> "KappaPoly":
        return cls({kappa_monomial(indices): Fraction(coeff)})


class PsiPoly(_Combination):
    """Formal rational combination of pushed-forward psi monomials.

    Keys are the index multisets q of the classes obtained by pushing forward
    products of psi powers at forgotten points; they live in a different
    basis than kappa monomials, hence the separate type.
    """


@dataclass(frozen=True)
class ModuliContext:
    """Genus and marking data fixing the expansion's degree budget.

    Any genus-g computation reduces to genus zero with n + 2g markings, so the
    only derived quantities are that reindexed marking count and the socle
    dimension n + 2g - 3.
    """

    genus: int
    markings: int

    def __post_init__(self):
        if self.genus < 0 or self.markings < 0:
            raise ValueError("genus and markings must be nonnegative")

    @property
    def reduced_markings(self) -> int:
        return self.markings + 2 * self.genus

    @property
    def socle_dimension(self) -> int:
        return self.reduced_markings - 3

    def degree_budget(self, a: Iterable[int]) -> int:
        """Maximum number of indices of a basis monomial in degree sum(a)."""
        return self.reduced_markings - sum(a) - 2


# Memo caches for the two scalar coefficient families.  Bounded so a long
# sweep cannot grow them without limit; lookups falling past the bound are
# simply recomputed.  dict operations are atomic under the GIL and values are
# deterministic, so concurrent warm-up is harmless.
COEFF_CACHE_LIMIT = 1_000_000
_SOCLE_CACHE: dict[Multiset, Fraction] = {}
_CORRECTION_CACHE: dict[Multiset, Fraction] = {}
_CACHE_LOCK = threading.Lock()


def clear_coeff_caches() -> None:
    with _CACHE_LOCK:
        _SOCLE_CACHE.clear()
        _CORRECTION_CACHE.clear()


def snapshot_coeff_caches() -> dict[str, dict[Multiset, Fraction]]:
    with _CACHE_LOCK:
        return {"socle": dict(_SOCLE_CACHE), "correction": dict(_CORRECTION_CACHE)}


def preload_coeff_caches(socle: Mapping[Multiset, Fraction], correction: Mapping[Multiset, Fraction]) -> None:
    with _CACHE_LOCK:
        for key, value in socle.items():
            if len(_SOCLE_CACHE) >= COEFF_CACHE_LIMIT:
                break
            _SOCLE_CACHE[multiset(key)] = Fraction(value)
        for key, value in correction.items():
            if len(_CORRECTION_CACHE) >= COEFF_CACHE_LIMIT:
                break
            _CORRECTION_CACHE[multiset(key)] = Fraction(value)


def socle_coeff(a: Iterable[int]) -> Fraction:
    """Top-degree evaluation coefficient of a kappa monomial.

    In the top degree of the genus-zero model, kappa_A equals
    socle_coeff(A) times the single top kappa class.  Computed as the signed
    sum over set partitions p of the index set of the multinomial coefficient
    of the per-block sums each shifted by one:

        sum over p of (-1)**(len(A) + len(p)) * multinomial(|p_i| + 1).

    The empty multiset gives 1.
    """
    a = kappa_monomial(a)
    cached = _SOCLE_CACHE.get(a)
    if cached is not None:
        return cached
    total = 0
    for p in set_partitions(len(a)):
        sign = -1 if (len(a) + len(p)) % 2 else 1
        total += sign * multinomial(s + 1 for s in block_sum_vector(p, a))
    value = Fraction(total)
    if len(_SOCLE_CACHE) < COEFF_CACHE_LIMIT:
        _SOCLE_CACHE[a] = value
    return value


def correction_coeff(a: Iterable[int]) -> Fraction:
    """Triangular correction coefficient of an index multiset.

    Signed sum over set partitions r of the index set, weighting each
    partition by (len(r) - 1)! and by the product over blocks of the
    multinomial coefficient of the block's entries each shifted by one:

        sum over r of (-1)**(len(A) + len(r)) * (len(r)-1)!
                      * prod_j multinomial(a_i + 1 for i in r_j).

    Single entries give 1; the empty multiset gives 1 by the empty-product
    convention.
    """
    a = kappa_monomial(a)
    if not a:
        return Fraction(1)
    cached = _CORRECTION_CACHE.get(a)
    if cached is not None:
        return cached
    total = 0
    for r in set_partitions(len(a)):
        sign = -1 if (len(a) + len(r)) % 2 else 1
        weight = factorial(len(r) - 1)
        for blk in r:
            weight *= multinomial(a[i] + 1 for i in blk)
        total += sign * weight
    value = Fraction(total)
    if len(_CORRECTION_CACHE) < COEFF_CACHE_LIMIT:
        _CORRECTION_CACHE[a] = value
    return value


def socle_of_partition(p: SetPartition, a: Multiset) -> Fraction:
    """Product of socle coefficients over the blocks of p."""
    result = Fraction(1)
    for j in range(len(p)):
        result *= socle_coeff(block_values(p, a, j))
    return result


def faber_expand(q: Iterable[int]) -> KappaPoly:
    """Expand a pushed-forward psi monomial into kappa monomials.

    The class with psi exponents q_i + 1 at len(q) forgotten points equals the
    sum over permutations of the kappa monomial indexed by cycle sums.
    Grouping permutations by the set partition p of their cycle supports,
    each p carries prod_blocks (|block| - 1)! permutations:

        psi(q) = sum over p of prod_b (len(b) - 1)! * kappa_{block sums}.
    """
    q = kappa_monomial(q)
    terms: dict[Multiset, Fraction] = {}
    for p in set_partitions(len(q)):
        weight = 1
        for blk in p:
            weight *= factorial(len(blk) - 1)
        key = block_sums(p, q)
        terms[key] = terms.get(key, Fraction(0)) + weight
    return KappaPoly(terms)


def kappa_to_psi(a: Iterable[int]) -> PsiPoly:
    """Inverse of faber_expand: a kappa monomial as a signed psi combination.

        kappa_A = sum over set partitions p of (-1)**(len(A) + len(p))
                  * psi(block sums of p).
    """
    a = kappa_monomial(a)
    terms: dict[Multiset, Fraction] = {}
    for p in set_partitions(len(a)):
        sign = -1 if (len(a) + len(p)) % 2 else 1
        key = block_sums(p, a)
        terms[key] = terms.get(key, Fraction(0)) + sign
    return PsiPoly(terms)


def split_weight(a: Iterable[int], k: int) -> Fraction:
    """Aggregate weight of splitting the multiset into exactly k groups.

    Sum over set partitions q with exactly k blocks of the product of the
    blocks' socle coefficients times the correction coefficient of the
    block-sum multiset.  These are the per-block building blocks of the
    ``ck`` expansion method.
    """
    a = kappa_monomial(a)
    if not 1 <= k <= len(a):
        raise ValueError(f"need 1 <= k <= {len(a)}, got k={k}")
    total = Fraction(0)
    for q in set_partitions(len(a), blocks=k):
        total += socle_of_partition(q, a) * correction_coeff(block_sums(q, a))
    return total


def _truncation_factor(variant: str, len_t: int, len_r: int, d: int) -> int:
    if variant == "partial_sum":
        return alt_binomial_partial_sum(len_t - len_r, len_r, d)
    if variant == "single_binomial":
        m = min(len_t, d)
        return (-1) ** m * binomial(len_t - len_r, m - len_r)
    raise ValueError(f"unknown truncation variant {variant!r}")


def _validate_basis_inputs(p: SetPartition, a: Multiset, d: int) -> SetPartition:
    p = canonical_partition(p)
    if ground_size(p) != len(a):
        raise ValueError("partition does not match the index multiset")
    if d < 1:
        raise ValueError("degree budget d must be >= 1")
    if len(p) > d:
        raise ValueError(f"partition has {len(p)} blocks, outside the basis range d={d}")
    return p


def _coeff_recursive(p: SetPartition, a: Multiset, d: int) -> Fraction:
    total = Fraction(0)
    for q in refinements(p):
        if len(q) > d:
            continue
        weight = socle_of_partition(q, a)
        sums = block_sum_vector(q, a)
        for group in induced_partition(p, q):
            weight *= correction_coeff(multiset(sums[j] for j in group))
        total += weight
    return total


def _coeff_ck(p: SetPartition, a: Multiset, d: int) -> Fraction:
    per_block = []
    for j in range(len(p)):
        values = block_values(p, a, j)
        per_block.append([split_weight(values, k) for k in range(1, len(values) + 1)])
    total = Fraction(0)
    for ks in itertools.product(*(range(1, len(w) + 1) for w in per_block)):
        if sum(ks) > d:
            continue
        term = Fraction(1)
        for j, k in enumerate(ks):
            term *= per_block[j][k - 1]
        total += term
    return total


def _coeff_closed(p: SetPartition, a: Multiset, d: int, truncation: str) -> Fraction:
    k = len(a)
    total = Fraction(0)
    for r in refinements(p):
        factor_p = 1
        for count in blocks_within(r, p):
            factor_p *= factorial(count - 1)
        r_sums = block_sum_vector(r, a)
        for t in refinements(r):
            trunc = _truncation_factor(truncation, len(t), len(r), d)
            if trunc == 0:
                continue
            denom = 1
            for blk in t:
                denom *= factorial(sum(a[i] for i in blk) + 1)
            factor_r = 1
            for j, count in enumerate(blocks_within(t, r)):
                factor_r *= factorial(r_sums[j] + count)
            sign = -1 if (k + len(t) + len(r)) % 2 else 1
            total += Fraction(sign * factor_r * factor_p * trunc, denom)
    return total


def basis_coeff(
    p: SetPartition,
    a: Iterable[int],
    d: int,
    method: str = "closed",
    truncation: str = "partial_sum",
) -> Fraction:
    """Coefficient of the basis monomial indexed by p in the expansion of kappa_A.

    ``d`` is the degree budget (basis monomials have at most d indices);
    partitions with more than d blocks are outside the basis and rejected.
    All methods return the same value; ``truncation`` selects the closed
    form's cutoff convention and exists for the reconciliation sweep.
    """
    a = kappa_monomial(a)
    p = _validate_basis_inputs(p, a, d)
    if method == "recursive":
        return _coeff_recursive(p, a, d)
    if method == "ck":
        return _coeff_ck(p, a, d)
    if method == "closed":
        return _coeff_closed(p, a, d, truncation)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def kappa_product(
    a: Iterable[int],
    genus: int = 0,
    markings: int = 0,
    method: str = "closed",
) -> KappaPoly:
    """Expand the product kappa_{a_1}...kappa_{a_k} in the additive basis.

    With d = 2*genus + markings - sum(a) - 2: the zero polynomial when
    d <= 0 (the basis in that degree is empty); otherwise the sum over set
    partitions p with at most d blocks of basis_coeff(p) times the monomial
    of block sums, aggregated over equal monomials.  Every surviving monomial
    has degree sum(a) and at most d indices.
    """
    a = kappa_monomial(a)
    ctx = ModuliContext(genus, markings)
    d = ctx.degree_budget(a)
    if d <= 0:
        return KappaPoly.zero()
    terms: dict[Multiset, Fraction] = {}
    for p in set_partitions(len(a)):
        if len(p) > d:
            continue
        coeff = basis_coeff(p, a, d, method=method)
        key = block_sums(p, a)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return KappaPoly(terms)


def reduce_to_basis(poly: KappaPoly, genus: int, markings: int, method: str = "closed") -> KappaPoly:
    """Rewrite every monomial of a polynomial in the additive basis.

    Linear over kappa_product; idempotent on polynomials already in the basis.
    """
    result = KappaPoly.zero()
    for mono, coeff in poly.terms.items():
        result = result + coeff * kappa_product(mono, genus, markings, method=method)
    return result
