import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kapparing.partitions import index_multisets, multiset, set_partitions
from kapparing.ring import (
    METHODS,
    KappaPoly,
    ModuliContext,
    PsiPoly,
    basis_coeff,
    clear_coeff_caches,
    correction_coeff,
    faber_expand,
    kappa_monomial,
    kappa_product,
    kappa_to_psi,
    preload_coeff_caches,
    reduce_to_basis,
    snapshot_coeff_caches,
    socle_coeff,
    split_weight,
)

from bruteforce import naive_correction, naive_socle


# ---------------------------------------------------------------------------
# polynomials


def test_kappa_poly_drops_zero_coefficients():
    poly = KappaPoly({(1,): Fraction(0), (2,): Fraction(3)})
    assert poly.terms == {(2,): Fraction(3)}
    assert poly.coefficient((1,)) == 0
    assert not KappaPoly.zero()


def test_kappa_poly_algebra():
    p = KappaPoly.monomial((1, 2), 2)
    q = KappaPoly.monomial((2, 1), -2) + KappaPoly.monomial((3,))
    assert p + q == KappaPoly.monomial((3,))
    assert 0 * p == KappaPoly.zero()
    assert p - p == KappaPoly.zero()


def test_kappa_poly_json_rows_are_sorted_by_length_then_lex():
    poly = KappaPoly({(3,): 1, (1, 2): 2, (1, 1, 1): 3, (1, 3): 4})
    rows = poly.to_json_rows()
    assert [row["monomial"] for row in rows] == [[1, 1, 1], [1, 2], [1, 3], [3]]
    assert rows[0]["coefficient"] == "3/1"


def test_kappa_and_psi_polys_never_compare_equal():
    assert KappaPoly.monomial((1,)) != PsiPoly({(1,): 1})


def test_kappa_monomial_validation():
    assert kappa_monomial([2, 1]) == (1, 2)
    assert kappa_monomial([]) == ()
    with pytest.raises(ValueError):
        kappa_monomial([0, 1])


def test_moduli_context():
    ctx = ModuliContext(genus=2, markings=3)
    assert ctx.reduced_markings == 7
    assert ctx.socle_dimension == 4
    assert ctx.degree_budget((1, 1)) == 3
    with pytest.raises(ValueError):
        ModuliContext(genus=-1, markings=3)


# ---------------------------------------------------------------------------
# conversions


def test_faber_expand_singleton():
    assert faber_expand((4,)) == KappaPoly.monomial((4,))


def test_faber_expand_pair():
    assert faber_expand((1, 2)) == KappaPoly({(1, 2): 1, (3,): 1})


def test_faber_expand_triple_instance():
    # at (a, b, c) = (1, 2, 3): all five regroupings, the full merge twice
    expected = KappaPoly({(1, 2, 3): 1, (3, 3): 1, (2, 4): 1, (1, 5): 1, (6,): 2})
    assert faber_expand((1, 2, 3)) == expected


def test_kappa_to_psi_singleton_and_pair():
    assert kappa_to_psi((3,)) == PsiPoly({(3,): 1})
    assert kappa_to_psi((1, 1)) == PsiPoly({(1, 1): 1, (2,): -1})


def test_kappa_to_psi_triple_instance():
    expected = PsiPoly({(1, 2, 3): 1, (3, 3): -1, (2, 4): -1, (1, 5): -1, (6,): 1})
    assert kappa_to_psi((1, 2, 3)) == expected


def round_trip(a):
    back = KappaPoly.zero()
    for key, coeff in kappa_to_psi(a).terms.items():
        back = back + coeff * faber_expand(key)
    return back


@pytest.mark.parametrize("a", list(index_multisets(4, max_entry=4)))
def test_round_trip_recovers_the_monomial(a):
    assert round_trip(a) == KappaPoly.monomial(a)


# ---------------------------------------------------------------------------
# scalar coefficient families


def test_socle_coeff_values():
    assert socle_coeff((7,)) == 1
    assert socle_coeff((1, 1)) == 5
    assert socle_coeff((1, 2)) == 9
    assert socle_coeff(()) == 1


def test_correction_coeff_values():
    assert correction_coeff((3,)) == 1
    assert correction_coeff((1, 1)) == -5
    assert correction_coeff((1, 2)) == -9
    assert correction_coeff(()) == 1


@pytest.mark.parametrize("a", list(index_multisets(4, max_sum=7)))
def test_coefficients_match_independent_brute_force(a):
    assert socle_coeff(a) == naive_socle(a)
    assert correction_coeff(a) == naive_correction(a)


def test_correction_negates_socle_for_pairs():
    # consequence of the vanishing identity at two entries
    for a in index_multisets(2, max_sum=8, min_len=2):
        assert correction_coeff(a) == -socle_coeff(a)


def test_split_weight_values():
    assert split_weight((5,), 1) == 1
    assert split_weight((1, 1), 1) == 5
    assert split_weight((1, 1), 2) == -5
    assert split_weight((1, 1, 1), 2) == -135
    with pytest.raises(ValueError):
        split_weight((1, 1), 3)


def test_coeff_caches_round_trip():
    clear_coeff_caches()
    socle_coeff((1, 1, 2))
    correction_coeff((1, 1, 2))
    snapshot = snapshot_coeff_caches()
    assert snapshot["socle"][(1, 1, 2)] == socle_coeff((1, 1, 2))
    clear_coeff_caches()
    preload_coeff_caches(snapshot["socle"], snapshot["correction"])
    assert socle_coeff((1, 1, 2)) == snapshot["socle"][(1, 1, 2)]


# ---------------------------------------------------------------------------
# expansion coefficients


def test_basis_coeff_pinned_values():
    fine = ((0,), (1,))
    coarse = ((0, 1),)
    for method in METHODS:
        assert basis_coeff(coarse, (1, 1), 1, method=method) == 5
        assert basis_coeff(fine, (1, 1), 2, method=method) == 1
        assert basis_coeff(coarse, (1, 1), 2, method=method) == 0
        assert basis_coeff(((0, 1, 2),), (1, 1, 1), 2, method=method) == -74


def test_basis_coeff_rejects_partitions_outside_the_basis():
    with pytest.raises(ValueError):
        basis_coeff(((0,), (1,)), (1, 1), 1)
    with pytest.raises(ValueError):
        basis_coeff(((0, 1),), (1, 1), 0)
    with pytest.raises(ValueError):
        basis_coeff(((0, 1),), (1, 1), 2, method="simplex")


def test_rejected_truncation_variant_disagrees():
    # the single-binomial cutoff overshoots on the first nontrivial case
    value = basis_coeff(((0, 1),), (1, 1), 2, method="closed", truncation="single_binomial")
    assert value == -6
    with pytest.raises(ValueError):
        basis_coeff(((0, 1),), (1, 1), 2, method="closed", truncation="midpoint")


@pytest.mark.parametrize("a", [(1, 1), (1, 2), (1, 1, 1), (1, 1, 2), (2, 2)])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_methods_agree_pointwise(a, d):
    for p in set_partitions(len(a)):
        if len(p) > d:
            continue
        values = {basis_coeff(p, a, d, method=m) for m in METHODS}
        assert len(values) == 1, (a, d, p, values)


# ---------------------------------------------------------------------------
# products


def test_product_of_a_single_class_is_itself():
    assert kappa_product((2,), 0, 7) == KappaPoly.monomial((2,))


def test_product_top_degree_pair():
    assert kappa_product((1, 1), 0, 5) == KappaPoly({(2,): 5})


def test_product_self_basis_pair():
    poly = kappa_product((1, 1), 0, 6)
    assert poly == KappaPoly({(1, 1): 1})
    assert poly.coefficient((2,)) == 0


def test_product_three_ones():
    assert kappa_product((1, 1, 1), 0, 7) == KappaPoly({(1, 2): 15, (3,): -74})
    assert kappa_product((1, 1, 1), 0, 8) == KappaPoly({(1, 1, 1): 1})


def test_product_vanishes_outside_the_basis_range():
    assert kappa_product((1, 1), 0, 4) == KappaPoly.zero()
    assert kappa_product((3,), 0, 3) == KappaPoly.zero()


def test_product_of_unit_monomial():
    assert kappa_product((), 0, 5) == KappaPoly.unit()


@pytest.mark.parametrize("a", list(index_multisets(3, max_sum=5)))
def test_top_degree_collapses_to_socle_multiple(a):
    poly = kappa_product(a, 0, sum(a) + 3)
    assert poly == KappaPoly({(sum(a),): socle_coeff(a)})


@pytest.mark.parametrize("a", list(index_multisets(3, max_sum=5)))
@pytest.mark.parametrize("genus", [1, 2])
def test_genus_reduces_to_reindexed_markings(a, genus):
    n = sum(a) + 4
    assert kappa_product(a, genus, n) == kappa_product(a, 0, n + 2 * genus)


def test_grading_and_length_bounds():
    for a in index_multisets(4, max_sum=6):
        for d in (1, 2, 3):
            poly = kappa_product(a, 0, sum(a) + d + 2)
            for mono in poly.terms:
                assert sum(mono) == sum(a)
                assert len(mono) <= d


@settings(max_examples=60)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(1, 3))
def test_product_is_symmetric_in_the_inputs(values, d):
    n = sum(values) + d + 2
    reference = kappa_product(values, 0, n)
    for perm in itertools.islice(itertools.permutations(values), 6):
        assert kappa_product(perm, 0, n) == reference


def test_basis_monomials_expand_to_themselves():
    # whenever kappa_A itself lies in the basis, the fine partition carries 1
    # and strictly coarser partitions carry 0
    for a in index_multisets(3, max_sum=6):
        d = len(a) + 1
        poly = kappa_product(a, 0, sum(a) + d + 2)
        assert poly.coefficient(a) == 1
        for mono in poly.terms:
            if mono != multiset(a):
                assert poly.coefficient(mono) == 0


def test_reduce_to_basis():
    assert reduce_to_basis(KappaPoly.zero(), 0, 5) == KappaPoly.zero()
    assert reduce_to_basis(KappaPoly.monomial((1, 1), 3), 0, 5) == KappaPoly({(2,): 15})
    assert reduce_to_basis(KappaPoly.monomial((2,)), 0, 6) == KappaPoly.monomial((2,))
    mixed = KappaPoly.monomial((1, 1), 2) + KappaPoly.monomial((2,), 7)
    reduced = reduce_to_basis(mixed, 0, 5)
    assert reduced == KappaPoly({(2,): 17})
    assert reduce_to_basis(reduced, 0, 5) == reduced
