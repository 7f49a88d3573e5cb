import itertools

import pytest

from kapparing.identities import (
    IDENTITY_NAMES,
    SweepBounds,
    check_identity,
    identity_sweep,
    identity_sweep_cases,
    labeled_trees,
    prufer_decode,
    prufer_encode,
    tree_sum_oracle,
)
from kapparing.partitions import index_multisets


# ---------------------------------------------------------------------------
# labeled trees


def test_prufer_decode_two_vertices():
    assert prufer_decode((), 2) == ((0, 1),)


def test_prufer_decode_star():
    assert prufer_decode((2,), 3) == ((0, 2), (1, 2))


def test_prufer_decode_validates_input():
    with pytest.raises(ValueError):
        prufer_decode((0,), 2)
    with pytest.raises(ValueError):
        prufer_decode((5,), 4)
    with pytest.raises(ValueError):
        prufer_decode((), 1)


@pytest.mark.parametrize("vertex_count", range(2, 7))
def test_decode_encode_round_trip_over_all_codes(vertex_count):
    seen = set()
    for code in itertools.product(range(vertex_count), repeat=vertex_count - 2):
        edges = prufer_decode(code, vertex_count)
        assert prufer_encode(edges, vertex_count) == code
        seen.add(edges)
    # Cayley: distinct codes give distinct trees
    assert len(seen) == vertex_count ** (vertex_count - 2)


def test_labeled_trees_counts():
    assert len(list(labeled_trees(1))) == 1
    assert len(list(labeled_trees(4))) == 16


def test_prufer_encode_rejects_non_trees():
    with pytest.raises(ValueError):
        prufer_encode(((0, 1),), 3)


# ---------------------------------------------------------------------------
# the tree-sum oracle


def test_tree_sum_oracle_values():
    assert tree_sum_oracle((1, 1), 1) == 2
    assert tree_sum_oracle((1, 1), 2) == 1
    assert tree_sum_oracle((1, 1, 1), 2) == 6
    assert tree_sum_oracle((5,), 1) == 1
    with pytest.raises(ValueError):
        tree_sum_oracle((1, 1), 3)


# ---------------------------------------------------------------------------
# individual identities


def test_binomial_product_instance():
    report = check_identity("binomial_product", a=[1, 1], k=1)
    assert report.passed
    assert report.lhs == report.rhs == 6


def test_tree_sum_three_way_instance():
    report = check_identity("tree_sum", a=[1, 1, 1], k=2)
    assert report.passed
    assert report.lhs == report.rhs == report.oracle == 6


def test_stirling_alternating_values():
    assert check_identity("stirling_alternating", n=1).lhs == -1
    report = check_identity("stirling_alternating", n=3)
    assert report.passed and report.lhs == 0
    for n in range(1, 11):
        assert check_identity("stirling_alternating", n=n).passed


def test_vanishing_both_branches():
    report = check_identity("vanishing", b=[1, 1])
    assert report.passed and report.lhs == 0
    report = check_identity("vanishing", b=[4])
    assert report.passed and report.lhs == 1


def test_ff_multinomial_instances():
    assert check_identity("ff_multinomial", xs=[3, -2], n=5).passed
    assert check_identity("ff_multinomial", xs=[2, -1, 2], n=4).passed
    assert check_identity("ff_multinomial", xs=[0, 0], n=0).passed


def test_check_identity_rejects_bad_requests():
    with pytest.raises(ValueError):
        check_identity("no_such_identity", a=[1])
    with pytest.raises(TypeError):
        check_identity("tree_sum", a=[1, 1])  # missing k
    with pytest.raises(ValueError):
        check_identity("stirling_alternating", n=0)


def test_report_json_shape():
    row = check_identity("tree_sum", a=[1, 1], k=1).to_json_dict()
    assert row["identity"] == "tree_sum"
    assert row["params"] == {"a": [1, 1], "k": 1}
    assert row["lhs"] == row["rhs"] == "2/1"
    assert row["oracle"] == "2/1"
    assert row["pass"] is True
    row = check_identity("vanishing", b=[2, 3]).to_json_dict()
    assert "oracle" not in row
    assert row["pass"] is True


# ---------------------------------------------------------------------------
# sweeps


def test_identity_names_are_exactly_the_registered_checks():
    cases = identity_sweep_cases(SweepBounds(max_len=2, max_sum=3, tree_max_len=2, vanishing_max_len=2))
    assert {name for name, _ in cases} == set(IDENTITY_NAMES)


def test_small_sweep_passes_everywhere():
    bounds = SweepBounds(
        max_len=3,
        max_sum=5,
        tree_max_len=3,
        vanishing_max_len=3,
        stirling_max_n=6,
        ff_bound=3,
        ff_max_n=5,
        ff3_bound=1,
        ff3_max_n=3,
    )
    reports = identity_sweep(bounds)
    assert reports, "sweep must not be empty"
    failed = [r for r in reports if not r.passed]
    assert not failed, [r.to_json_dict() for r in failed[:5]]


def test_tree_sum_holds_with_larger_entries():
    # spot checks beyond the default sweep grid
    for a in [(2, 3), (1, 2, 3), (3, 3, 3)]:
        for k in range(1, len(a) + 1):
            report = check_identity("tree_sum", a=list(a), k=k)
            assert report.passed, report.to_json_dict()


def test_vanishing_scope_boundary():
    # size one gives exactly 1; every larger size vanishes
    for b in index_multisets(4, max_entry=3):
        report = check_identity("vanishing", b=list(b))
        assert report.passed
        assert report.lhs == (1 if len(b) == 1 else 0)
