from itertools import combinations
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kalmanson.geometry import ray_matrix
from kalmanson.splits import (
    CircularOrdering,
    Split,
    SplitSystem,
    canonical_orderings,
    circular_closure,
    crosses,
    is_circular,
    is_circular_by_closure,
    is_circular_exhaustive,
    is_weakly_compatible,
    join,
    make_split,
    nontrivial_splits,
    split_from_metric,
    split_metric,
)

from oracles import circular_by_definition

CIRCULAR_EXAMPLE = SplitSystem.from_blocks(5, [[1, 2], [2, 3], [4, 5]])
INCOMPATIBLE_EXAMPLE = SplitSystem.from_blocks(5, [[1, 2], [1, 3], [1, 4]])


class TestMakeSplit:
    def test_already_canonical(self):
        assert make_split(5, {3, 4, 5}).block == {3, 4, 5}

    def test_complements_block_with_one(self):
        assert make_split(5, {1, 2}).block == {3, 4, 5}

    def test_example_split(self):
        s = make_split(5, {2, 4})
        assert s.block == {2, 4}
        assert s.other == {1, 3, 5}

    @pytest.mark.parametrize("members", [set(), {1, 2, 3, 4, 5}, {0, 2}, {2, 6}])
    def test_rejects(self, members):
        with pytest.raises(ValueError):
            make_split(5, members)

    def test_direct_construction_must_be_canonical(self):
        with pytest.raises(ValueError):
            Split(5, frozenset({1, 2}))

    def test_size_and_flags(self):
        assert make_split(6, {2}).is_trivial
        assert make_split(6, {2, 3}).is_minimal
        assert make_split(6, {2, 3, 4}).size == 3
        assert make_split(5, {1}).block == {2, 3, 4, 5}  # trivial split of element 1

    def test_str(self):
        assert str(make_split(5, {3, 4, 5})) == "12|345"
        assert str(make_split(10, {10})) == "1,2,3,4,5,6,7,8,9|10"


def test_nontrivial_count():
    for n in range(4, 10):
        assert len(nontrivial_splits(n)) == 2 ** (n - 1) - n - 1


class TestSplitMetric:
    def test_v2_example(self):
        assert np.array_equal(split_metric(make_split(5, {1, 2})), ray_matrix("V", 5, 2).matrix)

    def test_v13_example(self):
        assert np.array_equal(split_metric(make_split(5, {1, 4, 5})), ray_matrix("V", 5, 1, 3).matrix)

    def test_from_metric_v3(self):
        assert split_from_metric(ray_matrix("V", 5, 3).matrix) == make_split(5, {1, 2, 3})

    def test_zero_matrix_rejected(self):
        with pytest.raises(ValueError):
            split_from_metric(np.zeros((5, 5), dtype=int))

    def test_inconsistent_rejected(self):
        m = split_metric(make_split(5, {2, 3}))
        m[3, 4] = m[4, 3] = 1
        with pytest.raises(ValueError):
            split_from_metric(m)

    def test_non_binary_rejected(self):
        m = 2 * split_metric(make_split(5, {2, 3}))
        with pytest.raises(ValueError):
            split_from_metric(m)

    @pytest.mark.parametrize("n", range(4, 10))
    def test_round_trip_exhaustive(self, n):
        for s in nontrivial_splits(n):
            m = split_metric(s)
            assert (np.diag(m) == 0).all()
            assert split_from_metric(m) == s


class TestWeakCompatibility:
    def test_incompatible_example(self):
        ok, w = is_weakly_compatible(INCOMPATIBLE_EXAMPLE)
        assert not ok
        a1, a2, a3 = w.blocks
        assert w.a in a1 & a2 & a3
        assert w.a1 in a1 - a2 - a3
        assert w.a2 in a2 - a1 - a3
        assert w.a3 in a3 - a1 - a2

    def test_circular_example(self):
        assert is_weakly_compatible(CIRCULAR_EXAMPLE) == (True, None)

    def test_pairs_are_always_compatible(self):
        splits = nontrivial_splits(6)
        for s1, s2 in combinations(splits[:12], 2):
            assert is_weakly_compatible(SplitSystem(6, [s1, s2]))[0]


class TestJoin:
    def test_intersection(self):
        s = join(make_split(5, {3, 4, 5}), make_split(5, {4, 5}))
        assert s == make_split(5, {4, 5})

    def test_empty_intersection(self):
        assert join(make_split(5, {2, 3}), make_split(5, {4, 5})) is None

    def test_orientation(self):
        # A1 = {1,4,5}, A2 = {1,2,5} -> {1,5} | {2,3,4}
        s = join(make_split(5, {2, 3}), make_split(5, {3, 4}), (1, 1))
        assert s == make_split(5, {1, 5})

    @pytest.mark.parametrize("n", [5, 6])
    def test_join_is_weakly_compatible_with_parents(self, n):
        for s1, s2 in combinations(nontrivial_splits(n), 2):
            for o in ((0, 0), (0, 1), (1, 0), (1, 1)):
                j = join(s1, s2, o)
                if j is None:
                    continue
                assert is_weakly_compatible(SplitSystem(n, {s1, s2, j}))[0]


class TestOrderings:
    @pytest.mark.parametrize("n", range(3, 9))
    def test_count(self, n):
        assert len(list(canonical_orderings(n))) == factorial(n - 1) // 2

    def test_canonical_form(self):
        assert CircularOrdering((3, 4, 5, 1, 2)).order == (1, 2, 3, 4, 5)
        assert CircularOrdering((1, 5, 4, 3, 2)).order == (1, 2, 3, 4, 5)

    @given(st.permutations(range(1, 8)))
    def test_dihedral_class_has_one_form(self, perm):
        c = CircularOrdering(tuple(perm))
        rotated = perm[3:] + perm[:3]
        assert CircularOrdering(tuple(rotated)) == c
        assert CircularOrdering(tuple(reversed(perm))) == c
        assert c.order[0] == 1 and c.order[1] < c.order[-1]

    def test_arcs(self):
        arcs = CircularOrdering((1, 2, 3, 4, 5)).arcs()
        assert len(arcs) == 5
        assert make_split(5, {2, 3}) in arcs
        assert make_split(5, {2, 4}) not in arcs


class TestCircularity:
    def test_circular_example(self):
        ok, ordering = is_circular(CIRCULAR_EXAMPLE)
        assert ok and ordering.order == (1, 2, 3, 4, 5)
        assert is_circular_exhaustive(CIRCULAR_EXAMPLE) == (True, ordering)

    def test_circular_example_has_two_orderings(self):
        hits = [o for o in canonical_orderings(5)
                if all(CircularOrdering(o).is_arc(s) for s in CIRCULAR_EXAMPLE.splits)]
        assert hits == [(1, 2, 3, 4, 5), (1, 2, 3, 5, 4)]

    def test_incompatible_example(self):
        assert is_circular(INCOMPATIBLE_EXAMPLE) == (False, None)
        assert not is_circular_exhaustive(INCOMPATIBLE_EXAMPLE)[0]
        assert not circular_by_definition(5, [s.block for s in INCOMPATIBLE_EXAMPLE])

    def test_single_split(self):
        for s in nontrivial_splits(6):
            ok, ordering = is_circular(SplitSystem(6, [s]))
            assert ok and ordering.is_arc(s)

    def test_empty(self):
        assert is_circular(SplitSystem(5))[0]

    def test_witness_orders_every_split_as_arc(self, rng):
        splits = nontrivial_splits(7)
        for _ in range(200):
            pick = rng.choice(len(splits), size=int(rng.integers(1, 6)), replace=False)
            ss = SplitSystem(7, [splits[i] for i in pick])
            ok, ordering = is_circular(ss)
            if ok:
                assert all(ordering.is_arc(s) for s in ss.splits)

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_every_pair_is_circular(self, n):
        for s1, s2 in combinations(nontrivial_splits(n), 2):
            assert is_circular_exhaustive(SplitSystem(n, [s1, s2]))[0]

    def test_routes_agree_with_definition_n5(self):
        splits = nontrivial_splits(5)
        for t in combinations(splits, 3):
            ss = SplitSystem(5, t)
            expected = circular_by_definition(5, [s.block for s in t])
            assert is_circular(ss)[0] == expected
            assert is_circular_exhaustive(ss)[0] == expected
            assert is_circular_by_closure(ss) == expected

    def test_subsets_of_circular_are_circular(self, rng):
        for _ in range(100):
            o = CircularOrdering(tuple(int(x) + 1 for x in rng.permutation(7)))
            arcs = o.arcs()
            pick = rng.choice(len(arcs), size=5, replace=False)
            ss = [arcs[i] for i in pick]
            for k in range(1, 5):
                for sub in combinations(ss, k):
                    assert is_circular(SplitSystem(7, sub))[0]


class TestClosure:
    def test_single_split(self):
        ss = SplitSystem(5, [make_split(5, {2, 3})])
        assert circular_closure(ss) == ss

    def test_circular_closure_is_weakly_compatible(self):
        assert is_weakly_compatible(circular_closure(CIRCULAR_EXAMPLE))[0]

    def test_incompatible_closure_fails(self):
        assert not is_weakly_compatible(circular_closure(INCOMPATIBLE_EXAMPLE))[0]

    def test_only_crossing_pairs_contribute(self):
        s1, s2 = make_split(6, {2, 3}), make_split(6, {2, 3, 4})
        assert not crosses(s1, s2)
        assert circular_closure(SplitSystem(6, [s1, s2])) == SplitSystem(6, [s1, s2])

    def test_nested_pairs_are_not_joined(self):
        # joining every pair, nested ones included, would pull in splits that
        # break weak compatibility even though this system is circular
        ss = SplitSystem.from_blocks(6, [[2, 3], [2, 3, 4], [2, 3, 5]])
        assert is_circular_exhaustive(ss)[0]
        assert is_circular_by_closure(ss)
        assert join(make_split(6, {2, 3, 4}), make_split(6, {2, 3, 5}), (1, 1)) is not None


def test_split_system_rejects_mixed_n():
    with pytest.raises(ValueError):
        SplitSystem(5, [make_split(5, {2, 3}), make_split(6, {2, 3})])


def test_split_system_is_immutable():
    with pytest.raises(AttributeError):
        CIRCULAR_EXAMPLE.n = 6


@settings(max_examples=50)
@given(st.integers(min_value=4, max_value=9), st.data())
def test_split_permutation_matches_metric_permutation(n, data):
    from kalmanson.geometry import permute_matrix

    sigma = data.draw(st.permutations(range(1, n + 1)))
    s = data.draw(st.sampled_from(nontrivial_splits(n)))
    assert split_from_metric(permute_matrix(split_metric(s), sigma)) == s.permuted(sigma)
