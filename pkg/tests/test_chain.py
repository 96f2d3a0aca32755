"""Chain construction and the static 3-color scheme."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from cfcolor import DUMMY, Color, Interval, is_conflict_free
from cfcolor.chain import build_chain, color_chain, connected_components, static_color

from helpers import naive_conflict_free, random_instance


def iv(iid, left, right):
    return Interval(iid, left, right)


def interval_lists(max_n=12, span=30):
    def build(seed_and_n):
        seed, n = seed_and_n
        rng = random.Random(seed)
        ivs, _ = random_instance(rng, n, span=span)
        return ivs

    return st.tuples(st.integers(0, 10**9), st.integers(1, max_n)).map(build)


class TestComponents:
    def test_single(self):
        assert connected_components([iv(1, 0, 5)]) == [[iv(1, 0, 5)]]

    def test_disjoint(self):
        comps = connected_components([iv(1, 0, 1), iv(2, 4, 5), iv(3, 2, 3)])
        assert [[i.id for i in c] for c in comps] == [[1], [3], [2]]

    def test_abutting_closed_intervals_share_a_point(self):
        comps = connected_components([iv(1, 0, 2), iv(2, 2, 4)])
        assert len(comps) == 1

    def test_bridge(self):
        comps = connected_components([iv(1, 0, 2), iv(2, 5, 7), iv(3, 1, 6)])
        assert len(comps) == 1

    @given(interval_lists())
    def test_partition_is_exact(self, ivs):
        comps = connected_components(ivs)
        seen = [i.id for c in comps for i in c]
        assert sorted(seen) == sorted(i.id for i in ivs)
        # distinct components never intersect
        for a in range(len(comps)):
            for b in range(a + 1, len(comps)):
                for x in comps[a]:
                    for y in comps[b]:
                        assert not x.intersects(y)


class TestBuildChain:
    def test_empty(self):
        assert build_chain([]) == []

    def test_single_interval(self):
        assert build_chain([iv(1, 0, 5)]) == [iv(1, 0, 5)]

    def test_three_links(self):
        comp = [iv(1, 0, 4), iv(2, 3, 8), iv(3, 7, 10), iv(4, 1, 2)]
        assert [i.id for i in build_chain(comp)] == [1, 2, 3]

    def test_nested_keeps_only_outer(self):
        comp = [iv(1, 0, 10), iv(2, 1, 3), iv(3, 4, 6), iv(4, 2, 9)]
        assert [i.id for i in build_chain(comp)] == [1]

    def test_ties_prefer_smaller_id(self):
        comp = [iv(5, 0, 4), iv(2, 0, 4), iv(9, 2, 8), iv(7, 2, 8)]
        assert [i.id for i in build_chain(comp)] == [2, 7]

    @given(interval_lists())
    def test_chain_invariants(self, ivs):
        for comp in connected_components(ivs):
            chain = build_chain(comp)
            comp_left = min(i.left for i in comp)
            comp_right = max(i.right for i in comp)
            assert chain[0].left == comp_left
            assert chain[-1].right == comp_right
            by_id = {i.id for i in chain}
            # rights strictly increase and members two apart are disjoint
            for a, b in zip(chain, chain[1:]):
                assert b.right > a.right
                assert b.left <= a.right  # consecutive members stay connected
            for a, b in zip(chain, chain[2:]):
                assert b.left > a.right
            # no chain member is properly contained in another interval
            for m in chain:
                for other in comp:
                    if other.id != m.id and (other.left, other.right) != (m.left, m.right):
                        assert not other.contains_interval(m)
            # every non-chain interval is covered by the chain's union
            for other in comp:
                if other.id not in by_id:
                    covered = any(
                        c.left <= other.left and other.right <= c.right for c in chain
                    ) or any(
                        a.left <= other.left and other.right <= b.right
                        for a, b in zip(chain, chain[1:])
                        if other.left >= a.left and b.left <= other.right
                    )
                    assert covered or _covered_by_union(chain, other)


def _covered_by_union(chain, other):
    # the chain union is one connected run from chain[0].left to chain[-1].right
    return chain[0].left <= other.left and other.right <= chain[-1].right


class TestColorChain:
    def test_palette_too_small(self):
        import pytest

        with pytest.raises(ValueError):
            color_chain([iv(1, 0, 1)], [iv(1, 0, 1)], [Color(0, 0)])

    def test_alternation_and_dummy(self):
        comp = [iv(1, 0, 4), iv(2, 3, 8), iv(3, 7, 10), iv(4, 1, 2)]
        chain = build_chain(comp)
        red, blue = Color(0, 0), Color(0, 1)
        got = color_chain(chain, comp, [red, blue])
        assert got == {1: red, 2: blue, 3: red, 4: DUMMY}


class TestStaticColor:
    def test_uses_at_most_three_colors(self):
        rng = random.Random(7)
        for _ in range(50):
            ivs, _ = random_instance(rng, rng.randint(1, 40), span=60)
            state = static_color(ivs)
            assert len(state.colors_seen(include_dummy=True)) <= 3
            assert state.verdict()

    def test_disjoint_intervals_all_same_color(self):
        state = static_color([iv(1, 0, 1), iv(2, 2.5, 3.5), iv(3, 5, 6)])
        assert len({state.color_of(i) for i in (1, 2, 3)}) == 1

    def test_no_recolorings(self):
        rng = random.Random(11)
        ivs, _ = random_instance(rng, 30)
        state = static_color(ivs)
        assert state.ledger.total(include_rebuild=True) == 0

    @settings(max_examples=60, deadline=None)
    @given(interval_lists(max_n=14, span=40))
    def test_conflict_free_two_routes(self, ivs):
        state = static_color(ivs)
        assert is_conflict_free(ivs, state.assignment)
        ok, witness = naive_conflict_free(ivs, state.assignment, random.Random(3))
        assert ok, witness
