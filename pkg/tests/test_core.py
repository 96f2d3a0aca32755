"""Core types, the sweep oracle, and trace round-tripping."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from cfcolor.core import (
    DUMMY,
    Color,
    ColoringState,
    Delete,
    EngineError,
    Insert,
    Interval,
    RecolorLedger,
    TraceError,
    elementary_regions,
    format_number,
    format_op,
    format_trace,
    is_conflict_free,
    is_conflict_free_fast,
    parse_trace,
    stabbing_set,
)
from helpers import all_stabbing_sets, naive_conflict_free, random_instance

RED = Color(0, 0)
BLUE = Color(0, 1)
GREEN = Color(0, 2)


class TestIntervalAndColor:
    def test_degenerate_interval_rejected(self):
        with pytest.raises(ValueError):
            Interval(1, 3, 3)
        with pytest.raises(ValueError):
            Interval(1, 5, 2)

    def test_closed_containment(self):
        iv = Interval(1, 0, 2)
        assert iv.contains(0) and iv.contains(2) and iv.contains(1.5)
        assert not iv.contains(-0.1) and not iv.contains(2.1)

    def test_closed_abutment_intersects(self):
        assert Interval(1, 0, 1).intersects(Interval(2, 1, 2))
        assert not Interval(1, 0, 1).intersects(Interval(2, 1.5, 2))

    def test_dummy_is_distinct_and_sorts_first(self):
        assert DUMMY.is_dummy()
        assert not Color(0, 0).is_dummy()
        assert sorted([Color(0, 0), DUMMY]) == [DUMMY, Color(0, 0)]


class TestElementaryRegions:
    def test_empty(self):
        assert elementary_regions([]) == []

    def test_single_interval_reaches_all_five_regions(self):
        # cells: (-inf,0), {0}, (0,1), {1}, (1,inf)
        pts = elementary_regions([Interval(1, 0, 1)])
        sets = {frozenset(stabbing_set([Interval(1, 0, 1)], q)) for q in pts}
        assert sets == {frozenset(), frozenset({1})}
        assert 0 in pts and 1 in pts
        assert any(0 < p < 1 for p in pts)
        assert any(p < 0 for p in pts) and any(p > 1 for p in pts)

    def test_two_overlapping_cover_all_stabbing_sets(self):
        ivs = [Interval(1, 0, 2), Interval(2, 1, 3)]
        reached = {frozenset(stabbing_set(ivs, q)) for q in elementary_regions(ivs)}
        assert reached == {
            frozenset(),
            frozenset({1}),
            frozenset({1, 2}),
            frozenset({2}),
        }

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 10))
    def test_reaches_every_stabbing_set(self, seed, n):
        rng = random.Random(seed)
        ivs, _ = random_instance(rng, n)
        reached = {frozenset(stabbing_set(ivs, q)) for q in elementary_regions(ivs)}
        assert reached == all_stabbing_sets(ivs)


class TestStabbingSet:
    def test_interior_point(self):
        ivs = [Interval(1, 0, 2), Interval(2, 1, 3)]
        assert stabbing_set(ivs, 1.5) == {1, 2}

    def test_shared_endpoint_counts_for_both(self):
        ivs = [Interval(1, 0, 2), Interval(2, 1, 3)]
        assert stabbing_set(ivs, 1.0) == {1, 2}

    def test_outside(self):
        ivs = [Interval(1, 0, 2), Interval(2, 1, 3)]
        assert stabbing_set(ivs, 5) == set()


class TestOracle:
    def test_empty_ok(self):
        assert is_conflict_free([], {})

    def test_same_color_overlap_violation_witness(self):
        ivs = [Interval(1, 0, 2), Interval(2, 1, 3)]
        verdict = is_conflict_free(ivs, {1: RED, 2: RED})
        assert not verdict.ok
        assert 1 <= verdict.witness <= 2

    def test_two_colors_ok(self):
        ivs = [Interval(1, 0, 2), Interval(2, 1, 3)]
        assert is_conflict_free(ivs, {1: RED, 2: BLUE})

    def test_dummy_never_counts_as_unique(self):
        ivs = [Interval(1, 0, 2)]
        assert not is_conflict_free(ivs, {1: DUMMY})
        ivs = [Interval(1, 0, 4), Interval(2, 1, 2), Interval(3, 1.5, 3)]
        # both red copies overlap at 1.75 with only dummy on top
        verdict = is_conflict_free(ivs, {1: DUMMY, 2: RED, 3: RED})
        assert not verdict.ok

    def test_dummy_covered_by_unique_palette_ok(self):
        ivs = [Interval(1, 0, 4), Interval(2, 1, 2)]
        assert is_conflict_free(ivs, {1: RED, 2: DUMMY})

    def test_alternating_chain_of_four_ok(self):
        ivs = [
            Interval(1, 0, 3),
            Interval(2, 2, 6),
            Interval(3, 5, 9),
            Interval(4, 8, 12),
        ]
        colors = {1: RED, 2: BLUE, 3: RED, 4: BLUE}
        assert is_conflict_free(ivs, colors)

    def test_missing_color_is_an_error(self):
        with pytest.raises(ValueError):
            is_conflict_free([Interval(1, 0, 1)], {})

    def test_point_region_only_violation_is_caught(self):
        # interiors are fine; the shared point 2 sees {red, red}
        ivs = [Interval(1, 0, 2), Interval(2, 2, 4)]
        verdict = is_conflict_free(ivs, {1: RED, 2: RED})
        assert not verdict.ok
        assert verdict.witness == 2

    @settings(max_examples=120, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 12))
    def test_agrees_with_naive_sampler(self, seed, n):
        rng = random.Random(seed)
        ivs, assignment = random_instance(rng, n)
        verdict = is_conflict_free(ivs, assignment)
        ok, _ = naive_conflict_free(ivs, assignment, rng)
        assert verdict.ok == ok

    @settings(max_examples=120, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 14))
    def test_fast_oracle_matches_sweep(self, seed, n):
        rng = random.Random(seed)
        ivs, assignment = random_instance(rng, n, colors=3)
        slow = is_conflict_free(ivs, assignment)
        fast = is_conflict_free_fast(ivs, assignment)
        assert slow.ok == fast.ok
        if not slow.ok:
            # both witnesses must be genuine violations
            for w in (slow.witness, fast.witness):
                stab = [iv for iv in ivs if iv.left <= w <= iv.right]
                counts = {}
                for iv in stab:
                    counts[assignment[iv.id]] = counts.get(assignment[iv.id], 0) + 1
                assert not any(
                    k == 1 and not c.is_dummy() for c, k in counts.items()
                )


class TestLedgerAndState:
    def test_initial_color_is_free(self):
        st_ = ColoringState()
        st_.add(Interval(1, 0, 1))
        st_.ledger.begin()
        assert st_.set_color(1, RED)
        assert st_.ledger.total() == 0

    def test_change_counts_and_noop_does_not(self):
        st_ = ColoringState()
        st_.add(Interval(1, 0, 1))
        st_.ledger.begin()
        st_.set_color(1, RED)
        assert not st_.set_color(1, RED)
        assert st_.set_color(1, BLUE)
        assert st_.ledger.total() == 1
        assert st_.ledger.max_per_update() == 1

    def test_rebuild_recolors_tracked_apart(self):
        st_ = ColoringState()
        st_.add(Interval(1, 0, 1))
        st_.ledger.begin()
        st_.set_color(1, RED)
        st_.set_color(1, BLUE, rebuild=True)
        assert st_.ledger.total(include_rebuild=False) == 0
        assert st_.ledger.total(include_rebuild=True) == 1

    def test_duplicate_add_and_unknown_remove(self):
        st_ = ColoringState()
        st_.add(Interval(1, 0, 1))
        with pytest.raises(EngineError):
            st_.add(Interval(1, 2, 3))
        with pytest.raises(EngineError):
            st_.remove(9)

    def test_ledger_counts_monotone(self):
        led = RecolorLedger()
        for _ in range(3):
            led.begin()
            led.note()
        assert [r.recolors for r in led.records] == [1, 1, 1]
        assert led.total() == 3 and led.amortized() == 1.0

    def test_colors_seen_accumulates(self):
        st_ = ColoringState()
        st_.add(Interval(1, 0, 1))
        st_.set_color(1, RED)
        st_.set_color(1, DUMMY)
        assert st_.colors_seen() == {RED, DUMMY}
        assert st_.colors_seen(include_dummy=False) == {RED}
        assert st_.colors_in_use() == {DUMMY}


class TestTraceFormat:
    def test_round_trip(self):
        text = "# header\nI 1 0 2\nI 2 1.5 3\nD 1\n"
        ops = parse_trace(text.splitlines())
        assert ops == [
            Insert(Interval(1, 0, 2)),
            Insert(Interval(2, 1.5, 3)),
            Delete(1),
        ]
        assert format_trace(ops) == "I 1 0 2\nI 2 1.500000 3\nD 1\n"

    def test_parse_reports_line_number(self):
        with pytest.raises(TraceError) as err:
            parse_trace(["I 1 0 2", "bogus line"])
        assert err.value.lineno == 2

    def test_degenerate_interval_rejected_with_lineno(self):
        with pytest.raises(TraceError) as err:
            parse_trace(["I 1 5 5"])
        assert err.value.lineno == 1

    def test_wrong_arity_rejected(self):
        with pytest.raises(TraceError):
            parse_trace(["I 1 0"])
        with pytest.raises(TraceError):
            parse_trace(["D"])

    def test_number_formatting(self):
        assert format_number(3) == "3"
        assert format_number(3.0) == "3"
        assert format_number(-0.0) == "0"
        assert format_number(0.25) == "0.250000"
        assert format_op(Insert(Interval(7, -1, 0.5))) == "I 7 -1 0.500000"
