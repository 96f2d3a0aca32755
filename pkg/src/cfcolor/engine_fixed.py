"""Dynamic engines over a fixed integer universe.

The B-tree skeleton over {0, ..., U-1} is built once and never changes, so
updates only move intervals in and out of buckets.  Both engines follow
the same framework: per tree level a disjoint palette, per node only the
per-slot extreme intervals get real colors, everything else is dummy.
Local conflict-freeness at every node then yields global conflict-freeness.

Two palette disciplines are provided:

* distinct colors: each extreme holds a color of its level palette (size
  4t-2) not used by any other extreme at the node; at most 2 recolorings
  per update.
* chain per node: the node's extremes are chain-colored with 2 colors per
  level; an update rechains one node, changing at most 4t colors.
"""

from __future__ import annotations

from .btree import (
    BNode,
    build_tree,
    iter_nodes,
    locate,
    node_extremes,
    node_pool,
    validate_structure,
)
from .chain import build_chain, color_chain, connected_components
from .core import DUMMY, Color, ColoringState, EngineError, Interval, InvariantError, is_conflict_free

__all__ = ["FixedDistinctEngine", "FixedChainEngine"]


class _FixedBase:
    def __init__(self, universe: int, t: int = 2) -> None:
        if universe < 1:
            raise EngineError("universe size must be at least 1")
        if t < 2:
            raise EngineError("minimum degree t must be at least 2")
        self.universe = universe
        self.t = t
        self.root, self.height = build_tree(range(universe), t)
        self.state = ColoringState()
        self._anchor: dict[int, tuple[BNode, int]] = {}
        # cached (lo, hi) per bucket; safe because the skeleton never changes
        self._ext: dict[tuple[int, int], tuple[Interval, Interval]] = {}

    def _extremes(self, v: BNode, slot: int) -> tuple[Interval, ...]:
        """slot_extremes with an O(1) cache; identical tie-breaking."""
        key = (id(v), slot)
        cached = self._ext.get(key)
        if cached is None:
            bucket = v.buckets[slot]
            if not bucket:
                return ()
            vals = bucket.values()
            lo = min(vals, key=lambda iv: (iv.left, iv.id))
            hi = max(vals, key=lambda iv: (iv.right, -iv.id))
            cached = (lo, hi)
            self._ext[key] = cached
        lo, hi = cached
        return (lo,) if lo.id == hi.id else (lo, hi)

    def _bucket_add(self, v: BNode, slot: int, interval: Interval) -> None:
        v.buckets[slot][interval.id] = interval
        key = (id(v), slot)
        cached = self._ext.get(key)
        if cached is None:
            if len(v.buckets[slot]) == 1:
                self._ext[key] = (interval, interval)
            return
        lo, hi = cached
        if (interval.left, interval.id) < (lo.left, lo.id):
            lo = interval
        if (interval.right, -interval.id) > (hi.right, -hi.id):
            hi = interval
        self._ext[key] = (lo, hi)

    def _bucket_del(self, v: BNode, slot: int, iid: int) -> None:
        del v.buckets[slot][iid]
        key = (id(v), slot)
        cached = self._ext.get(key)
        if cached is not None and iid in (cached[0].id, cached[1].id):
            del self._ext[key]

    def _node_extremes(self, v: BNode) -> list[Interval]:
        out: list[Interval] = []
        for slot in range(len(v.keys)):
            out.extend(self._extremes(v, slot))
        return out

    def _check(self, interval: Interval) -> None:
        for x in (interval.left, interval.right):
            if x != int(x):
                raise EngineError(f"endpoint {x} is not an integer universe point")
            if not 0 <= x <= self.universe - 1:
                raise EngineError(f"endpoint {x} outside universe [0, {self.universe - 1}]")

    def _locate(self, interval: Interval) -> tuple[BNode, int]:
        return locate(self.root, interval)

    def max_colors(self) -> int:
        """Dummy plus one palette per level."""
        return 1 + self.palette_size() * (self.height + 1)

    def palette_size(self) -> int:
        raise NotImplementedError

    def audit(self) -> None:
        """Check the framework invariants on every node.

        Per node: only level-palette colors appear, non-extremes are dummy,
        and the node's own intervals are locally conflict-free.
        """
        validate_structure(self.root, self.t)
        seen = set()
        for v in iter_nodes(self.root):
            ext_ids = {iv.id for iv in node_extremes(v)}
            pool = node_pool(v)
            colors = {}
            for iv in pool:
                seen.add(iv.id)
                c = self.state.color_of(iv.id)
                colors[iv.id] = c
                if iv.id not in ext_ids and not c.is_dummy():
                    raise InvariantError(f"non-extreme {iv.id} wears {c}")
                if not c.is_dummy() and (c.level != v.level or not 0 <= c.index < self.palette_size()):
                    raise InvariantError(f"interval {iv.id} wears {c}, not a level-{v.level} color")
            verdict = is_conflict_free(pool, colors)
            if not verdict:
                raise InvariantError(f"node not locally conflict-free at {verdict.witness}")
            self._audit_node(v, ext_ids)
        if seen != set(self.state.intervals):
            raise InvariantError("bucketed intervals out of sync with live set")

    def _audit_node(self, v: BNode, ext_ids: set[int]) -> None:
        pass


class FixedDistinctEngine(_FixedBase):
    """Extremes get pairwise-distinct colors from a 4t-2 palette per level."""

    def palette_size(self) -> int:
        return 4 * self.t - 2

    def _audit_node(self, v: BNode, ext_ids: set[int]) -> None:
        used = []
        for iid in ext_ids:
            c = self.state.color_of(iid)
            if c.is_dummy():
                raise InvariantError(f"extreme {iid} wears the dummy color")
            used.append(c)
        if len(set(used)) != len(used):
            raise InvariantError("extremes at one node share a color")

    def _free_color(self, v: BNode) -> Color:
        used = set()
        for iv in self._node_extremes(v):
            c = self.state.color_of(iv.id)
            if c is not None:
                used.add(c)
        for j in range(self.palette_size()):
            cand = Color(v.level, j)
            if cand not in used:
                return cand
        raise InvariantError("no free color among extremes; node overfull")

    def insert(self, interval: Interval) -> None:
        self._check(interval)
        self.state.ledger.begin()
        self.state.add(interval)
        v, slot = self._locate(interval)
        old = self._extremes(v, slot)
        self._bucket_add(v, slot, interval)
        self._anchor[interval.id] = (v, slot)
        new = self._extremes(v, slot)
        new_ids = {iv.id for iv in new}
        for demoted in old:
            if demoted.id not in new_ids:
                self.state.set_color(demoted.id, DUMMY)
        if interval.id in new_ids:
            self.state.set_color(interval.id, self._free_color(v))
        else:
            self.state.set_color(interval.id, DUMMY)

    def delete(self, iid: int) -> None:
        if iid not in self._anchor:
            raise EngineError(f"unknown interval id {iid}")
        self.state.ledger.begin()
        v, slot = self._anchor.pop(iid)
        old_ids = {iv.id for iv in self._extremes(v, slot)}
        self._bucket_del(v, slot, iid)
        self.state.remove(iid)
        for promoted in self._extremes(v, slot):
            if promoted.id not in old_ids:
                self.state.set_color(promoted.id, self._free_color(v))


class FixedChainEngine(_FixedBase):
    """Each update rechains the extremes of the touched node with 2 colors."""

    def __init__(self, universe: int, t: int = 2) -> None:
        super().__init__(universe, t)
        # ids wearing a non-dummy chain color, per node
        self._chained: dict[int, set[int]] = {}

    def palette_size(self) -> int:
        return 2

    def _rechain(self, v: BNode) -> None:
        palette = [Color(v.level, 0), Color(v.level, 1)]
        target: dict[int, Color] = {}
        for comp in connected_components(self._node_extremes(v)):
            target.update(color_chain(build_chain(comp), comp, palette))
        # only previously chained intervals can need a demotion to dummy
        prev = self._chained.get(id(v), set())
        for iid in sorted(prev - target.keys()):
            if iid in self.state.intervals:
                self.state.set_color(iid, DUMMY)
        for iid, color in sorted(target.items()):
            self.state.set_color(iid, color)
        self._chained[id(v)] = {
            iid for iid, color in target.items() if not color.is_dummy()
        }

    def insert(self, interval: Interval) -> None:
        self._check(interval)
        self.state.ledger.begin()
        self.state.add(interval)
        v, slot = self._locate(interval)
        self._bucket_add(v, slot, interval)
        self._anchor[interval.id] = (v, slot)
        if interval.id not in {iv.id for iv in self._extremes(v, slot)}:
            self.state.set_color(interval.id, DUMMY)
        self._rechain(v)

    def delete(self, iid: int) -> None:
        if iid not in self._anchor:
            raise EngineError(f"unknown interval id {iid}")
        self.state.ledger.begin()
        v, slot = self._anchor.pop(iid)
        self._bucket_del(v, slot, iid)
        self.state.remove(iid)
        self._chained.get(id(v), set()).discard(iid)
        self._rechain(v)
