"""Chain coloring a static family: three colors always suffice.

Every connected component gets a greedy chain: start at the leftmost
interval, repeatedly jump to the intersecting interval reaching furthest
right.  Chain members alternate two real colors, everyone else wears the
dummy.  A point inside the component is covered by one or two consecutive
chain members, and consecutive members differ, so some color is unique.
"""

import random

from cfcolor import Interval, is_conflict_free, static_color
from cfcolor.chain import build_chain, connected_components

rng = random.Random(3)
intervals = []
for i in range(18):
    a = rng.uniform(0.0, 30.0)
    intervals.append(Interval(i, round(a, 1), round(a + rng.uniform(1.0, 7.0), 1)))

components = connected_components(intervals)
print(f"{len(intervals)} intervals, {len(components)} components")
for comp in components:
    chain = build_chain(comp)
    ids = [iv.id for iv in chain]
    print(f"  component of {len(comp):2d}: chain {ids}")

state = static_color(intervals)
used = sorted(str(c) for c in state.colors_seen(include_dummy=True))
print(f"colors used: {used}")
assert len(used) <= 3

verdict = is_conflict_free(intervals, state.assignment)
print(f"conflict-free: {verdict.ok}")

# the dummy never rescues a point: covered points need a unique real color
dummies = sum(1 for c in state.assignment.values() if c.is_dummy())
print(f"{dummies} of {len(intervals)} intervals wear the dummy color")
