"""Chain construction and the static 3-color scheme.

A chain is a greedy cover of one connected component: start from the
interval with the leftmost left endpoint, then repeatedly pick, among the
intervals whose left endpoint lies inside the current one, the interval
reaching furthest right.  Alternating two colors along the chain and giving
everything else the dummy color yields a conflict-free coloring of the
component with at most three colors total.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Iterable, Sequence

from .core import DUMMY, Color, ColoringState, Interval, InvariantError

__all__ = ["connected_components", "build_chain", "color_chain", "static_color"]


def connected_components(intervals: Iterable[Interval]) -> list[list[Interval]]:
    """Partition into components of the closed-overlap graph, left to right.

    Abutting intervals (shared endpoint) belong to the same component.
    """
    ivs = sorted(intervals, key=lambda iv: (iv.left, iv.id))
    comps: list[list[Interval]] = []
    reach = None
    for iv in ivs:
        if reach is not None and iv.left <= reach:
            comps[-1].append(iv)
            reach = max(reach, iv.right)
        else:
            comps.append([iv])
            reach = iv.right
    return comps


def build_chain(component: Sequence[Interval]) -> list[Interval]:
    """Greedy chain of one connected component, in left-to-right order.

    Tie rules keep the chain containment-free even with shared endpoints:
    the start is the leftmost-left interval reaching furthest right, each
    step picks the furthest-right candidate with the smallest left, and
    remaining ties go to the smaller id.  The chain covers the whole
    component; consecutive members may overlap or abut, members two apart
    never intersect, and no chain member is contained in another interval.
    """
    comp = sorted(component, key=lambda iv: (iv.left, iv.id))
    if not comp:
        return []
    lefts = [iv.left for iv in comp]
    comp_right = max(iv.right for iv in comp)
    cur = min(comp, key=lambda iv: (iv.left, -iv.right, iv.id))
    chain = [cur]
    while cur.right < comp_right:
        lo = bisect_left(lefts, cur.left)
        hi = bisect_right(lefts, cur.right)
        best = None
        for cand in comp[lo:hi]:
            if cand is cur:
                continue
            if best is None or (-cand.right, cand.left, cand.id) < (
                -best.right,
                best.left,
                best.id,
            ):
                best = cand
        if best is None or best.right <= cur.right:
            # cannot happen on a single closed-overlap component
            raise InvariantError("chain construction stalled; input is not one component")
        chain.append(best)
        cur = best
    return chain


def color_chain(
    chain: Sequence[Interval],
    component: Iterable[Interval],
    palette: Sequence[Color],
) -> dict[int, Color]:
    """Alternate the palette along the chain; everything else goes dummy."""
    if len(palette) < 2:
        raise ValueError("chain coloring needs a palette of at least 2 colors")
    out = {iv.id: DUMMY for iv in component}
    for pos, iv in enumerate(chain):
        out[iv.id] = palette[pos % len(palette)]
    return out


def static_color(
    intervals: Iterable[Interval], palette: Sequence[Color] = (Color(0, 0), Color(0, 1))
) -> ColoringState:
    """Chain-color every component; at most 2 palette colors plus dummy."""
    ivs = list(intervals)
    state = ColoringState()
    for iv in ivs:
        state.add(iv)
    for comp in connected_components(ivs):
        assignment = color_chain(build_chain(comp), comp, palette)
        for iid, color in assignment.items():
            state.set_color(iid, color)
    return state
