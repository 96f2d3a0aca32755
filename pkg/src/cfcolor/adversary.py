"""Adversarial insertion drivers that force colors or recolorings.

Two constructions, both proceeding in rounds of pairwise disjoint
intervals laid over the previous round:

* The general driver targets any insertion-only engine with recoloring
  budget r per update.  Each round keeps only the intervals whose brick
  (the interval plus the empty space to its right) is still alive, packs
  them into groups of 4r, and spans the left half of each group with a
  new interval, stopping just short of the (2r+1)-th member so the new
  brick owns living sub-bricks on both sides.  The designated color of a
  round is chosen among colors not designated before, maximizing living
  bricks, so every round certifies one fresh color.

* The local driver targets engines whose response is a function of the
  insertion signature (component structure plus colors).  It groups the
  full previous round in blocks of r+2 and needs no color bookkeeping:
  signature-determined engines are forced to color each round uniformly
  with a brand new color.

Both drivers check the engine's coloring for conflict-freeness after
every insertion and abort on the first violation.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import count

from .chain import connected_components
from .core import (
    Color,
    ColoringState,
    Interval,
    InvariantError,
    is_conflict_free,
    is_conflict_free_fast,
)

__all__ = [
    "AdversaryReport",
    "LocalityAudit",
    "Signature",
    "check_tradeoff",
    "living_rounds",
    "run_general_adversary",
    "run_local_adversary",
    "signature_of",
]


# --------------------------------------------------------------- signatures


@dataclass(frozen=True)
class Signature:
    """Component snapshot seen by a newly inserted interval.

    labels: left-endpoint ranks (1-based), listed by increasing right
    endpoint.  colors: the component's colors listed by increasing left
    endpoint, None marking the uncolored newcomer.
    """

    labels: tuple[int, ...]
    colors: tuple[Color | None, ...]


def signature_of(
    live: list[Interval], coloring: dict[int, Color], new: Interval
) -> Signature:
    pool = [iv for iv in live if iv.id != new.id] + [new]
    component = None
    for comp in connected_components(pool):
        if any(iv.id == new.id for iv in comp):
            component = comp
            break
    assert component is not None
    by_left = sorted(component, key=lambda iv: (iv.left, iv.id))
    rank = {iv.id: k + 1 for k, iv in enumerate(by_left)}
    by_right = sorted(component, key=lambda iv: (iv.right, iv.id))
    labels = tuple(rank[iv.id] for iv in by_right)
    colors = tuple(
        coloring.get(iv.id) if iv.id != new.id else None for iv in by_left
    )
    return Signature(labels, colors)


@dataclass
class LocalityAudit:
    """Evidence that an engine is not local: recolorings outside the
    inserted interval's component, or two different responses to one
    signature."""

    outside_recolors: list[tuple[int, int]] = field(default_factory=list)
    collisions: list[Signature] = field(default_factory=list)
    _responses: dict[Signature, tuple] = field(default_factory=dict)

    def record(self, sig: Signature, response: tuple) -> None:
        prior = self._responses.setdefault(sig, response)
        if prior != response:
            self.collisions.append(sig)

    def clean(self) -> bool:
        return not self.outside_recolors and not self.collisions


# ------------------------------------------------------------------ bricks


def _first_within(members: list[Interval], lo: float, hi: float, open_ends: bool):
    """Smallest-left member of a disjoint sorted list inside [lo, hi] or
    (lo, hi); disjointness makes the leftmost candidate the only one to try."""
    lefts = [iv.left for iv in members]
    i = bisect_right(lefts, lo) if open_ends else bisect_left(lefts, lo)
    if i == len(members):
        return None
    iv = members[i]
    if open_ends:
        if iv.left > lo and iv.right < hi:
            return iv
    elif iv.right <= hi:
        return iv
    return None


def living_rounds(
    rounds: list[list[Interval]],
    designated: list[Color],
    color_of,
) -> list[list[Interval]]:
    """Living members of every round under the current coloring.

    A round-i interval is living when it carries the round's designated
    color and, for i > 1, both the interval and the open gap to the next
    round-i interval contain a living round-(i-1) interval.  Scoring a
    candidate designation for the last round is done by appending it to
    the designated list before calling.
    """
    prev: list[Interval] = []
    result = []
    for m, (members, c_m) in enumerate(zip(rounds, designated)):
        cur = []
        for j, iv in enumerate(members):
            if color_of(iv.id) != c_m:
                continue
            if m > 0:
                gap_end = members[j + 1].left if j + 1 < len(members) else math.inf
                if _first_within(prev, iv.left, iv.right, open_ends=False) is None:
                    continue
                if _first_within(prev, iv.right, gap_end, open_ends=True) is None:
                    continue
            cur.append(iv)
        result.append(cur)
        prev = cur
    return result


# ------------------------------------------------------------------ driver


@dataclass
class AdversaryReport:
    kind: str
    n: int
    budget_r: int
    rounds: list[list[Interval]]
    designated: list[Color]
    star_sizes: list[int]
    total_inserted: int
    max_recolor: int
    colors_used: int
    cf_ok: bool
    cf_witness: float | None
    stop_reason: str
    locality: LocalityAudit | None = None
    adapt_iterations: int = 1

    @property
    def rounds_played(self) -> int:
        return len(self.rounds)


class _Driver:
    def __init__(self, engine, audit: str, track_locality: bool):
        self.engine = engine
        self.audit = audit
        self.locality = LocalityAudit() if track_locality else None
        self.ids = count()
        self.total = 0
        self.cf_ok = True
        self.cf_witness: float | None = None
        self._events: list[tuple[int, Color, bool]] = []
        self._prev_hook = engine.state.on_assign
        engine.state.on_assign = self._hook

    def _hook(self, iid: int, color: Color, is_recolor: bool) -> None:
        if self._prev_hook is not None:
            self._prev_hook(iid, color, is_recolor)
        self._events.append((iid, color, is_recolor))

    def close(self) -> None:
        self.engine.state.on_assign = self._prev_hook

    def insert(self, left: float, right: float) -> Interval | None:
        """Insert, audit, and log locality evidence.  None means the
        engine's coloring went bad and the run must stop."""
        state: ColoringState = self.engine.state
        iv = Interval(next(self.ids), left, right)
        sig = None
        if self.locality is not None:
            sig = signature_of(
                list(state.intervals.values()), state.assignment, iv
            )
        self._events.clear()
        self.engine.insert(iv)
        self.total += 1
        if self.locality is not None:
            self._note_locality(iv, sig)
        if self.audit == "every":
            verdict = is_conflict_free_fast(
                state.intervals.values(), state.assignment
            )
            if not verdict.ok:
                self.cf_ok = False
                self.cf_witness = verdict.witness
                return None
        return iv

    def _note_locality(self, iv: Interval, sig: Signature) -> None:
        # canonicalize the response by component rank so identical
        # signatures from different rounds compare equal
        component_rank: dict[int, int] = {}
        state = self.engine.state
        for c in connected_components(list(state.intervals.values())):
            if any(x.id == iv.id for x in c):
                for k, x in enumerate(sorted(c, key=lambda y: (y.left, y.id))):
                    component_rank[x.id] = k + 1
                break
        recolors = []
        final_color = state.assignment.get(iv.id)
        comp_ids = set(component_rank)
        for iid, color, is_recolor in self._events:
            if is_recolor:
                if iid not in comp_ids:
                    self.locality.outside_recolors.append((iv.id, iid))
                recolors.append((component_rank.get(iid, -1), color))
        response = (final_color, tuple(sorted(recolors)))
        self.locality.record(sig, response)

    def round_audit(self) -> bool:
        state = self.engine.state
        verdict = is_conflict_free(state.intervals.values(), state.assignment)
        if not verdict.ok:
            self.cf_ok = False
            self.cf_witness = verdict.witness
            return False
        return True


def _report(driver: _Driver, kind, n, r, rounds, designated, stars, reason):
    state = driver.engine.state
    return AdversaryReport(
        kind=kind,
        n=n,
        budget_r=r,
        rounds=rounds,
        designated=designated,
        star_sizes=[len(s) for s in stars],
        total_inserted=driver.total,
        max_recolor=state.ledger.max_per_update(),
        colors_used=len(state.colors_seen()),
        cf_ok=driver.cf_ok,
        cf_witness=driver.cf_witness,
        stop_reason=reason,
        locality=driver.locality,
    )


def _general_once(engine, n: int, r: int, audit: str) -> AdversaryReport:
    if r < 1:
        raise InvariantError("general driver needs a recoloring budget >= 1")
    driver = _Driver(engine, audit, track_locality=False)
    state: ColoringState = engine.state
    rounds: list[list[Interval]] = []
    designated: list[Color] = []
    stars: list[list[Interval]] = []
    reason = "exhausted"
    try:
        first = []
        for k in range(n // 2):
            iv = driver.insert(2 * k, 2 * k + 1)
            if iv is None:
                return _report(
                    driver, "general", n, r, rounds, designated, stars, "cf-violation"
                )
            first.append(iv)
        if not first:
            return _report(driver, "general", n, r, rounds, designated, stars, "too-small")
        rounds.append(first)
        while True:
            if not driver.round_audit():
                reason = "cf-violation"
                break
            members = rounds[-1]
            if not designated:
                tally: dict[Color, int] = {}
                for iv in members:
                    col = state.assignment[iv.id]
                    tally[col] = tally.get(col, 0) + 1
                designated.append(
                    min(tally.items(), key=lambda kv: (-kv[1], kv[0]))[0]
                )
            else:
                candidates = {
                    state.assignment[iv.id] for iv in members
                } - set(designated)
                if not candidates:
                    reason = "no-eligible-color"
                    break
                scored = []
                for cand in sorted(candidates):
                    living = living_rounds(rounds, designated + [cand], state.assignment.get)
                    scored.append((len(living[-1]), cand))
                best_count = max(s for s, _ in scored)
                chosen = min(c for s, c in scored if s == best_count)
                designated.append(chosen)
            star = living_rounds(rounds, designated, state.assignment.get)[-1]
            stars.append(star)
            if len(star) < 4 * r:
                break
            groups = [
                star[g : g + 4 * r]
                for g in range(0, len(star) - 4 * r + 1, 4 * r)
            ]
            eps = min(g[2 * r].left - g[2 * r - 1].right for g in groups) / 4
            if eps <= 0:
                raise InvariantError("group members out of order")
            nxt = []
            for g in groups:
                iv = driver.insert(g[0].left, g[2 * r].left - eps)
                if iv is None:
                    return _report(
                        driver, "general", n, r, rounds, designated, stars,
                        "cf-violation",
                    )
                nxt.append(iv)
            rounds.append(nxt)
    finally:
        driver.close()
    return _report(driver, "general", n, r, rounds, designated, stars, reason)


def run_general_adversary(
    engine_factory,
    n: int,
    budget_r: int | None = None,
    audit: str = "every",
    max_adapt: int = 3,
) -> AdversaryReport:
    """Adaptive wrapper: rerun with the observed recoloring maximum until
    the budget matches the engine's behavior (at most max_adapt runs)."""
    r = budget_r if budget_r is not None else 1
    report = None
    for attempt in range(1, max_adapt + 1):
        report = _general_once(engine_factory(), n, r, audit)
        report.adapt_iterations = attempt
        if budget_r is not None or report.max_recolor <= r:
            break
        r = max(1, report.max_recolor)
    return report


def _local_once(engine, n: int, r: int, audit: str, signatures: bool) -> AdversaryReport:
    if r < 0:
        raise InvariantError("negative recoloring budget")
    driver = _Driver(engine, audit, track_locality=signatures)
    rounds: list[list[Interval]] = []
    reason = "exhausted"
    try:
        first = []
        for k in range(n // 2):
            iv = driver.insert(2 * k, 2 * k + 1)
            if iv is None:
                return _report(
                    driver, "local", n, r, rounds, [], [], "cf-violation"
                )
            first.append(iv)
        if not first:
            return _report(driver, "local", n, r, rounds, [], [], "too-small")
        rounds.append(first)
        size = r + 2
        while True:
            if not driver.round_audit():
                reason = "cf-violation"
                break
            members = rounds[-1]
            if len(members) == r + 1:
                iv = driver.insert(members[0].left, 2 * n - 1)
                if iv is None:
                    reason = "cf-violation"
                    break
                rounds.append([iv])
                reason = "final-span"
                break
            if len(members) < size:
                break
            groups = [
                members[g : g + size]
                for g in range(0, len(members) - size + 1, size)
            ]
            eps = min(g[r + 1].left - g[r].right for g in groups) / 4
            if eps <= 0:
                raise InvariantError("group members out of order")
            nxt = []
            for g in groups:
                iv = driver.insert(g[0].left, g[r + 1].left - eps)
                if iv is None:
                    return _report(
                        driver, "local", n, r, rounds, [], [], "cf-violation"
                    )
                nxt.append(iv)
            rounds.append(nxt)
    finally:
        driver.close()
    return _report(driver, "local", n, r, rounds, [], [], reason)


def run_local_adversary(
    engine_factory,
    n: int,
    budget_r: int | None = None,
    audit: str = "every",
    max_adapt: int = 3,
    signatures: bool = True,
) -> AdversaryReport:
    r = budget_r if budget_r is not None else 0
    report = None
    for attempt in range(1, max_adapt + 1):
        report = _local_once(engine_factory(), n, r, audit, signatures)
        report.adapt_iterations = attempt
        if budget_r is not None or report.max_recolor <= r:
            break
        r = max(0, report.max_recolor)
    return report


# ---------------------------------------------------------------- tradeoff


def check_tradeoff(n: int, c: int, r: int, kind: str = "general") -> bool | None:
    """Is the observed (colors, max recolorings) pair consistent with the
    provable color/recoloring tradeoff?  None when r = 0 makes the bound
    inapplicable."""
    if r <= 0:
        return None
    if kind == "general":
        return r > n ** (1.0 / (c + 1)) / (8 * c)
    if kind == "local":
        return r >= n ** (1.0 / (c + 2)) - 2
    raise ValueError(f"unknown tradeoff kind {kind!r}")
