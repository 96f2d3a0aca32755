"""Integer-universe engines: a static B-tree skeleton does the heavy lifting.

With endpoints restricted to {0..U-1}, a B-tree over the universe is built
once and never rebalanced.  Each interval is bucketed at the highest node
whose key it contains; only per-bucket extreme intervals wear real colors.
Updates touch one bucket, so recolorings are constant per update:

* distinct:  each extreme holds its own color from a 4t-2 palette per
             level; at most 2 recolorings per update, any t.
* chain:     the touched node is rechained with 2 colors per level; at
             most 4t recolorings per update, but half the palette.
"""

import random

from cfcolor import FixedChainEngine, FixedDistinctEngine, Interval, is_conflict_free_fast

U = 2**10


def churn(engine, ops, seed):
    rng = random.Random(seed)
    live = []
    for i in range(ops):
        if live and rng.random() < 0.3:
            engine.delete(live.pop(rng.randrange(len(live))))
        else:
            a = rng.randrange(0, U - 1)
            engine.insert(Interval(i, a, rng.randrange(a + 1, U)))
            live.append(i)
    st = engine.state
    assert is_conflict_free_fast(st.intervals.values(), st.assignment).ok


for t in (2, 8):
    for label, engine in [
        ("distinct", FixedDistinctEngine(U, t)),
        ("chain", FixedChainEngine(U, t)),
    ]:
        churn(engine, 5_000, seed=t)
        st = engine.state
        print(
            f"t={t:2d} {label:<9} height={engine.height}  "
            f"colors={len(st.colors_seen(include_dummy=True)):>2} "
            f"(cap {engine.max_colors():>2})  "
            f"recolor_max={st.ledger.max_per_update()} "
            f"(cap {2 if label == 'distinct' else 4 * t})"
        )
    engine.audit()  # per-node framework invariants, independent of the oracle
print("node-level audits clean")
