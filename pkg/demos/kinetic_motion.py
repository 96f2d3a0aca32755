"""Intervals in linear motion: repairing the chain at endpoint crossings.

Endpoints move as a0 + va*t, so the combinatorial structure only changes
when two endpoints cross.  The maintainer keeps a two-apart chain (members
i and i+2 disjoint) colored from a 3-color palette plus dummy, repairs it
with at most 3 recolorings per crossing, and is audited against the full
conflict-freeness oracle after every event batch.

The second half runs the crossing-gadget construction: n parked copies of
a 4-interval gadget and n movers sweeping through them force about n^2
recolorings no matter how cleverly anyone recolors.
"""

import random

from cfcolor import KineticMaintainer, Trajectory, compute_events, lowerbound_scenario
from cfcolor.kinetic import random_scenario

A = Trajectory(0, 0.0, 0.0, 2.0, 0.0)          # parked [0, 2]
B = Trajectory(1, 5.0, -1.0, 7.0, -1.0)        # [5-t, 7-t], drives over A
events = compute_events([A, B], 0.0, 6.0)
print("drive-by events:", [(float(e.time), e.kind) for e in events])

km = KineticMaintainer([A, B], 0.0, 6.0)
for rec in km.run(audit="every"):
    changed = [(iid, str(c)) for iid, c in rec.recolored]
    print(f"  t={float(rec.event.time):.1f} {rec.event.kind:<12} recolored {changed}")
print(f"summary: {km.summary()}")

print("\nrandom swarm, 40 trajectories, audited after every event batch")
km = KineticMaintainer(random_scenario(random.Random(8), 40), 0.0, 10.0)
records = km.run(audit="every")
worst = max((len(r.recolored) for r in records), default=0)
print(f"  {len(records)} events, worst event recolored {worst} (cap 3), "
      f"palette {len(km.seen)} (cap 4)")

print("\ncrossing gadgets: n=6 forces at least n^2 = 36 recolorings")
trajs, horizon = lowerbound_scenario(6)
km = KineticMaintainer(trajs, 0.0, horizon)
km.run(audit="every", stride=50)
print(f"  {len(trajs)} trajectories, {km.cursor} events, "
      f"{km.ledger.total()} recolorings")
