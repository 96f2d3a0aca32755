"""Adversaries that force the color/recoloring trade-off.

The general adversary plays rounds of nested interval groups, always
descending into the group whose most frequent color leaves the most
"bricks" alive.  An engine holding c colors over n intervals must spend
roughly n^(1/(c+1))/(8c) recolorings on some update, or a round runs out
of distinct designated colors.

The local adversary only needs the weaker assumption that the engine
decides from the component's signature; its rounds shrink by a factor
(r+2) instead, giving the n^(1/(c+2)) variant.
"""

from cfcolor import (
    DynamicEngine,
    TrivialEngine,
    check_tradeoff,
    run_general_adversary,
    run_local_adversary,
)

print("general adversary vs dynamic:t=2")
print(f"{'n':>6} {'colors':>7} {'max_r':>6} {'rounds':>7} {'bound ok':>9}")
for n in (256, 1024, 4096):
    rep = run_general_adversary(lambda: DynamicEngine(2), n)
    ok = check_tradeoff(n, rep.colors_used, rep.max_recolor, "general")
    print(f"{n:>6} {rep.colors_used:>7} {rep.max_recolor:>6} "
          f"{rep.rounds_played:>7} {str(ok):>9}")
    assert rep.cf_ok

# a first-fit engine never recolors, so the adversary simply marches it
# up one designated color per round
rep = run_local_adversary(TrivialEngine, 512)
sizes = [len(members) for members in rep.rounds]
print(f"\nlocal adversary vs trivial first-fit: {rep.colors_used} colors, "
      f"round sizes {sizes}")
print(f"stop reason: {rep.stop_reason}")
