"""The command-line surface, end to end.

gen writes a trace, run replays it through an engine while logging every
assignment, verify replays the log against the oracle with no engine in
the loop, and bench sweeps a method matrix into CSV.  Everything is
seeded, so each step is byte-reproducible.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

PY = [sys.executable, "-m", "cfcolor.cli"]


def run(*args, expect=0):
    proc = subprocess.run([*PY, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise SystemExit(f"{args} -> {proc.returncode}: {proc.stderr}")
    return proc.stdout


with tempfile.TemporaryDirectory() as tmp:
    trace = Path(tmp) / "ops.trace"
    log = Path(tmp) / "ops.log"

    run("gen", "random", "--n", "40", "--seed", "19", "--out", str(trace))
    print(f"trace head:\n{''.join(trace.read_text().splitlines(True)[:4])}...")

    run("run", "--method", "dynamic:t=2", "--trace", str(trace),
        "--audit", "every", "--out", str(log))
    tail = log.read_text().splitlines()
    print(f"log tail: {tail[-2]}")
    print(f"          {tail[-1]}")

    run("verify", "--log", str(log), "--trace", str(trace))
    print("verify: replay matches the trace and stays conflict-free")

    # flipping one recorded color gets caught: as a conflict (exit 1) or,
    # if the coloring happens to survive, as a summary mismatch (exit 2)
    bad = Path(tmp) / "bad.log"
    lines = log.read_text().splitlines()
    for i, line in enumerate(lines):
        if line.startswith("A ") and not line.endswith("dummy"):
            parts = line.split()
            parts[-1] = str((int(parts[-1]) + 1) % 2)
            lines[i] = " ".join(parts)
            break
    bad.write_text("\n".join(lines) + "\n")
    proc = subprocess.run([*PY, "verify", "--log", str(bad)],
                          capture_output=True, text=True)
    print(f"tampered log: exit {proc.returncode} ({proc.stderr.strip()})")

    print("\nbench matrix:")
    print(run("bench", "--method", "dynamic:t=2", "--method", "eps:eps=0.5",
              "--method", "grid:L=8", "--n", "200,800", "--seed", "6"), end="")
