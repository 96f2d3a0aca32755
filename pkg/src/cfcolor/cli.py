"""Command-line surface: run, gen, bench, verify, adversary, kinetic.

Log vocabulary (one record per line, `#` comments allowed):
    I <id> <left> <right>     insert echoed from the trace
    D <id>                    delete echoed from the trace
    A <id> <level> <index>    initial color of a newly inserted interval
    A <id> dummy
    R <id> <level> <index>    recoloring of an already colored interval
    R <id> dummy
    E <t> <kind> <id1> <id2>  kinetic endpoint crossing
    SUMMARY key=value ...     footer totals

Exit codes: 0 ok, 1 conflict-freeness violation, 2 input error,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
import time

from .adversary import check_tradeoff, run_general_adversary, run_local_adversary
from .core import (
    DUMMY,
    Color,
    ColoringState,
    Delete,
    EngineError,
    Insert,
    Interval,
    InvariantError,
    TraceError,
    format_number,
    is_conflict_free_fast,
    parse_number,
    parse_trace,
)
from .kinetic import KineticMaintainer, format_scenario, lowerbound_scenario, parse_scenario
from .methods import build_engine, method_label, parse_method_spec, validate_method
from .online import nested_lowerbound_instance

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _color_token(color: Color) -> str:
    if color.is_dummy():
        return "dummy"
    return f"{color.level} {color.index}"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


class _Out:
    """Output sink; never closes stdout."""

    def __init__(self, path: str):
        self.path = path
        self.fh = None

    def __enter__(self):
        self.fh = sys.stdout if self.path == "-" else open(self.path, "w", encoding="utf-8")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not sys.stdout:
            self.fh.close()
        return False


def _interval_line(iv: Interval) -> str:
    return f"I {iv.id} {format_number(iv.left)} {format_number(iv.right)}"


# ------------------------------------------------------------------- run


def _method_from_args(args) -> tuple[str, dict]:
    flags = {}
    for key in ("t", "eps", "universe", "L", "inner"):
        value = getattr(args, key if key != "L" else "block", None)
        if value is not None:
            flags[key] = value
    if ":" in args.method:
        name, params = parse_method_spec(args.method)
        params.update(flags)
        return validate_method(name, params)
    return validate_method(args.method, flags)


def cmd_run(args) -> int:
    engine = build_engine(_method_from_args(args))
    ops = parse_trace(_read_text(args.trace).splitlines())
    with _Out(args.out) as out:
        def hook(iid: int, color: Color, is_recolor: bool) -> None:
            tag = "R" if is_recolor else "A"
            out.write(f"{tag} {iid} {_color_token(color)}\n")

        engine.state.on_assign = hook
        state = engine.state
        for op in ops:
            if isinstance(op, Insert):
                out.write(_interval_line(op.interval) + "\n")
                engine.insert(op.interval)
            else:
                out.write(f"D {op.id}\n")
                engine.delete(op.id)
            if args.audit == "every":
                verdict = is_conflict_free_fast(
                    state.intervals.values(), state.assignment
                )
                if not verdict.ok:
                    print(f"conflict at {verdict.witness}", file=sys.stderr)
                    return EXIT_VIOLATION
        if args.audit == "final" and state.intervals:
            verdict = is_conflict_free_fast(state.intervals.values(), state.assignment)
            if not verdict.ok:
                print(f"conflict at {verdict.witness}", file=sys.stderr)
                return EXIT_VIOLATION
        colors = len(state.colors_seen(include_dummy=True))
        out.write(
            "SUMMARY colors={} n={} recolor_total={} recolor_max={}\n".format(
                colors,
                len(state.intervals),
                state.ledger.total(),
                state.ledger.max_per_update(),
            )
        )
    return EXIT_OK


# ------------------------------------------------------------------- gen


def _gen_random_ops(rng: random.Random, count: int, p_delete: float, span: float,
                    min_len: float, max_len: float):
    live: list[int] = []
    nid = 0
    for _ in range(count):
        if live and rng.random() < p_delete:
            yield f"D {live.pop(rng.randrange(len(live)))}"
        else:
            a = rng.uniform(0.0, span)
            length = rng.uniform(min_len, max_len)
            yield f"I {nid} {format_number(round(a, 6))} {format_number(round(a + length, 6))}"
            live.append(nid)
            nid += 1


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    with _Out(args.out) as out:
        if args.kind == "random":
            for line in _gen_random_ops(
                rng, args.n, args.p_delete, 4.0 * args.n, 0.5, 8.0
            ):
                out.write(line + "\n")
        elif args.kind == "nested-lb":
            for iv in nested_lowerbound_instance(args.n):
                out.write(_interval_line(iv) + "\n")
        elif args.kind == "bounded-length":
            if args.block is None:
                raise EngineError("bounded-length needs --L")
            if args.block <= 1:
                raise EngineError("--L must exceed 1")
            for line in _gen_random_ops(
                rng, args.n, args.p_delete, 4.0 * args.n, 1.0, args.block - 1e-6
            ):
                out.write(line + "\n")
        else:  # kinetic-lb
            trajs, horizon = lowerbound_scenario(args.n)
            out.write(f"# horizon {format_number(round(horizon, 6))}\n")
            out.write(format_scenario(trajs))
    return EXIT_OK


# ------------------------------------------------------------------ bench


def _bench_trace(name: str, params: dict, n: int, seed: int):
    """Per-row deterministic trace respecting the method's input domain."""
    rng = random.Random((seed * 1000003 + n) ^ 0x5F3759DF)
    if name in ("fixed-distinct", "fixed-chain"):
        u = int(params["universe"])
        live: list[int] = []
        nid = 0
        ops = []
        for _ in range(n):
            if live and rng.random() < 0.3:
                ops.append(Delete(live.pop(rng.randrange(len(live)))))
            else:
                a = rng.randrange(0, max(1, u - 1))
                b = rng.randrange(a + 1, u)
                ops.append(Insert(Interval(nid, a, b)))
                live.append(nid)
                nid += 1
        return ops
    if name == "grid":
        lines = _gen_random_ops(rng, n, 0.3, 4.0 * n, 1.0, float(params["L"]) - 1e-6)
        return parse_trace(lines)
    if name == "greedy-nested":
        return [Insert(iv) for iv in nested_lowerbound_instance(n)]
    lines = _gen_random_ops(rng, n, 0.3, 4.0 * n, 0.5, 8.0)
    return parse_trace(lines)


def cmd_bench(args) -> int:
    specs = [parse_method_spec(s) for s in args.method]
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok]
    except ValueError:
        raise EngineError(f"bad --n list {args.sizes!r}") from None
    if not sizes:
        raise EngineError("--n needs at least one size")
    with _Out(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            [
                "method",
                "n",
                "params",
                "colors",
                "recolor_total",
                "recolor_max",
                "recolor_amortized",
                "wall_time",
            ]
        )
        for name, params in specs:
            label = method_label(name, params)
            _, param_part = (label.split(":", 1) + [""])[:2]
            for n in sizes:
                ops = _bench_trace(name, params, n, args.seed)
                engine = build_engine((name, params))
                started = time.perf_counter()
                try:
                    for op in ops:
                        if isinstance(op, Insert):
                            engine.insert(op.interval)
                        else:
                            engine.delete(op.id)
                except (EngineError, InvariantError) as exc:
                    print(f"bench: {label} n={n}: {exc}", file=sys.stderr)
                    continue
                elapsed = time.perf_counter() - started
                state = engine.state
                total = state.ledger.total()
                writer.writerow(
                    [
                        name,
                        n,
                        param_part,
                        len(state.colors_seen(include_dummy=True)),
                        total,
                        state.ledger.max_per_update(),
                        format_number(round(total / n, 6)),
                        f"{elapsed:.6f}" if args.timings else "",
                    ]
                )
    return EXIT_OK


# ----------------------------------------------------------------- verify


class _LogMismatch(Exception):
    pass


def cmd_verify(args) -> int:
    log_lines = _read_text(args.log).splitlines()
    trace_ops = (
        parse_trace(_read_text(args.trace).splitlines())
        if args.trace is not None
        else None
    )
    state = ColoringState()
    seen: set[Color] = set()
    op_open = False
    last_insert: int | None = None
    op_index = 0
    recolor_total = 0
    recolor_cur = 0
    recolor_max = 0

    def fail(lineno: int, message: str) -> _LogMismatch:
        return _LogMismatch(f"line {lineno}: {message}")

    def close_op(lineno: int):
        nonlocal op_open, recolor_cur, recolor_max
        if not op_open:
            return None
        uncolored = [i for i in state.intervals if i not in state.assignment]
        if uncolored:
            raise fail(lineno, f"interval {uncolored[0]} was never assigned a color")
        verdict = is_conflict_free_fast(state.intervals.values(), state.assignment)
        recolor_max = max(recolor_max, recolor_cur)
        recolor_cur = 0
        op_open = False
        return verdict if not verdict.ok else None

    def parse_color(parts, lineno) -> Color:
        if len(parts) == 3 and parts[2] == "dummy":
            return DUMMY
        if len(parts) != 4:
            raise fail(lineno, "expected '<tag> <id> <level> <index>' or dummy")
        try:
            return Color(int(parts[2]), int(parts[3]))
        except ValueError:
            raise fail(lineno, "color fields must be integers") from None

    try:
        for lineno, raw in enumerate(log_lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            tag = parts[0]
            if tag in ("I", "D"):
                bad = close_op(lineno)
                if bad is not None:
                    print(f"conflict at {bad.witness}", file=sys.stderr)
                    return EXIT_VIOLATION
                if tag == "I":
                    if len(parts) != 4:
                        raise fail(lineno, "expected 'I <id> <left> <right>'")
                    iv = Interval(
                        int(parts[1]), parse_number(parts[2]), parse_number(parts[3])
                    )
                    if trace_ops is not None:
                        if op_index >= len(trace_ops) or trace_ops[op_index] != Insert(iv):
                            raise fail(lineno, "log insert does not match the trace")
                    if iv.id in state.intervals:
                        raise fail(lineno, f"duplicate live id {iv.id}")
                    state.add(iv)
                    last_insert = iv.id
                else:
                    if len(parts) != 2:
                        raise fail(lineno, "expected 'D <id>'")
                    iid = int(parts[1])
                    if trace_ops is not None:
                        if op_index >= len(trace_ops) or trace_ops[op_index] != Delete(iid):
                            raise fail(lineno, "log delete does not match the trace")
                    if iid not in state.intervals:
                        raise fail(lineno, f"delete of unknown id {iid}")
                    state.remove(iid)
                    last_insert = None
                op_index += 1
                op_open = True
            elif tag == "A":
                if len(parts) < 3:
                    raise fail(lineno, "expected 'A <id> <color>'")
                if not op_open or last_insert is None:
                    raise fail(lineno, "assignment outside an insert operation")
                iid = int(parts[1])
                if iid != last_insert:
                    raise fail(
                        lineno, f"initial color for {iid} but op inserted {last_insert}"
                    )
                if iid in state.assignment:
                    raise fail(lineno, f"interval {iid} colored twice")
                color = parse_color(parts, lineno)
                state.set_color(iid, color)
                seen.add(color)
            elif tag == "R":
                if len(parts) < 3:
                    raise fail(lineno, "expected 'R <id> <color>'")
                if not op_open:
                    raise fail(lineno, "recolor outside an operation")
                iid = int(parts[1])
                if iid not in state.intervals:
                    raise fail(lineno, f"recolor of unknown id {iid}")
                if iid not in state.assignment:
                    raise fail(lineno, f"recolor of never-colored id {iid}")
                color = parse_color(parts, lineno)
                state.set_color(iid, color)
                seen.add(color)
                recolor_total += 1
                recolor_cur += 1
            elif tag == "SUMMARY":
                bad = close_op(lineno)
                if bad is not None:
                    print(f"conflict at {bad.witness}", file=sys.stderr)
                    return EXIT_VIOLATION
                measured = {
                    "colors": len(seen),
                    "n": len(state.intervals),
                    "recolor_total": recolor_total,
                    "recolor_max": recolor_max,
                    "max_recolor": recolor_max,
                }
                for token in parts[1:]:
                    key, eq, value = token.partition("=")
                    if not eq:
                        raise fail(lineno, f"bad summary token {token!r}")
                    if key in measured and int(value) != measured[key]:
                        raise fail(
                            lineno,
                            f"summary {key}={value} but replay measured {measured[key]}",
                        )
            elif tag in ("E", "K"):
                raise fail(lineno, "kinetic logs are not replayable here")
            else:
                raise fail(lineno, f"unknown record {tag!r}")
        bad = close_op(len(log_lines))
        if bad is not None:
            print(f"conflict at {bad.witness}", file=sys.stderr)
            return EXIT_VIOLATION
        if trace_ops is not None and op_index != len(trace_ops):
            raise _LogMismatch(
                f"log covers {op_index} of {len(trace_ops)} trace operations"
            )
    except _LogMismatch as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


# --------------------------------------------------------------- adversary


class _RecordingEngine:
    """Engine proxy that echoes operations and assignments to a buffer."""

    def __init__(self, engine, buffer: io.StringIO):
        self.engine = engine
        self.buffer = buffer

        def hook(iid: int, color: Color, is_recolor: bool) -> None:
            tag = "R" if is_recolor else "A"
            buffer.write(f"{tag} {iid} {_color_token(color)}\n")

        engine.state.on_assign = hook

    @property
    def state(self):
        return self.engine.state

    def insert(self, interval: Interval) -> None:
        self.buffer.write(_interval_line(interval) + "\n")
        self.engine.insert(interval)

    def delete(self, iid: int) -> None:
        self.buffer.write(f"D {iid}\n")
        self.engine.delete(iid)

    def __getattr__(self, name):
        return getattr(self.engine, name)


def cmd_adversary(args) -> int:
    spec = parse_method_spec(args.engine)
    buffers: list[io.StringIO] = []

    def factory():
        buf = io.StringIO()
        buffers.append(buf)
        return _RecordingEngine(build_engine(spec), buf)

    runner = run_general_adversary if args.kind == "general" else run_local_adversary
    report = runner(factory, args.n, budget_r=args.budget_r)
    with _Out(args.out) as out:
        out.write(buffers[-1].getvalue())
        c = args.budget_c if args.budget_c is not None else report.colors_used
        consistent = check_tradeoff(args.n, c, report.max_recolor, args.kind)
        verdict = "n/a" if consistent is None else str(consistent).lower()
        out.write(
            f"# tradeoff c={c} r={report.max_recolor} consistent={verdict}\n"
        )
        out.write(
            "SUMMARY colors={} max_recolor={} rounds={}\n".format(
                report.colors_used, report.max_recolor, report.rounds_played
            )
        )
    if not report.cf_ok:
        print(f"conflict at {report.cf_witness}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ----------------------------------------------------------------- kinetic


def cmd_kinetic(args) -> int:
    trajs = parse_scenario(_read_text(args.scenario))
    if not trajs:
        raise EngineError("scenario has no trajectories")
    km = KineticMaintainer(trajs, 0.0, args.until, exact=args.exact)
    with _Out(args.out) as out:
        for iid in sorted(km.colors):
            out.write(f"A {iid} {_color_token(km.colors[iid])}\n")
        last_eval = None
        while True:
            rec = km.step()
            if rec is None:
                break
            last_eval = rec.t_eval
            ev = rec.event
            out.write(
                "E {} {} {} {}\n".format(
                    format_number(round(float(ev.time), 6)), ev.kind, ev.id1, ev.id2
                )
            )
            for iid, color in rec.recolored:
                out.write(f"R {iid} {_color_token(color)}\n")
            if args.audit == "every":
                boundary = (
                    km.cursor >= len(km.events)
                    or km.events[km.cursor].time != ev.time
                )
                if boundary:
                    km.check_invariants(rec.t_eval)
        if args.audit in ("every", "final"):
            km.check_invariants(last_eval if last_eval is not None else km.until)
        s = km.summary()
        out.write(
            "SUMMARY events={} recolor_total={} recolor_max={} colors={}\n".format(
                s["events"], s["recolor_total"], s["recolor_max"], s["colors"]
            )
        )
    return EXIT_OK


# ------------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfcolor",
        description="Conflict-free interval coloring engines, adversaries, "
        "and the kinetic maintainer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_method_flags(p):
        p.add_argument("--method", required=True,
                       help="method name or compact spec like dynamic:t=2")
        p.add_argument("--t", type=int, default=None, help="B-tree minimum degree")
        p.add_argument("--eps", type=float, default=None, help="rebuild exponent")
        p.add_argument("--universe", type=int, default=None,
                       help="endpoint universe size for fixed engines")
        p.add_argument("--L", dest="block", type=parse_number, default=None,
                       help="length bound for the grid method")
        p.add_argument("--inner", default=None,
                       choices=("trivial", "dynamic", "eps"),
                       help="inner engine for the grid method")

    p = sub.add_parser("run", help="replay an update trace through an engine")
    add_method_flags(p)
    p.add_argument("--trace", default="-", help="trace file ('-' for stdin)")
    p.add_argument("--audit", choices=("none", "every", "final"), default="none")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", help="generate traces and scenarios")
    p.add_argument("kind", choices=("random", "nested-lb", "bounded-length", "kinetic-lb"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-delete", type=float, default=0.3)
    p.add_argument("--L", dest="block", type=parse_number, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="measure colors and recolorings over a matrix")
    p.add_argument("--method", action="append", required=True,
                   help="compact method spec; repeatable")
    p.add_argument("--n", dest="sizes", required=True,
                   help="comma-separated operation counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true",
                   help="fill wall_time (nondeterministic)")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="replay a run log against the oracle")
    p.add_argument("--log", required=True)
    p.add_argument("--trace", default=None,
                   help="optional original trace to cross-check ops")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("adversary", help="play a lower-bound adversary against an engine")
    p.add_argument("--kind", choices=("general", "local"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget-c", type=int, default=None)
    p.add_argument("--budget-r", type=int, default=None)
    p.add_argument("--engine", required=True, help="compact method spec")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("kinetic", help="run the kinetic maintainer over a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--until", type=float, required=True)
    p.add_argument("--audit", choices=("none", "every", "final"), default="none")
    p.add_argument("--exact", action="store_true",
                   help="exact rational event times")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_kinetic)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    env_seed = os.environ.get("CFCOLOR_SEED")
    if env_seed is not None and hasattr(args, "seed"):
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"error: CFCOLOR_SEED={env_seed!r} is not an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except TraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
