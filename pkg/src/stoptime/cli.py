"""Command line entry point: ``stoptime <subcommand> ...``.

Every subcommand writes JSONL records (to ``--out`` or stdout). Exit status is
0 when all checks pass, 1 when a check fails (the offending record carries
``"ok": false``), and 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import allocation as al
from . import beating as bt
from . import coloring as co
from . import machines as mc
from . import modes as md
from . import oracle as orc
from . import verify
from .tree import NotPrefixFreeError, decode_field, depth_max, DEPTH_ENV_VAR, encode_field

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


class Trace:
    """Serialises records in order; remembers whether any was flagged."""

    def __init__(self, stream):
        self.stream = stream
        self.failed = False

    def emit(self, record: dict) -> None:
        if record.get("ok") is False:
            self.failed = True
        self.stream.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")

    def flag(self, record: dict) -> None:
        self.emit({**record, "ok": False})


def _depth(value: int) -> int:
    if not 0 <= value <= depth_max():
        raise ConfigError(f"depth {value} outside 0..{depth_max()} (set {DEPTH_ENV_VAR} to raise it)")
    return value


def _read_script(path) -> list[str]:
    lines = Path(path).read_text().splitlines()
    return [decode_field(ln) for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


# ---------------------------------------------------------------------------

def cmd_color_game(args, trace: Trace) -> None:
    if args.k < 1:
        raise ConfigError(f"colour budget k must be positive, got {args.k}")
    depth = _depth(args.depth)
    master = random.Random(args.seed)
    scripted = None
    if args.alice not in ("random", "tight"):
        scripted = _read_script(args.alice)
    episodes = 1 if scripted is not None else args.episodes
    for ep in range(episodes):
        rng = random.Random(master.getrandbits(64))
        game = co.ColoringGame(args.k, depth)
        if scripted is not None:
            alice = co.ScriptedAlice(scripted)
        elif args.alice == "tight":
            alice = co.TightAlice(rng, depth, args.moves)
        else:
            alice = co.RandomAlice(rng, depth, args.moves)
        problems: list[str] = []

        def check(game, v, color):
            if args.trace_moves:
                trace.emit({"episode": ep, "vertex": v, "color": color})
            if not co.verify_coloring(game):
                problems.append(f"bad colouring after {v!r}")
            problems.extend(co.rank_invariant_violations(game))
            if args.strategy == "first-fit":
                problems.extend(co.first_fit_violations(game))

        try:
            co.play_episode(game, alice, args.strategy, on_move=check)
        except (co.PathBudgetExceeded, co.ColoringFailure, ValueError) as err:
            problems.append(str(err))
        trace.emit({"episode": ep, "strategy": args.strategy, "k": args.k, "depth": depth,
                    "moves": len(game.order), "colors_used": len(set(game.color_of.values())),
                    "ok": not problems, "violations": problems[:5]})


def cmd_beat_game(args, trace: Trace) -> None:
    depth = _depth(args.depth)
    names = [n for n in args.team.split(",") if n] if args.team else []
    try:
        team = bt.team_from_names(names, args.seed)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    try:
        res = bt.run_beating_game(team, depth, args.max_rounds)
    except bt.DepthExhausted as err:
        trace.flag({"verdict": "depth-exhausted", "reason": str(err),
                    "required_depth": bt.required_depth(len(team))})
        return
    *moves, final = res.records()
    for r in moves:
        trace.emit(r)
    final["ok"] = res.won and not res.violations and not res.disqualified
    trace.emit(final)


def cmd_alloc_game(args, trace: Trace) -> None:
    try:
        k = al.k_of(args.n)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    depth = _depth(args.depth)
    config = al.AllocatorConfig(args.n, depth=depth)
    if args.stream == "random":
        master = random.Random(args.seed)
        streams = [al.random_stream(random.Random(master.getrandbits(64)), args.n, depth, args.length)
                   for _ in range(args.streams)]
    else:
        try:
            streams = [al.loads_stream(Path(args.stream).read_text())]
        except (OSError, ValueError) as err:
            raise ConfigError(f"cannot read stream: {err}") from None
    for i, stream in enumerate(streams):
        load = al.stream_load(stream)
        if load > args.n:
            trace.flag({"stream": i, "event": "budget", "load": load, "budget": args.n})
            continue
        try:
            alloc, problems = al.run_allocator(config, stream)
        except al.Rejected as err:
            trace.flag({"stream": i, "event": "rejected", "reason": str(err)})
            continue
        if args.trace_events:
            for e in alloc.events:
                trace.emit({"stream": i, **e})
        mode = al.assignments_to_mode(k, alloc.assignments, depth)
        worst = max((md.complexity_monotone(mode, format(o, "b"), v) for o, v in stream), default=0)
        top = max((layer for _, _, layer, _ in alloc.assignments), default=0)
        witness = al.escalation_witness_violations(alloc.events)
        ok = not problems and not witness and top <= args.n + 1 and md.is_valid(mode) \
            and worst is not None and worst <= 2 * k + al.C_ENC
        trace.emit({"stream": i, "event": "summary", "requests": len(stream), "highest_layer": top,
                    "max_complexity": worst, "bound": 2 * k + al.C_ENC, "ok": ok,
                    "violations": (problems + [str(w) for w in witness])[:5]})


def cmd_alloc_adversary(args, trace: Trace) -> None:
    if args.n < 1 or args.c < 1:
        raise ConfigError("n and c must be positive")
    try:
        assigner = al.make_assigner(args.assigner, args.seed)
    except (ValueError, json.JSONDecodeError) as err:
        raise ConfigError(str(err)) from None
    depth = _depth(args.depth if args.depth is not None else depth_max())
    try:
        res = al.run_adversary(args.n, assigner, args.c, depth)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"assigner script is malformed: {err}") from None
    *events, final = res.records()
    for e in events:
        trace.emit(e)
    final["ok"] = (res.outcome.kind in ("goal", "contradiction") and res.max_load <= res.budget
                   and not al.allocation_conflicts(res.events))
    trace.emit(final)


def _load_mode(path, depth=None) -> md.DescriptionMode:
    try:
        return md.read_mode(path, depth)
    except (OSError, ValueError) as err:
        raise ConfigError(f"cannot read mode {path}: {err}") from None


def cmd_convert(args, trace: Trace) -> None:
    op = args.op
    out_text = None
    if op in ("validate", "trim", "to-length", "from-length", "families"):
        if len(args.inputs) != 1:
            raise ConfigError(f"{op} takes exactly one input")
    if op == "validate":
        mode = _load_mode(args.inputs[0])
        bad = md.validate_mode(mode)
        for v in bad:
            trace.flag({"violation": [list(v.first), list(v.second)]})
        trace.emit({"op": op, "triples": len(mode), "ok": not bad})
        return
    if op == "trim":
        try:
            stream, depth = md.loads_triples(Path(args.inputs[0]).read_text())
        except (OSError, ValueError) as err:
            raise ConfigError(f"cannot read stream: {err}") from None
        kept, dropped = md.admit_stream(stream)
        out_text = md.dumps_mode(md.make_mode(kept, depth))
        trace.emit({"op": op, "kept": len(kept), "dropped": [list(t) for t in dropped]})
    elif op == "join":
        parts = [_load_mode(p) for p in args.inputs]
        bad = [p for p, m in zip(args.inputs, parts) if not md.is_valid(m)]
        if bad:
            trace.flag({"op": op, "invalid_inputs": bad})
            return
        out_text = md.dumps_mode(md.join_modes(parts))
        trace.emit({"op": op, "inputs": len(parts)})
    elif op in ("to-length", "from-length"):
        mode = _load_mode(args.inputs[0])
        if not md.is_valid(mode):
            trace.flag({"op": op, "reason": "input mode is invalid"})
            return
        if op == "to-length":
            result, dropped = md.to_length_mode(mode)
            trace.emit({"op": op, "triples": len(result), "dropped": [list(t) for t in dropped]})
        else:
            try:
                result = md.from_length_mode(mode)
            except ValueError as err:
                trace.flag({"op": op, "reason": str(err)})
                return
            trace.emit({"op": op, "triples": len(result)})
        out_text = md.dumps_mode(result)
    elif op == "families":
        mode = _load_mode(args.inputs[0])
        for p, members in sorted(md.mode_to_families(mode).items()):
            trace.emit({"description": p, "members": sorted(members, key=lambda s: (len(s), s))})
        return
    elif op == "machine-to-script":
        depth = _depth(args.depth)
        try:
            machine = mc.builtin_machine(args.machine, *[_param(p) for p in args.params])
        except (ValueError, TypeError) as err:
            raise ConfigError(str(err)) from None
        script = mc.enumerator_from_machine(machine, depth, args.fuel)
        out_text = "".join(encode_field(s) + "\n" for s in script)
        trace.emit({"op": op, "machine": machine.name, "emitted": len(script)})
    elif op == "script-to-stopset":
        depth = _depth(args.depth)
        try:
            script = _read_script(args.inputs[0])
        except (OSError, ValueError) as err:
            raise ConfigError(str(err)) from None
        try:
            machine = mc.machine_from_enumerator(script)
        except NotPrefixFreeError as err:
            trace.flag({"op": op, "reason": str(err)})
            return
        stops = mc.stop_set(machine, depth, mc.ample_fuel(script))
        out_text = "".join(encode_field(s) + "\n" for s in sorted(stops, key=lambda s: (len(s), s)))
        trace.emit({"op": op, "stops": len(stops), "ok": stops == set(script)})
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown op {op}")
    if out_text is not None:
        if args.result:
            Path(args.result).write_text(out_text)
        else:
            sys.stderr.write(out_text)


def _param(p: str):
    return int(p) if p.lstrip("-").isdigit() else p


def cmd_oracle(args, trace: Trace) -> None:
    mode = _load_mode(args.mode)
    if not md.is_valid(mode):
        trace.flag({"reason": "mode violates uniqueness", "violations": len(md.validate_mode(mode))})
        return
    horizon = mode.depth if args.horizon is None else args.horizon
    if not 0 <= horizon <= mode.depth:
        raise ConfigError(f"horizon {horizon} outside 0..{mode.depth}")
    xs = [decode_field(args.x)] if args.x is not None else sorted(mode.objects(), key=lambda s: (len(s), s))
    for x in xs:
        if len(x) > horizon:
            continue
        rec = {"x": x, "horizon": horizon}
        rec["value"] = orc.max_over_extensions(mode, x, horizon)
        rec["monotone"] = md.complexity_monotone(mode, x, x)
        rec["ok"] = orc.check_oracle_inequality(mode, x, horizon)
        if args.brute:
            rec["brute"] = orc.brute_max_over_extensions(mode, x, horizon)
            rec["ok"] = rec["ok"] and rec["brute"] == rec["value"]
        if args.condition is not None:
            z = decode_field(args.condition)
            if len(z) <= horizon:
                rec["condition"] = z
                rec["value_given_condition"] = orc.max_over_extensions(mode, x, horizon, z)
        if args.finite:
            rec["finite_extensions"] = orc.max_over_finite_extensions(mode, x, horizon)
        trace.emit(rec)
    bad = orc.cardinality_violations(mode, horizon)
    trace.emit({"cardinality": "ok" if not bad else "violated", "ok": not bad,
                "violations": [list(b) for b in bad[:5]]})


def cmd_verify_all(args, trace: Trace) -> None:
    for report in verify.run_all(args.seed, args.quick):
        rec = report.record()
        trace.emit(rec)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stoptime", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSONL records here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("color-game", parents=[common], help="online antichain colouring episodes")
    p.add_argument("--strategy", choices=co.STRATEGIES, default="first-fit")
    p.add_argument("--k", type=int, required=True, help="colour budget / marks per branch")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--episodes", type=int, default=10)
    p.add_argument("--moves", type=int, default=30, help="marks Alice attempts per episode")
    p.add_argument("--alice", default="random", help="random, tight, or a file of vertices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace-moves", action="store_true")
    p.set_defaults(func=cmd_color_game)

    p = sub.add_parser("beat-game", parents=[common], help="prefix-stable builder against prefix-free opponents")
    p.add_argument("--team", default="", help=f"comma-separated names from {sorted(bt.OPPONENT_ZOO)}")
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--max-rounds", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_beat_game)

    p = sub.add_parser("alloc-game", parents=[common], help="layered description allocator")
    p.add_argument("--n", type=int, required=True, help="objects simple per vertex (power of two)")
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--stream", default="random", help="random, or a file of 'object vertex' lines")
    p.add_argument("--streams", type=int, default=1, help="random streams to run")
    p.add_argument("--length", type=int, default=60, help="declarations per random stream")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace-events", action="store_true")
    p.set_defaults(func=cmd_alloc_game)

    p = sub.add_parser("alloc-adversary", parents=[common], help="declaration adversary against an assigner")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, default=6, help="gap constant: descriptions up to 2n-c bits")
    p.add_argument("--assigner", default="greedy", help="silent, greedy, random, or a JSONL script")
    p.add_argument("--depth", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_alloc_adversary)

    p = sub.add_parser("convert", parents=[common], help="mode, family and machine conversions")
    p.add_argument("op", choices=["validate", "trim", "join", "to-length", "from-length", "families",
                                  "machine-to-script", "script-to-stopset"])
    p.add_argument("inputs", nargs="*", help="input files")
    p.add_argument("--result", help="write the converted mode/script here (default: stderr)")
    p.add_argument("--machine", default="read", help=f"built-in machine: {sorted(mc.MACHINE_FAMILY)}")
    p.add_argument("--params", nargs="*", default=[], help="machine parameters")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--fuel", type=int, default=1000)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("oracle", parents=[common], help="complexity maximised over extending oracles")
    p.add_argument("--mode", required=True, help="mode file")
    p.add_argument("--x", help="string to evaluate ('-' for empty); default: every object")
    p.add_argument("--horizon", type=int)
    p.add_argument("--condition", help="exploratory: take oracles extending this string instead")
    p.add_argument("--finite", action="store_true", help="exploratory: max over finite extensions")
    p.add_argument("--brute", action="store_true", help="cross-check against explicit enumeration")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        depth_max()
    except ValueError as err:
        print(f"stoptime: {err}", file=sys.stderr)
        return EXIT_CONFIG
    out = open(args.out, "w") if args.out else sys.stdout
    trace = Trace(out)
    try:
        args.func(args, trace)
    except ConfigError as err:
        print(f"stoptime: {err}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        if args.out:
            out.close()
    return EXIT_VIOLATION if trace.failed else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
