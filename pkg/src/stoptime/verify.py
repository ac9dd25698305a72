"""Randomised verification suites, one per module, plus brute-force oracles.

Each suite takes a seed and a size, checks every invariant it can against an
independent recomputation, and returns a ``SuiteReport``. Both ``verify-all``
and the acceptance tests run these.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import allocation as al
from . import beating as bt
from . import coloring as co
from . import machines as mc
from . import modes as md
from . import oracle as orc
from .tree import all_strings, check_prefix_free


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(msg)
        else:
            self.stats["suppressed"] = self.stats.get("suppressed", 0) + 1

    def record(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checked": self.checked,
                "stats": self.stats, "failures": self.failures}


def _bits(rng: random.Random, n: int) -> str:
    return format(rng.getrandbits(n), f"0{n}b") if n else ""


def episode_rngs(seed: int, count: int):
    master = random.Random(seed)
    for _ in range(count):
        yield random.Random(master.getrandbits(64))


# ---------------------------------------------------------------------------
# Brute-force oracles.

def brute_stop_set(machine: mc.StoppingMachine, depth: int, fuel: int) -> set[str]:
    """Run the machine separately on every string up to ``depth``."""
    return {z for z in all_strings(depth) if mc.run_on(machine, z, fuel) == mc.StopsAt(z)}


def brute_join_complexity(modes: list[md.DescriptionMode], y: str, x: str) -> int | None:
    vals = [(c + m + 1) for m, mode in enumerate(modes)
            if (c := md.complexity_monotone(mode, y, x)) is not None]
    return min(vals, default=None)


def brute_bound(schedule, obj, y):
    vals = [b for x, v, b in schedule if x == obj and y.startswith(v)]
    return min(vals, default=None)


# ---------------------------------------------------------------------------
# Random generators shared by suites and tests.

def random_prefix_free_script(rng: random.Random, max_size: int = 50, max_len: int = 12) -> list[str]:
    raw = [_bits(rng, rng.randint(0, max_len)) for _ in range(rng.randint(0, max_size))]
    if "" in raw and rng.random() < 0.9:
        raw = [s for s in raw if s]
    return mc.trim_script(raw)


def random_mode(rng: random.Random, depth: int, size: int | None = None,
                max_desc: int = 3) -> md.DescriptionMode:
    """A valid mode: random triples passed through ``trim_to_mode``."""
    size = rng.randint(0, 24) if size is None else size
    stream = []
    objects = [_bits(rng, rng.randint(0, depth)) for _ in range(rng.randint(1, 6))]
    for _ in range(size):
        x = _bits(rng, rng.randint(0, depth))
        roll = rng.random()
        if roll < 0.4:
            y = x[: rng.randint(0, len(x))]
        elif roll < 0.6 and len(x) < depth:
            y = x + _bits(rng, rng.randint(1, depth - len(x)))
        else:
            y = rng.choice(objects)
        stream.append((_bits(rng, rng.randint(0, max_desc)), x, y))
    return md.trim_to_mode(stream, depth)


# ---------------------------------------------------------------------------
# Suites.

def suite_machines(seed: int, scripts: int = 1000, machines: int = 1000) -> SuiteReport:
    rep = SuiteReport("stop_machines")
    for rng in episode_rngs(seed, scripts):
        s = random_prefix_free_script(rng)
        m = mc.machine_from_enumerator(s)
        got = mc.stop_set(m, 12, mc.ample_fuel(s))
        rep.checked += 1
        if got != set(s):
            rep.fail(f"round trip lost {sorted(set(s) ^ got)[:3]} for script of {len(s)}")
        # the reverse direction: enumerate the stop set back
        if sorted(mc.enumerator_from_machine(m, 12, mc.ample_fuel(s))) != sorted(s):
            rep.fail("enumerator_from_machine disagrees with the script")
    for i, rng in enumerate(episode_rngs(seed + 1, machines)):
        depth = rng.randint(0, 10)
        m = mc.random_table_machine(rng, depth)
        stops = mc.stop_set(m, 12, 200)
        rep.checked += 1
        if not check_prefix_free(stops):
            rep.fail(f"machine {i}: stop set not prefix-free")
        if i % 10 == 0:
            d = min(depth + 1, 8)
            if {z for z in stops if len(z) <= d} != brute_stop_set(m, d, 200):
                rep.fail(f"machine {i}: tree simulation disagrees with per-input runs")
    rep.stats = {"scripts": scripts, "machines": machines}
    return rep


def suite_coloring(seed: int, plays: int = 1000, max_moves: int = 40) -> SuiteReport:
    rep = SuiteReport("antichain_coloring")
    moves = {s: 0 for s in co.STRATEGIES}
    for strategy in co.STRATEGIES:
        for rng in episode_rngs(seed + len(strategy), plays):
            k, depth = rng.randint(1, 8), rng.randint(1, 16)
            game = co.ColoringGame(k, depth)
            cls = co.TightAlice if rng.random() < 0.5 else co.RandomAlice
            alice = cls(rng, depth, rng.randint(1, max_moves))

            def check(game, v, color, strategy=strategy):
                moves[strategy] += 1
                prof = co.subtree_profile(game)
                if not co.verify_coloring(game) or color > k:
                    rep.fail(f"{strategy}: bad colouring after {v!r}")
                for msg in co.rank_invariant_violations(game, prof):
                    rep.fail(f"{strategy}: {msg}")
                if strategy == "first-fit":
                    for msg in co.first_fit_violations(game, prof):
                        rep.fail(f"first-fit: {msg}")
                for u in {v, v[: len(v) // 2], ""}:
                    if game.rank(u) != co.brute_marked_rank(game.marked, u):
                        rep.fail(f"{strategy}: cached rank wrong at {u!r}")

            try:
                co.play_episode(game, alice, strategy, on_move=check)
            except (co.ColoringFailure, co.PathBudgetExceeded) as err:
                rep.fail(f"{strategy}: {err}")
            rep.checked += 1
    rep.stats = {"plays_per_strategy": plays, "moves": moves}
    return rep


def suite_schedules(seed: int, schedules: int = 200) -> SuiteReport:
    rep = SuiteReport("schedule_families")
    for rng in episode_rngs(seed, schedules):
        depth, n_max = rng.randint(1, 12), rng.randint(1, 4)
        sched = co.random_schedule(rng, depth, n_max, rng.randint(0, 60))
        strategy = rng.choice(co.STRATEGIES)
        fams = co.schedule_to_families(sched, depth, n_max, strategy)
        final = co.schedule_levels(sched)
        rep.checked += 1
        if co.schedule_violations(sched):
            rep.fail("generator produced an illegal schedule")
        for key, members in fams.items():
            if not check_prefix_free(members):
                rep.fail(f"family {key} not prefix-free")
            if len(key[1]) != key[0]:
                rep.fail(f"colour {key[1]!r} is not an {key[0]}-bit string")
        for n in range(1, n_max + 1):
            for v, b in final.items():
                homes = [c for (m, c), vs in fams.items() if m == n and v in vs]
                want = 1 if b <= n else 0
                if len(homes) != want:
                    rep.fail(f"{v!r} (bound {b}) in {len(homes)} level-{n} families")
    rep.stats = {"schedules": schedules}
    return rep


def suite_oracle(seed: int, modes: int = 1000) -> SuiteReport:
    rep = SuiteReport("oracle_complexity")
    compared = 0
    for rng in episode_rngs(seed, modes):
        depth = rng.randint(0, 8)
        mode = random_mode(rng, depth)
        rep.checked += 1
        if not orc.cardinality_check_oracle(mode):
            rep.fail(f"cardinality fails: {orc.cardinality_violations(mode)[:2]}")
        xs = {x for x in mode.objects() if len(x) <= depth}
        xs |= {_bits(rng, rng.randint(0, depth)) for _ in range(3)}
        for x in sorted(xs):
            fast = orc.max_over_extensions(mode, x)
            slow = orc.brute_max_over_extensions(mode, x)
            compared += 1
            if fast != slow:
                rep.fail(f"cover gives {fast}, brute force {slow} at {x!r}")
            if not orc.check_oracle_inequality(mode, x):
                rep.fail(f"oracle value above monotone complexity at {x!r}")
    rep.stats = {"modes": modes, "values_compared": compared}
    return rep


def teams_upto(size: int):
    for i in range(size + 1):
        yield from itertools.product(bt.SHIPPED_TEAM_MEMBERS, repeat=i)


def suite_beating(seed: int, max_team: int = 4, random_seeds: int = 1) -> SuiteReport:
    rep = SuiteReport("beating_game")
    rng = random.Random(seed)
    for names in teams_upto(max_team):
        i = len(names)
        depth = 4 * (i + 2)
        for _ in range(random_seeds if "random" in names else 1):
            team = bt.team_from_names(names, rng.getrandbits(64))
            res = bt.run_beating_game(team, depth)
            rep.checked += 1
            tag = ",".join(names) or "(empty)"
            if not res.won:
                rep.fail(f"team {tag}: verdict {res.verdict}")
            for msg in res.violations:
                rep.fail(f"team {tag}: {msg}")
            if bt.path_load(res.emissions, i) > i:
                rep.fail(f"team {tag}: more than {i} opponent labels on a path")
            if not bt.labels_fresh(res.emissions):
                rep.fail(f"team {tag}: a label was reused off its spine")
            if res.disqualified:
                rep.fail(f"team {tag}: shipped opponent disqualified")
    cheat = bt.run_beating_game([bt.Cheater(), bt.Cheater()], 16)
    if not cheat.disqualified:
        rep.fail("cheating opponent was not disqualified")
    rep.stats = {"max_team": max_team, "required_depth": bt.required_depth(max_team)}
    return rep


def suite_allocator(seed: int, streams: int = 500, ns=(1, 2, 4, 8), depth: int = 16,
                    max_len: int = 100) -> SuiteReport:
    rep = SuiteReport("layered_allocator")
    top = {}
    for n in ns:
        k = al.k_of(n)
        config = al.AllocatorConfig(n, depth=depth)
        highest = 0
        for rng in episode_rngs(seed + n, streams):
            stream = al.random_stream(rng, n, depth, rng.randint(5, max_len))
            rep.checked += 1
            if al.stream_load(stream) > n:
                rep.fail(f"n={n}: generator broke the budget")
            try:
                alloc, problems = al.run_allocator(config, stream)
            except al.Rejected as err:
                rep.fail(f"n={n}: {err}")
                continue
            for p in problems[:3]:
                rep.fail(f"n={n}: {p}")
            layers = [i for _, _, i, _ in alloc.assignments]
            highest = max([highest] + layers)
            if layers and max(layers) > n + 1:
                rep.fail(f"n={n}: escalated to layer {max(layers)}")
            if al.escalation_witness_violations(alloc.events):
                rep.fail(f"n={n}: rejection without an escalation witness")
            mode = al.assignments_to_mode(k, alloc.assignments, depth)
            if not md.is_valid(mode):
                rep.fail(f"n={n}: allocator produced an invalid mode")
            for obj, v in stream:
                c = md.complexity_monotone(mode, format(obj, "b"), v)
                if c is None or c > 2 * k + al.C_ENC:
                    rep.fail(f"n={n}: object {obj} at {v!r} has complexity {c}")
        top[n] = highest
    rep.stats = {"streams_per_n": streams, "highest_layer": top}
    return rep


def suite_adversary(seed: int, random_runs: int = 10) -> SuiteReport:
    rep = SuiteReport("adversary")
    rng = random.Random(seed)
    outcomes = {}
    for n in (2, 3):
        runs = [(name, al.make_assigner(name)) for name in ("silent", "greedy")]
        runs += [("random", al.RandomAssigner(rng.getrandbits(64))) for _ in range(random_runs)]
        for name, assigner in runs:
            try:
                res = al.run_adversary(n, assigner)
            except al.BudgetViolation as err:
                rep.fail(f"n={n} {name}: {err}")
                continue
            rep.checked += 1
            outcomes.setdefault(f"n={n} {name}", set()).add(res.outcome.kind)
            if res.outcome.kind not in ("goal", "contradiction"):
                rep.fail(f"n={n} {name}: ended {res.outcome}")
            if res.max_load > res.budget or al.adversary_load_violations(res.events, res.budget):
                rep.fail(f"n={n} {name}: declaration budget exceeded")
            if al.allocation_conflicts(res.events):
                rep.fail(f"n={n} {name}: accepted a conflicting allocation")
    # the pigeonhole stage against an assigner that serves every request
    for n, c in [(2, 1), (2, 2), (2, 3), (3, 2), (3, 4), (3, 6)]:
        try:
            res = al.run_adversary(n, al.GreedyAssigner(), c)
        except al.BudgetViolation as err:
            rep.fail(f"pigeonhole n={n} c={c}: {err}")
            continue
        rep.checked += 1
        if res.collisions < 1:
            rep.fail(f"pigeonhole n={n} c={c}: no collision found")
    rep.stats = {"outcomes": {k: sorted(v) for k, v in outcomes.items()}}
    return rep


def suite_minimal(seed: int, lists: int = 200) -> SuiteReport:
    rep = SuiteReport("minimal_in_class")
    for rng in episode_rngs(seed, lists):
        depth = rng.randint(0, 6)
        schedules = [al.random_class_schedule(rng, depth, rng.randint(1, 12), 5, rng.randint(0, 25))
                     for _ in range(rng.randint(0, 4))]
        out = al.minimal_in_class(schedules)
        rep.checked += 1
        if any(al.class_violations(s) for s in schedules):
            rep.fail("generator produced a schedule outside the class")
        if al.class_violations(out):
            rep.fail(f"merged schedule leaves the class: {al.class_violations(out)[:2]}")
        objs = {x for x, _, _ in out}
        verts = {v for _, v, _ in out} | {v + "0" for _, v, _ in out}
        for x in objs:
            for y in verts:
                want = [b + m + 1 for m, s in enumerate(schedules)
                        if (b := brute_bound(s, x, y)) is not None]
                got = al.bound_at(out, x, y)
                if got != min(want, default=None):
                    rep.fail(f"bound for {x} at {y!r}: {got} != {min(want, default=None)}")
    rep.stats = {"lists": lists}
    return rep


def suite_transformers(seed: int, modes: int = 500) -> SuiteReport:
    rep = SuiteReport("mode_transformers")
    for rng in episode_rngs(seed, modes):
        depth = rng.randint(0, 6)
        stream = [(_bits(rng, rng.randint(0, 2)), _bits(rng, rng.randint(0, depth)),
                   _bits(rng, rng.randint(0, depth))) for _ in range(rng.randint(0, 20))]
        once = md.trim_to_mode(stream, depth)
        rep.checked += 1
        if md.trim_to_mode(list(once), depth) != once or not md.is_valid(once):
            rep.fail("trim_to_mode not idempotent")
        parts = [random_mode(rng, depth, rng.randint(0, 10)) for _ in range(rng.randint(0, 3))]
        joined = md.join_modes(parts)
        if parts and not md.is_valid(joined):
            rep.fail("join of valid modes is invalid")
        objs = set().union(*(m.objects() for m in parts)) if parts else set()
        for y in sorted(objs):
            for x in (_bits(rng, rng.randint(0, depth)) for _ in range(4)):
                if md.complexity_monotone(joined, y, x) != brute_join_complexity(parts, y, x):
                    rep.fail(f"join shift wrong for {y!r} given {x!r}")
        mode = random_mode(rng, depth)
        lengths, dropped = md.to_length_mode(mode)
        back = md.from_length_mode(lengths)
        if dropped or not md.is_valid(lengths) or not md.is_valid(back):
            rep.fail("length transformers broke validity")
        for x in all_strings(depth):
            c = md.complexity_monotone(mode, x, x)
            enc = md.encode_length(len(x), depth)
            cl = md.complexity_monotone(lengths, enc, x)
            cb = md.complexity_monotone(back, x, x)
            if c is not None and (cl is None or cl > c):
                rep.fail(f"length mode worse than the original at {x!r}")
            if cl is not None and (cb is None or cb > cl):
                rep.fail(f"recovered mode worse than the length mode at {x!r}")
        round_trip = md.families_to_mode(md.mode_to_families(mode), depth)
        if md.diagonal_complexities(round_trip) != md.diagonal_complexities(mode):
            rep.fail("families round trip changed diagonal complexities")
    rep.stats = {"modes": modes}
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "stop_machines": suite_machines,
    "antichain_coloring": suite_coloring,
    "schedule_families": suite_schedules,
    "oracle_complexity": suite_oracle,
    "beating_game": suite_beating,
    "layered_allocator": suite_allocator,
    "adversary": suite_adversary,
    "minimal_in_class": suite_minimal,
    "mode_transformers": suite_transformers,
}

QUICK = {
    "stop_machines": dict(scripts=100, machines=100),
    "antichain_coloring": dict(plays=60),
    "schedule_families": dict(schedules=40),
    "oracle_complexity": dict(modes=100),
    "beating_game": dict(max_team=3),
    "layered_allocator": dict(streams=20, max_len=60),
    "adversary": dict(random_runs=3),
    "minimal_in_class": dict(lists=40),
    "mode_transformers": dict(modes=60),
}


def run_all(seed: int, quick: bool = False):
    """Run every suite with sub-seeds drawn from one master generator."""
    master = random.Random(seed)
    for name, suite in SUITES.items():
        sub = master.getrandbits(64)
        yield suite(sub, **(QUICK[name] if quick else {}))
