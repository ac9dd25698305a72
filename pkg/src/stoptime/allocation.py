"""Declaring objects simple at tree vertices, and allocating descriptions to them.

Three pieces live here:

* ``minimal_in_class`` merges upper-bound schedules into one that is below
  each of them up to an index shift and still obeys the class bound.
* A layered allocator that hands out descriptions from pools of size ``3n``
  and never needs more than ``n + 2`` layers when at most ``n`` objects are
  declared simple along any path.
* ``run_adversary``, which declares objects (at most ``2^(n-1)`` per vertex)
  so that an assigner limited to descriptions of length ``2n - c`` falls
  behind.

Objects are plain ints; they become bit strings only in ``allocator_to_mode``.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Protocol, Sequence

from .modes import DescriptionMode, make_mode
from .tree import all_strings, check_vertex, depth_max, is_prefix, prefixes, strings_of_length

# ---------------------------------------------------------------------------
# Schedules of upper bounds K(x, y) <= b, monotone in the condition y.

BoundEntry = tuple[int, str, int]  # (object, vertex, bound)


def bound_at(schedule: Iterable[BoundEntry], obj: int, y: str) -> int | None:
    """Current upper bound for ``K(obj, y)``: least bound announced at a prefix of ``y``."""
    best = None
    for x, v, b in schedule:
        if x == obj and is_prefix(v, y) and (best is None or b < best):
            best = b
    return best


def class_violations(schedule: Sequence[BoundEntry]) -> list[tuple[str, int, int]]:
    """Vertices ``y`` and levels ``n`` with more than ``2^n`` objects below ``n``.

    Only announced vertices need checking: any other vertex sees exactly the
    announcements of its longest announced prefix.
    """
    best: dict[tuple[int, str], int] = {}
    for x, v, b in schedule:
        key = (x, v)
        best[key] = min(b, best.get(key, b))
    by_vertex: dict[str, dict[int, int]] = defaultdict(dict)
    for (x, v), b in best.items():
        by_vertex[v][x] = b
    bad = []
    for y in sorted(by_vertex):
        seen: dict[int, int] = {}
        for u in prefixes(y):
            for x, b in by_vertex.get(u, {}).items():
                seen[x] = min(b, seen.get(x, b))
        for b in sorted(set(seen.values())):
            n = b + 1
            count = sum(1 for c in seen.values() if c < n)
            if count > 2 ** n:
                bad.append((y, n, count))
    return bad


def minimal_in_class(schedules: Sequence[Sequence[BoundEntry]]) -> list[BoundEntry]:
    """Round-robin merge; the m-th schedule's bounds are raised by ``m + 1``."""
    out: list[BoundEntry] = []
    longest = max((len(s) for s in schedules), default=0)
    for t in range(longest):
        for m, s in enumerate(schedules):
            if t < len(s):
                x, v, b = s[t]
                out.append((x, v, b + m + 1))
    return out


def random_class_schedule(rng: random.Random, depth: int, objects: int, n_max: int,
                          length: int) -> list[BoundEntry]:
    """Random legal schedule, built by rejecting entries that break the class bound."""
    out: list[BoundEntry] = []
    for _ in range(length):
        size = rng.randint(0, depth)
        v = format(rng.getrandbits(size), f"0{size}b") if size else ""
        if out and rng.random() < 0.4:
            v = (rng.choice(out)[1] + v)[:depth]
        entry = (rng.randrange(objects), v, rng.randint(0, n_max))
        if not class_violations(out + [entry]):
            out.append(entry)
    return out


# ---------------------------------------------------------------------------
# Declaration streams.

Declaration = tuple[int, str]


def stream_load(stream: Iterable[Declaration]) -> int:
    """Most distinct objects declared simple at a single vertex (with inheritance)."""
    at: dict[str, set[int]] = defaultdict(set)
    for obj, v in stream:
        at[v].add(obj)
    worst = 0
    for y in at:
        objs = set().union(*(at.get(u, ()) for u in prefixes(y)))
        worst = max(worst, len(objs))
    return worst


def stream_is_legal(stream: Iterable[Declaration], budget: int) -> bool:
    return stream_load(stream) <= budget


class _LoadIndex:
    """Distinct objects per vertex, inheritance included, kept incrementally."""

    def __init__(self):
        self.at: dict[str, set[int]] = defaultdict(set)

    def seen_at(self, y: str) -> set[int]:
        return set().union(*(self.at.get(u, ()) for u in prefixes(y)))

    def load_after(self, obj: int, v: str) -> int:
        worst = len(self.seen_at(v) | {obj})
        for w in self.at:
            if len(w) > len(v) and w.startswith(v):
                worst = max(worst, len(self.seen_at(w) | {obj}))
        return worst

    def add(self, obj: int, v: str) -> None:
        self.at[v].add(obj)


def random_stream(rng: random.Random, n: int, depth: int, length: int) -> list[Declaration]:
    """Random declaration stream with at most ``n`` objects simple at any vertex.

    Vertices cluster around earlier ones and objects are often reused, so
    subtrees fill up and the allocator has to escalate.
    """
    index = _LoadIndex()
    stream: list[Declaration] = []
    fresh = 0

    def offer(obj: int, v: str) -> None:
        if index.load_after(obj, v) <= n:
            index.add(obj, v)
            stream.append((obj, v))

    while len(stream) < length:
        before = len(stream)
        roll = rng.random()
        if stream and roll < 0.25:
            # burst: fresh objects spread below one vertex, then one above it
            base = rng.choice(stream)[1][: rng.randint(0, depth)]
            for _ in range(rng.randint(2, 3 * n + 2)):
                extra = rng.randint(1, min(6, depth - len(base))) if len(base) < depth else 0
                tail = format(rng.getrandbits(extra), f"0{extra}b") if extra else ""
                offer(fresh, base + tail)
                fresh += 1
            offer(fresh, base[: rng.randint(0, len(base))])
            fresh += 1
        else:
            if stream and roll < 0.75:
                base = rng.choice(stream)[1]
                cut = rng.randint(max(0, len(base) - 2), len(base))
                extra = rng.randint(0, min(4, depth - cut))
                v = base[:cut] + (format(rng.getrandbits(extra), f"0{extra}b") if extra else "")
            else:
                size = rng.randint(0, depth)
                v = format(rng.getrandbits(size), f"0{size}b") if size else ""
            if stream and rng.random() < 0.35:
                obj = rng.choice(stream)[0]
            else:
                obj, fresh = fresh, fresh + 1
            offer(obj, v)
        if len(stream) == before and rng.random() < 0.05:
            break
    return stream[:length]


def dumps_stream(stream: Iterable[Declaration]) -> str:
    return "".join(f"{obj}\t{v or '-'}\n" for obj, v in stream)


def loads_stream(text: str) -> list[Declaration]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'object vertex'")
        v = "" if parts[1] == "-" else check_vertex(parts[1])
        out.append((int(parts[0]), v))
    return out


# ---------------------------------------------------------------------------
# The layered allocator.

class Rejected(RuntimeError):
    """Every layer rejected a request."""


@dataclass
class LayerState:
    N: int
    served: list[tuple[int, str, int]] = field(default_factory=list)  # (obj, vertex, id)
    # obj -> {id} for entries exactly at a vertex, and for entries at or below it
    _at: dict = field(default_factory=lambda: defaultdict(dict))
    _below: dict = field(default_factory=lambda: defaultdict(dict))

    def visible(self, v: str) -> dict[int, int]:
        """Objects served at vertices comparable with ``v``, with their ids."""
        out = dict(self._below.get(v, {}))
        for u in prefixes(v, proper=True):
            out.update(self._at.get(u, {}))
        return out

    def record(self, obj: int, v: str, d: int) -> None:
        self.served.append((obj, v, d))
        self._at[v][obj] = d
        for u in prefixes(v):
            self._below[u][obj] = d


def is_acceptable(layer: LayerState, obj: int, v: str) -> bool:
    objs = layer.visible(v)
    return len(objs) < layer.N or (len(objs) == layer.N and obj in objs)


def serve_in_layer(layer: LayerState, obj: int, v: str) -> int | None:
    """Serve at ``v`` with an id from the bijection at the highest acceptable ancestor."""
    if not is_acceptable(layer, obj, v):
        return None
    anchor = v
    for u in reversed(list(prefixes(v, proper=True))):
        if not is_acceptable(layer, obj, u):
            break
        anchor = u
    objs = layer.visible(anchor)
    if obj in objs:
        d = objs[obj]
    else:
        used = set(objs.values())
        d = next(i for i in range(layer.N) if i not in used)
    layer.record(obj, v, d)
    return d


@dataclass(frozen=True)
class AllocatorConfig:
    n: int
    N: int | None = None
    layers: int | None = None
    depth: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.N is None:
            object.__setattr__(self, "N", 3 * self.n)
        if self.layers is None:
            object.__setattr__(self, "layers", self.n + 2)
        if self.depth is None:
            object.__setattr__(self, "depth", depth_max())
        if self.depth > depth_max():
            raise ValueError(f"depth {self.depth} exceeds {depth_max()}")


class Allocator:
    def __init__(self, config: AllocatorConfig):
        self.config = config
        self.layers = [LayerState(config.N) for _ in range(config.layers)]
        self.events: list[dict] = []
        self.assignments: list[tuple[int, str, int, int]] = []  # (obj, v, layer, id)

    def request(self, obj: int, v: str) -> tuple[int, int]:
        check_vertex(v, self.config.depth)
        self.events.append({"event": "declare", "object": obj, "vertex": v})
        for i, layer in enumerate(self.layers):
            d = serve_in_layer(layer, obj, v)
            if d is not None:
                self.events.append({"event": "serve", "object": obj, "vertex": v,
                                    "layer": i, "description": d})
                self.assignments.append((obj, v, i, d))
                return i, d
            self.events.append({"event": "reject", "object": obj, "vertex": v, "layer": i})
            if i + 1 < len(self.layers):
                self.events.append({"event": "escalate", "object": obj, "vertex": v, "layer": i + 1})
        raise Rejected(f"object {obj} at {v!r} rejected by all {len(self.layers)} layers")


def serve_request(layers: Sequence[LayerState], obj: int, v: str) -> tuple[int, int]:
    for i, layer in enumerate(layers):
        d = serve_in_layer(layer, obj, v)
        if d is not None:
            return i, d
    raise Rejected(f"object {obj} at {v!r} rejected by every layer")


def layer_violations(layer: LayerState) -> list[str]:
    """Recheck the layer invariant from the raw ``served`` list."""
    at: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for obj, v, d in layer.served:
        at[v].append((obj, d))

    def bijective(pairs) -> bool:
        fwd, back = {}, {}
        for obj, d in pairs:
            if fwd.setdefault(obj, d) != d or back.setdefault(d, obj) != obj:
                return False
        return True

    bad = []
    for w in at:
        if not bijective(p for u in prefixes(w) for p in at.get(u, ())):
            bad.append(f"path to {w!r} is not a bijection")
    # Between branch points and served vertices the comparable entries do not
    # change, so those vertices (and the root) are the only ones to check.
    support = {u for w in at for u in prefixes(w)}
    keys = {u for u in support if u in at or (u + "0" in support and u + "1" in support)}
    keys.add("")
    below: dict[str, list[tuple[int, int]]] = {}
    for u in sorted(support, key=len, reverse=True):
        below[u] = list(at.get(u, ())) + below.get(u + "0", []) + below.get(u + "1", [])
    for u in keys:
        pairs = below.get(u, []) + [p for a in prefixes(u, proper=True) for p in at.get(a, ())]
        if len({obj for obj, _ in pairs}) <= layer.N and not bijective(pairs):
            bad.append(f"regular vertex {u!r} has no bijection")
    return bad


def verify_layer(layer: LayerState) -> bool:
    return not layer_violations(layer)


def escalation_witness_violations(events: Sequence[dict]) -> list[dict]:
    """Rejections at layer l > 0 lacking an earlier layer-(l-1) rejection of a
    different object at an extension of the same vertex."""
    bad = []
    rejects: list[dict] = []
    for e in events:
        if e["event"] != "reject":
            continue
        if e["layer"] > 0:
            ok = any(r["layer"] == e["layer"] - 1 and r["object"] != e["object"]
                     and is_prefix(e["vertex"], r["vertex"]) for r in rejects)
            if not ok:
                bad.append(e)
        rejects.append(e)
    return bad


def run_allocator(config: AllocatorConfig, stream: Iterable[Declaration],
                  check: bool = True) -> tuple[Allocator, list[str]]:
    """Feed the stream, verifying the serving layer after every request."""
    alloc = Allocator(config)
    problems = []
    for obj, v in stream:
        i, _ = alloc.request(obj, v)
        if check:
            problems += [f"layer {i}: {p}" for p in layer_violations(alloc.layers[i])]
    return alloc, problems


C_ENC = 4


def k_of(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    return n.bit_length() - 1


def encode_description(k: int, layer: int, d: int) -> str:
    width = k + 2
    if not (0 <= layer < 2 ** width and 0 <= d < 2 ** width):
        raise ValueError(f"layer {layer} or id {d} does not fit in {width} bits")
    return format(layer, f"0{width}b") + format(d, f"0{width}b")


def allocator_to_mode(config: AllocatorConfig, stream: Iterable[Declaration]) -> DescriptionMode:
    """Run the allocator and turn each served request into a mode triple.

    The description is the layer index followed by the pool id, each in
    ``k + 2`` bits, so every description has length ``2k + 4``.
    """
    alloc, _ = run_allocator(config, stream, check=False)
    return assignments_to_mode(k_of(config.n), alloc.assignments, config.depth)


def assignments_to_mode(k: int, assignments, depth: int | None = None) -> DescriptionMode:
    triples = [(encode_description(k, i, d), v, format(obj, "b")) for obj, v, i, d in assignments]
    return make_mode(triples, depth)


# ---------------------------------------------------------------------------
# The adversary forcing long descriptions.

class BudgetViolation(AssertionError):
    """The adversary itself exceeded its per-vertex declaration budget."""


@dataclass(frozen=True)
class GoalAchieved:
    obj: int
    vertex: str
    kind: str = "goal"


@dataclass(frozen=True)
class AssignerContradiction:
    reason: str
    kind: str = "contradiction"


@dataclass(frozen=True)
class StrategyExhausted:
    reason: str
    kind: str = "exhausted"


class _Stop(Exception):
    def __init__(self, outcome):
        self.outcome = outcome


class AdversaryView:
    """Declarations and allocations so far, with a legality index."""

    def __init__(self, n: int, c: int, depth: int):
        self.n, self.c, self.depth = n, c, depth
        self.max_len = 2 * n - c
        self.budget = 2 ** (n - 1)
        self.declared = _LoadIndex()
        self.allocations: list[tuple[str, int, str]] = []  # (description, obj, vertex)
        self._at: dict[str, dict[str, int]] = defaultdict(dict)
        self._below: dict[str, dict[str, set[int]]] = defaultdict(lambda: defaultdict(set))

    def descriptions(self) -> Iterable[str]:
        return all_strings(self.max_len) if self.max_len >= 0 else ()

    def conflict(self, desc: str, obj: int, v: str) -> str | None:
        if len(desc) > self.max_len:
            return f"description {desc!r} longer than {self.max_len}"
        for u in prefixes(v):
            other = self._at[desc].get(u)
            if other is not None and other != obj:
                return f"{desc!r} already allocated to {other} at {u!r}"
        others = self._below[desc].get(v, set()) - {obj}
        if others:
            return f"{desc!r} already allocated to {min(others)} below {v!r}"
        return None

    def is_legal(self, desc: str, obj: int, v: str) -> bool:
        return self.conflict(desc, obj, v) is None

    def allocate(self, desc: str, obj: int, v: str) -> None:
        self.allocations.append((desc, obj, v))
        self._at[desc].setdefault(v, obj)
        for u in prefixes(v):
            self._below[desc][u].add(obj)

    def descriptions_of(self, obj: int, v: str) -> set[str]:
        return {d for d, o, w in self.allocations if o == obj and is_prefix(w, v)}


class Assigner(Protocol):
    name: str

    def respond(self, view: AdversaryView, obj: int, v: str) -> list[tuple[str, str]]: ...


class SilentAssigner:
    name = "silent"

    def respond(self, view, obj, v):
        return []


class GreedyAssigner:
    """Shortest legal description, allocated at the declared vertex itself."""

    name = "greedy"

    def respond(self, view, obj, v):
        if view.descriptions_of(obj, v):
            return []
        for d in view.descriptions():
            if view.is_legal(d, obj, v):
                return [(d, v)]
        return []


class RandomAssigner:
    """A random legal (description, prefix of the vertex) pair, when one exists."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def respond(self, view, obj, v):
        if view.descriptions_of(obj, v) and self.rng.random() < 0.5:
            return []
        descs = list(view.descriptions())
        self.rng.shuffle(descs)
        spots = [v] * 3 + list(prefixes(v))
        for d in descs:
            w = self.rng.choice(spots)
            if view.is_legal(d, obj, w):
                return [(d, w)]
            if view.is_legal(d, obj, v):
                return [(d, v)]
        return []


class ScriptedAssigner:
    """Replays responses from a JSONL file: one list of [description, vertex] per declaration."""

    name = "scripted"

    def __init__(self, responses: Sequence[Sequence[Sequence[str]]]):
        self._responses = list(responses)
        self._i = 0

    @classmethod
    def from_file(cls, path) -> "ScriptedAssigner":
        lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
        responses = [json.loads(ln) for ln in lines]
        for i, resp in enumerate(responses, 1):
            if not isinstance(resp, list) or not all(
                    isinstance(a, list) and len(a) == 2 and all(isinstance(s, str) for s in a)
                    for a in resp):
                raise ValueError(f"line {i}: expected a list of [description, vertex] pairs")
        return cls(responses)

    def respond(self, view, obj, v):
        if self._i >= len(self._responses):
            return []
        resp = self._responses[self._i]
        self._i += 1
        return [(d, w) for d, w in resp]


ASSIGNERS: dict[str, Callable[..., Assigner]] = {
    "silent": SilentAssigner,
    "greedy": GreedyAssigner,
    "random": RandomAssigner,
}
SHIPPED_ASSIGNERS = ("silent", "greedy", "random")


def make_assigner(name: str, seed: int = 0) -> Assigner:
    if name in ASSIGNERS:
        return RandomAssigner(seed) if name == "random" else ASSIGNERS[name]()
    if Path(name).is_file():
        return ScriptedAssigner.from_file(name)
    raise ValueError(f"unknown assigner {name!r}; choose from {sorted(ASSIGNERS)} or a file")


@dataclass
class AdversaryResult:
    outcome: GoalAchieved | AssignerContradiction | StrategyExhausted
    events: list[dict]
    max_load: int
    budget: int
    objects_used: int
    collisions: int
    stages: int

    def records(self) -> list[dict]:
        summary = {"event": "result", "outcome": self.outcome.kind,
                   "max_load": self.max_load, "budget": self.budget,
                   "objects": self.objects_used, "collisions": self.collisions,
                   "stages": self.stages}
        if isinstance(self.outcome, GoalAchieved):
            summary.update(object=self.outcome.obj, vertex=self.outcome.vertex)
        else:
            summary["reason"] = self.outcome.reason
        return self.events + [summary]


class _Adversary:
    def __init__(self, n: int, assigner: Assigner, c: int, depth: int, leaf_cap: int):
        self.view = AdversaryView(n, c, depth)
        self.assigner = assigner
        self.events: list[dict] = []
        self.fresh = 0
        self.max_load = 0
        self.collisions = 0
        self.leaf_cap = leaf_cap
        self.band = 2 * n

    def new_object(self) -> int:
        self.fresh += 1
        return self.fresh - 1

    def declare(self, obj: int, v: str) -> None:
        view = self.view
        load = view.declared.load_after(obj, v)
        if load > view.budget:
            raise BudgetViolation(f"declaring {obj} at {v!r} gives load {load} > {view.budget}")
        view.declared.add(obj, v)
        self.max_load = max(self.max_load, load)
        self.events.append({"event": "declare", "object": obj, "vertex": v})
        for desc, w in self.assigner.respond(view, obj, v):
            why = None
            try:
                check_vertex(w, view.depth)
            except (ValueError, TypeError) as err:
                why = str(err)
            if why is None and not (isinstance(desc, str) and not desc.strip("01")):
                why = f"not a description: {desc!r}"
            why = why or view.conflict(desc, obj, w)
            if why:
                self.events.append({"event": "illegal", "object": obj, "vertex": w,
                                    "description": desc, "reason": why})
                raise _Stop(AssignerContradiction(why))
            view.allocate(desc, obj, w)
            self.events.append({"event": "allocate", "object": obj, "vertex": w, "description": desc})
        if not view.descriptions_of(obj, v):
            raise _Stop(GoalAchieved(obj, v))

    def amplify(self, r: str, t: int) -> tuple[str, int]:
        """Return (w, z): only z (plus reserved objects) is simple at w, and z
        holds at least t + 1 distinct descriptions there."""
        seen: dict[str, tuple[str, int]] = {}
        for s in strings_of_length(self.band):
            u = r + s
            if t == 1:
                z = self.new_object()
                self.declare(z, u)
                w = u
            else:
                w, z = self.amplify(u, t - 1)
            d = min(self.view.descriptions_of(z, u), key=lambda p: (len(p), p))
            if d in seen:
                self.collisions += 1
                self.events.append({"event": "collision", "description": d, "vertex": u,
                                    "object": z, "partner": seen[d][1], "partner_vertex": seen[d][0],
                                    "root": r})
                self.declare(z, r)
                return w, z
            seen[d] = (u, z)
        raise BudgetViolation(f"no collision among level-{self.band} vertices under {r!r}")

    def levels_that_fit(self, root: str, reserved: int) -> int:
        t = 0
        while (t + 2 + reserved <= self.view.budget
               and len(root) + self.band * (t + 1) <= self.view.depth
               and 2 ** min(64, (self.view.max_len + 1) * (t + 1)) <= self.leaf_cap):
            t += 1
        return t


def run_adversary(n: int, assigner: Assigner, c: int = 6, depth: int | None = None,
                  leaf_cap: int = 4096) -> AdversaryResult:
    """Declare objects so that some declaration is left without a short description.

    Stages: amplify at the current root as many levels as budget and depth
    allow, keep the winning object reserved at the vertex it returns, and
    repeat there with fresh objects. A finisher then declares fresh objects
    at the last vertex while the budget lasts.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if c < 1:
        raise ValueError("the gap constant c must be at least 1")
    depth = depth_max() if depth is None else depth
    if depth > depth_max():
        raise ValueError(f"depth {depth} exceeds {depth_max()}")
    adv = _Adversary(n, assigner, c, depth, leaf_cap)
    root, reserved, stages = "", [], 0
    try:
        for _ in range(max(1, 2 ** (n - 2))):
            t = adv.levels_that_fit(root, len(reserved))
            if t < 1:
                break
            stages += 1
            adv.events.append({"event": "stage", "vertex": root, "levels": t, "reserved": list(reserved)})
            root, z = adv.amplify(root, t)
            reserved.append(z)
        while adv.view.declared.load_after(adv.fresh, root) <= adv.view.budget:
            adv.declare(adv.new_object(), root)
        outcome = StrategyExhausted(f"budget {adv.view.budget} used up at {root!r}")
    except _Stop as stop:
        outcome = stop.outcome
    return AdversaryResult(outcome, adv.events, adv.max_load, adv.view.budget,
                           adv.fresh, adv.collisions, stages)


def adversary_load_violations(events: Sequence[dict], budget: int) -> list[str]:
    """Replay declarations and report any vertex carrying more than ``budget`` objects."""
    index = _LoadIndex()
    bad = []
    for e in events:
        if e["event"] == "declare":
            load = index.load_after(e["object"], e["vertex"])
            index.add(e["object"], e["vertex"])
            if load > budget:
                bad.append(f"{e['vertex']!r} carries {load} objects")
    return bad


def allocation_conflicts(events: Sequence[dict]) -> list[str]:
    """Descriptions shared by different objects at comparable vertices in a transcript."""
    allocs = [(e["description"], e["object"], e["vertex"]) for e in events if e["event"] == "allocate"]
    bad = []
    for i, (d, o, v) in enumerate(allocs):
        for d2, o2, v2 in allocs[:i]:
            if d == d2 and o != o2 and (is_prefix(v, v2) or is_prefix(v2, v)):
                bad.append(f"{d!r} given to {o2} at {v2!r} and {o} at {v!r}")
    return bad
