"""A prefix-stable labeller that beats every finite team of prefix-free opponents.

The builder places labels on tree vertices; a label at ``v`` also holds on all
extensions of ``v``, so comparable labelled vertices must carry equal labels.
Opponent ``j`` places labels too, but her domain must stay prefix-free. The
builder beats the team ``0..i-1`` when one of its labels ``y`` at ``v`` is never
matched by a team member placing ``y`` at ``v`` or at a prefix of ``v``.

Subtree ``T_i`` (rooted at ``1^i 0``) is reserved for beating the first ``i``
opponents. Inside a subtree the builder puts a fresh label far down the
``1 1 1 ...`` spine and climbs one step whenever an opponent copies it exactly.
An opponent who answers at a proper prefix can never label inside that
prefix again, so the builder restarts, with one opponent fewer, in the
subtree hanging off the spine next to its current target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

from .tree import (
    are_compatible,
    check_bits,
    check_vertex,
    extensions_up_to,
    find_prefix_pair,
    is_prefix,
    NotPrefixFreeError,
    prefixes,
    sibling,
)

BUILDER = "builder"


class DepthExhausted(RuntimeError):
    """The tree is too shallow for the builder's strategy."""


class IllegalOpponentMove(ValueError):
    """An opponent labelled two comparable vertices."""


def prefix_stable_extension(f: Mapping[str, str], depth: int) -> dict[str, str]:
    """Extend a prefix-free partial map to every extension up to ``depth``."""
    pair = find_prefix_pair(f)
    if pair is not None:
        raise NotPrefixFreeError(*pair)
    g = {}
    for u, y in f.items():
        check_vertex(u, depth)
        for x in extensions_up_to(u, depth):
            g[x] = y
    return g


def is_prefix_stable(labels: Iterable[tuple[str, str]]) -> bool:
    return not prefix_stability_violations(labels)


def prefix_stability_violations(labels: Iterable[tuple[str, str]]) -> list[tuple[str, str]]:
    at: dict[str, set[str]] = {}
    for v, y in labels:
        at.setdefault(v, set()).add(y)
    bad = []
    for v, ys in at.items():
        if len(ys) > 1:
            bad.append((v, v))
        for u in prefixes(v, proper=True):
            if u in at and at[u] != ys:
                bad.append((u, v))
    return bad


def split_subtrees(depth: int) -> list[str]:
    """Roots ``1^i 0`` of the subtrees ``T_0, T_1, ...`` that fit in ``depth``."""
    return ["1" * i + "0" for i in range(depth)]


@dataclass(frozen=True)
class Emission:
    round: int
    actor: str | int
    vertex: str
    label: str


class GameView:
    """What opponents may look at: the public transcript so far."""

    def __init__(self, depth: int):
        self.depth = depth
        self.emissions: list[Emission] = []

    def builder_moves(self) -> list[Emission]:
        return [e for e in self.emissions if e.actor == BUILDER]

    def own(self, actor: int) -> list[Emission]:
        return [e for e in self.emissions if e.actor == actor]

    def legal_for(self, actor: int, vertex: str) -> bool:
        if len(vertex) > self.depth:
            return False
        return not any(are_compatible(vertex, e.vertex) for e in self.own(actor))


# Opponents. Each poll returns at most one (vertex, label) emission.

class Opponent(Protocol):
    name: str

    def respond(self, view: GameView, me: int) -> tuple[str, str] | None: ...


class Silent:
    name = "silent"

    def respond(self, view, me):
        return None


class _Reactive:
    """Works through the builder's placements in order, one per poll."""

    name = "reactive"

    def __init__(self):
        self._cursor = 0

    def respond(self, view, me):
        moves = view.builder_moves()
        while self._cursor < len(moves):
            e = moves[self._cursor]
            self._cursor += 1
            out = self.react(view, me, e)
            if out is not None:
                return out
        return None

    def react(self, view, me, e):
        raise NotImplementedError


class Replicator(_Reactive):
    """Copies each builder label at the same vertex whenever that is legal."""

    name = "replicator"

    def react(self, view, me, e):
        if view.legal_for(me, e.vertex):
            return e.vertex, e.label
        return None


class Sniper(_Reactive):
    """Answers each builder label at the deepest legal proper prefix."""

    name = "sniper"

    def react(self, view, me, e):
        for z in reversed(list(prefixes(e.vertex, proper=True))):
            if view.legal_for(me, z):
                return z, e.label
        return None


class RandomLegal(_Reactive):
    """Seeded mixture of copying, sniping, deeper copies and noise."""

    name = "random"

    def __init__(self, seed: int = 0):
        super().__init__()
        self.rng = random.Random(seed)

    def react(self, view, me, e):
        roll = self.rng.random()
        if roll < 0.35:
            cands = [e.vertex]
        elif roll < 0.7:
            cands = list(prefixes(e.vertex, proper=True))
            self.rng.shuffle(cands)
        elif roll < 0.85:
            extra = self.rng.randint(1, 3)
            cands = [(e.vertex + format(self.rng.getrandbits(extra), f"0{extra}b"))]
        else:
            n = self.rng.randint(0, view.depth)
            noise = format(self.rng.getrandbits(n), f"0{n}b") if n else ""
            return (noise, e.label) if view.legal_for(me, noise) else None
        for v in cands:
            if view.legal_for(me, v):
                return v, e.label
        return None


class Cheater(_Reactive):
    """Copies every builder label, legal or not. Used as a negative fixture."""

    name = "cheater"

    def react(self, view, me, e):
        return e.vertex, e.label


OPPONENT_ZOO = {
    "silent": Silent,
    "replicator": Replicator,
    "sniper": Sniper,
    "random": RandomLegal,
    "cheater": Cheater,
}

SHIPPED_TEAM_MEMBERS = ("replicator", "sniper", "silent", "random")


def make_opponent(name: str, seed: int = 0) -> Opponent:
    if name not in OPPONENT_ZOO:
        raise ValueError(f"unknown opponent {name!r}; choose from {sorted(OPPONENT_ZOO)}")
    cls = OPPONENT_ZOO[name]
    return cls(seed) if cls is RandomLegal else cls()


# Builder.

@dataclass
class Frame:
    """One attempt inside a subtree: a label climbing the spine under ``root``."""

    tree: int
    root: str
    team: frozenset[int]
    spine: int
    label: str
    step: int = 0

    @property
    def target(self) -> str:
        if not self.team:
            return self.root
        return self.root + "1" * (self.spine - self.step)


@dataclass
class BuilderState:
    depth: int
    team_size: int
    labels: list[tuple[str, str]] = field(default_factory=list)
    frames: list[Frame] = field(default_factory=list)
    notes: list[dict] = field(default_factory=list)
    counter: int = 0

    def fresh_label(self) -> str:
        label = format(self.counter, "b")
        self.counter += 1
        return label


def spine_length(team: int) -> int:
    return team + 2


def required_depth(team_size: int) -> int:
    """Deepest vertex the strategy can touch when beating ``team_size`` opponents."""
    worst = 0
    for i in range(team_size + 1):
        d = i + 1
        for a in range(i, 0, -1):
            d += spine_length(a)
        worst = max(worst, d)
    return worst


def _new_frame(state: BuilderState, tree: int, root: str, team: frozenset[int]) -> Frame:
    frame = Frame(tree, root, team, spine_length(len(team)), state.fresh_label())
    if len(frame.target) > state.depth:
        raise DepthExhausted(f"target {frame.target!r} below depth {state.depth}")
    return frame


def builder_start(state: BuilderState) -> list[tuple[str, str]]:
    placed = []
    roots = split_subtrees(state.depth)
    if state.team_size >= len(roots):
        raise DepthExhausted(f"no subtree T_{state.team_size} within depth {state.depth}")
    for i in range(state.team_size + 1):
        frame = _new_frame(state, i, roots[i], frozenset(range(i)))
        state.frames.append(frame)
        placed.append((frame.target, frame.label))
    state.labels += placed
    return placed


def builder_move(state: BuilderState, events: Sequence[Emission]) -> list[tuple[str, str]]:
    """React to new opponent emissions; return the labels to place now."""
    placed = []
    for e in events:
        for k, frame in enumerate(state.frames):
            if e.label != frame.label or e.actor not in frame.team:
                continue
            target = frame.target
            if not is_prefix(e.vertex, target):
                continue
            if e.vertex == target:
                frame.step += 1
                if frame.step >= frame.spine:
                    raise RuntimeError(f"spine of tree {frame.tree} exhausted")
                placed.append((frame.target, frame.label))
            else:
                rest = frame.team - {e.actor}
                new = _new_frame(state, frame.tree, sibling(target), rest)
                state.frames[k] = new
                state.notes.append({"tree": frame.tree, "intruder": e.actor, "at": e.vertex,
                                    "recurse_into": new.root, "team": sorted(rest)})
                placed.append((new.target, new.label))
    state.labels += placed
    return placed


# The game loop.

@dataclass
class GameResult:
    verdict: str  # "won", "lost" or "undecided"
    team_size: int
    beaten: list[bool]
    rounds: int
    emissions: list[Emission]
    disqualified: list[int]
    notes: list[dict]
    violations: list[str]

    @property
    def won(self) -> bool:
        return self.verdict == "won"

    def records(self) -> list[dict]:
        out = [{"round": e.round, "actor": e.actor, "vertex": e.vertex, "label": e.label}
               for e in self.emissions]
        out.append({"verdict": self.verdict, "team": self.team_size, "beaten": self.beaten,
                    "rounds": self.rounds, "disqualified": self.disqualified,
                    "recursions": self.notes, "violations": self.violations})
        return out


def team_beaten(emissions: Sequence[Emission], size: int) -> bool:
    """Some builder label is never matched at its vertex or a prefix by actors < size."""
    answered: dict[str, set[str]] = {}
    for e in emissions:
        if e.actor != BUILDER and e.actor < size:
            answered.setdefault(e.label, set()).add(e.vertex)
    for e in emissions:
        if e.actor == BUILDER:
            hits = answered.get(e.label, ())
            if not any(is_prefix(z, e.vertex) for z in hits):
                return True
    return False


def game_violations(emissions: Sequence[Emission], team_size: int) -> list[str]:
    bad = [f"builder labels clash at {u!r}/{v!r}"
           for u, v in prefix_stability_violations((e.vertex, e.label) for e in emissions
                                                    if e.actor == BUILDER)]
    for a in range(team_size):
        pair = find_prefix_pair(e.vertex for e in emissions if e.actor == a)
        dup = [e.vertex for e in emissions if e.actor == a]
        if pair is not None or len(dup) != len(set(dup)):
            bad.append(f"opponent {a} domain not prefix-free")
    return bad


def run_beating_game(opponents: Sequence[Opponent], depth: int, max_rounds: int = 10_000,
                     check: bool = True) -> GameResult:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    team = len(opponents)
    view = GameView(depth)
    state = BuilderState(depth, team)
    active = list(range(team))
    disqualified: list[int] = []
    violations: list[str] = []

    def record(rnd, actor, vertex, label):
        e = Emission(rnd, actor, vertex, label)
        view.emissions.append(e)
        if check:
            violations.extend(game_violations(view.emissions, team))
        return e

    for v, y in builder_start(state):
        record(0, BUILDER, v, y)

    rnd = 0
    quiet = False
    while rnd < max_rounds and not quiet:
        rnd += 1
        fresh = []
        for a in list(active):
            move = opponents[a].respond(view, a)
            if move is None:
                continue
            v, y = move
            try:
                check_bits(v)
                check_bits(y)
                if not view.legal_for(a, v):
                    raise IllegalOpponentMove(f"opponent {a} cannot label {v!r}")
            except (ValueError, IllegalOpponentMove):
                active.remove(a)
                disqualified.append(a)
                continue
            fresh.append(record(rnd, a, v, y))
        placed = builder_move(state, fresh)
        for v, y in placed:
            record(rnd, BUILDER, v, y)
        quiet = not fresh and not placed

    beaten = [team_beaten(view.emissions, j) for j in range(team + 1)]
    if not quiet:
        verdict = "undecided"
    else:
        verdict = "won" if beaten[team] else "lost"
    return GameResult(verdict, team, beaten, rnd, view.emissions, disqualified,
                      state.notes, violations)


def path_load(emissions: Sequence[Emission], team_size: int) -> int:
    """Most team emissions lying on a single branch."""
    team_vs = [e.vertex for e in emissions if e.actor != BUILDER and e.actor < team_size]
    return max((sum(is_prefix(u, w) for u in team_vs) for w in team_vs), default=0)


def labels_fresh(emissions: Sequence[Emission]) -> bool:
    """Each builder label lives on a single spine (its vertices form a chain)."""
    by_label: dict[str, list[str]] = {}
    for e in emissions:
        if e.actor == BUILDER:
            by_label.setdefault(e.label, []).append(e.vertex)
    for vs in by_label.values():
        for u in vs:
            for w in vs:
                if not are_compatible(u, w):
                    return False
    return True


def team_from_names(names: Sequence[str], seed: int = 0) -> list[Opponent]:
    rng = random.Random(seed)
    return [make_opponent(n, rng.getrandbits(32)) for n in names]
