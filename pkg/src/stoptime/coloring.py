"""Online antichain colouring on the binary tree.

Alice marks vertices so that no branch carries more than ``k`` marks; Bob
colours each new mark with one of ``1..k`` so that comparable vertices get
different colours. Two Bob strategies are provided: first-fit, and the
rank-based strategy that keeps the number of colours in every subtree equal to
its marked rank.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Protocol

from .tree import check_vertex, is_prefix, path_to_root, prefixes, sibling


class PathBudgetExceeded(ValueError):
    """Alice tried to put more than ``k`` marks on one branch."""


class ColoringFailure(RuntimeError):
    """Bob found no admissible colour (a strategy invariant was broken)."""


class ColoringGame:
    """Marked/coloured tree with cached marked ranks and subtree colour sets."""

    def __init__(self, k: int, depth: int | None = None):
        if k < 1:
            raise ValueError(f"colour budget must be positive, got {k}")
        self.k = k
        self.depth = depth
        self.marked: set[str] = set()
        self.color_of: dict[str, int] = {}
        self.order: list[str] = []
        # Only vertices with a marked descendant (or self) have entries.
        self._rank: dict[str, int] = {}
        self._colors: dict[str, set[int]] = defaultdict(set)
        self._stop: str | None = None

    def __repr__(self):
        return f"ColoringGame(k={self.k}, marks={len(self.marked)})"

    # cached quantities

    def rank(self, v: str) -> int:
        return self._rank.get(v, 0)

    def colors_below(self, v: str) -> frozenset[int]:
        return frozenset(self._colors.get(v, ()))

    def marked_ancestors(self, v: str) -> int:
        return sum(u in self.marked for u in prefixes(v, proper=True))

    def can_mark(self, v: str) -> bool:
        return v not in self.marked and self.marked_ancestors(v) + 1 + self.rank(v) <= self.k

    # moves

    def mark(self, v: str) -> None:
        check_vertex(v, self.depth)
        if v in self.marked:
            raise PathBudgetExceeded(f"{v!r} is already marked")
        through = self.marked_ancestors(v) + 1 + self.rank(v)
        if through > self.k:
            raise PathBudgetExceeded(f"marking {v!r} puts {through} marks on a branch (k={self.k})")
        if self.order and self.order[-1] not in self.color_of:
            raise ValueError("previous mark is still uncoloured")
        self.marked.add(v)
        self.order.append(v)
        self._stop = self._raise_ranks(v)

    def _raise_ranks(self, v: str) -> str | None:
        """Recompute ranks upward from a new mark at ``v``.

        Returns the first proper ancestor whose rank did not change, or None
        when the increase reached the root.
        """
        self._rank[v] = self.rank(v) + 1
        w = v
        while w:
            w = w[:-1]
            new = max(self.rank(w + "0"), self.rank(w + "1")) + (w in self.marked)
            if new == self.rank(w):
                return w
            self._rank[w] = new
        return None

    def assign(self, v: str, color: int) -> None:
        if v not in self.marked or v in self.color_of:
            raise ValueError(f"{v!r} is not a marked uncoloured vertex")
        if not 1 <= color <= self.k:
            raise ColoringFailure(f"colour {color} outside 1..{self.k} for {v!r}")
        self.color_of[v] = color
        for u in path_to_root(v):
            self._colors[u].add(color)

    def comparable_colors(self, v: str) -> set[int]:
        above = {self.color_of[u] for u in prefixes(v, proper=True) if u in self.color_of}
        return above | self._colors.get(v, set())

    def color_first_fit(self, v: str) -> int:
        """Lowest colour not used on any vertex comparable with ``v``."""
        used = self.comparable_colors(v)
        color = next(c for c in range(1, len(used) + 2) if c not in used)
        if color > self.k:
            raise ColoringFailure(f"first-fit needs colour {color} > k={self.k} at {v!r}")
        self.assign(v, color)
        return color

    def color_rank_based(self, v: str) -> int:
        """Pick a colour that keeps |colours below x| == rank(x) everywhere.

        If the rank increase from the new mark reached the root, any colour
        missing from the root's set works; take the lowest. Otherwise, at the
        first ancestor where the rank stayed put, the child on the other side
        has strictly more colours than the child on ``v``'s side; use one of
        the extra colours.
        """
        if v != self.order[-1] or v in self.color_of:
            raise ValueError(f"{v!r} is not the pending mark")
        stop = self._stop
        if stop is None:
            used = self._colors.get("", set())
            color = next(c for c in range(1, len(used) + 2) if c not in used)
        else:
            near = v[: len(stop) + 1]
            spare = self.colors_below(sibling(near)) - self.colors_below(near)
            if not spare:
                raise ColoringFailure(f"no spare colour under {stop!r} for {v!r}")
            color = min(spare)
        if color > self.k:
            raise ColoringFailure(f"rank strategy needs colour {color} > k={self.k}")
        self.assign(v, color)
        return color

    def play(self, v: str, strategy: str = "first-fit") -> int:
        self.mark(v)
        if strategy == "first-fit":
            return self.color_first_fit(v)
        if strategy == "rank":
            return self.color_rank_based(v)
        raise ValueError(f"unknown strategy {strategy!r}")


STRATEGIES = ("first-fit", "rank")


def marked_rank(game: ColoringGame, v: str) -> int:
    return game.rank(v)


def brute_marked_rank(marked: Iterable[str], v: str) -> int:
    """Max marks on a downward path from ``v``, by checking every marked endpoint."""
    below = [w for w in marked if is_prefix(v, w)]
    return max((sum(is_prefix(u, w) for u in below) for w in below), default=0)


def verify_coloring(game: ColoringGame) -> bool:
    if set(game.color_of) != game.marked:
        return False
    for v, c in game.color_of.items():
        if not 1 <= c <= game.k:
            return False
        if any(game.color_of.get(u) == c for u in prefixes(v, proper=True)):
            return False
    return True


# Independent recomputation of subtree profiles, used to check the strategies'
# claims against the cached state.

@dataclass
class SubtreeProfile:
    rank: dict[str, int] = field(default_factory=dict)
    below: dict[str, frozenset[int]] = field(default_factory=dict)
    above: dict[str, frozenset[int]] = field(default_factory=dict)


def subtree_profile(game: ColoringGame) -> SubtreeProfile:
    """Ranks, colours below and colours strictly above, for every vertex on a
    path to a mark, plus the children of those vertices."""
    support = {u for v in game.marked for u in prefixes(v)}
    verts = set(support)
    for u in support:
        verts.add(u + "0")
        verts.add(u + "1")
    prof = SubtreeProfile()
    for u in sorted(verts, key=len, reverse=True):
        if u not in support:
            prof.rank[u], prof.below[u] = 0, frozenset()
            continue
        kids = [u + "0", u + "1"]
        r = max(prof.rank.get(c, 0) for c in kids)
        cs = set().union(*(prof.below.get(c, frozenset()) for c in kids))
        if u in game.marked:
            r += 1
            if u in game.color_of:
                cs.add(game.color_of[u])
        prof.rank[u], prof.below[u] = r, frozenset(cs)
    for u in sorted(verts, key=len):
        if not u:
            prof.above[u] = frozenset()
        else:
            p = u[:-1]
            extra = {game.color_of[p]} if p in game.color_of else set()
            prof.above[u] = prof.above[p] | extra
    return prof


def first_fit_violations(game: ColoringGame, prof: SubtreeProfile | None = None) -> list[str]:
    """Check the five first-fit properties; return a description of each failure."""
    prof = prof or subtree_profile(game)
    bad = []
    if not verify_coloring(game):
        bad.append("(i) comparable vertices share a colour")
    for v, c in game.color_of.items():
        around = game.comparable_colors(v) - {c}
        missing = [i for i in range(1, c) if i not in around]
        if missing:
            bad.append(f"(ii) {v!r} has colour {c} but colours {missing} are not comparable with it")
    for u in prof.below:
        t, p = prof.below[u], prof.above[u]
        if t & p:
            bad.append(f"(iii) T and P intersect at {u!r}")
        free = [c for c in range(1, game.k + len(p) + 2) if c not in p]
        if set(free[: len(t)]) != set(t):
            bad.append(f"(iii) colours below {u!r} are not an initial segment")
        if u + "0" in prof.below:
            a, b = prof.below[u + "0"], prof.below[u + "1"]
            if not (a <= b or b <= a):
                bad.append(f"(iv) children of {u!r} have incomparable colour sets")
        if len(t) != prof.rank[u]:
            bad.append(f"(v) {u!r} uses {len(t)} colours but has rank {prof.rank[u]}")
    return bad


def rank_invariant_violations(game: ColoringGame, prof: SubtreeProfile | None = None) -> list[str]:
    """|colours below x| == rank(x), checked on the cache and on a recomputation."""
    prof = prof or subtree_profile(game)
    bad = []
    for u in prof.below:
        if len(prof.below[u]) != prof.rank[u]:
            bad.append(f"recomputed: {u!r} has {len(prof.below[u])} colours, rank {prof.rank[u]}")
        if game.rank(u) != prof.rank[u]:
            bad.append(f"cached rank at {u!r} is {game.rank(u)}, expected {prof.rank[u]}")
        if game.colors_below(u) != prof.below[u]:
            bad.append(f"cached colour set at {u!r} differs")
    return bad


# Alice.

class Alice(Protocol):
    def next_move(self, game: ColoringGame) -> str | None: ...


class RandomAlice:
    """Marks uniformly random legal vertices (found by rejection sampling)."""

    def __init__(self, rng: random.Random, depth: int, moves: int, tries: int = 64):
        self.rng = rng
        self.depth = depth
        self.moves = moves
        self.tries = tries

    def _random_vertex(self) -> str:
        n = self.rng.randint(0, self.depth)
        return format(self.rng.getrandbits(n), f"0{n}b") if n else ""

    def next_move(self, game):
        if len(game.marked) >= self.moves:
            return None
        for _ in range(self.tries):
            v = self._random_vertex()
            if game.can_mark(v):
                return v
        return None


class TightAlice(RandomAlice):
    """Prefers moves that fill a branch up to the budget.

    Among a handful of random legal candidates, picks the one lying on the
    most crowded branch, and often marks ancestors or descendants of earlier
    marks. This stresses the cases where colours are forced.
    """

    def next_move(self, game):
        if len(game.marked) >= self.moves:
            return None
        cands = []
        for _ in range(self.tries):
            if game.marked and self.rng.random() < 0.6:
                base = self.rng.choice(game.order)
                if self.rng.random() < 0.5:
                    v = base[: self.rng.randint(0, len(base))]
                else:
                    extra = self.rng.randint(1, max(1, self.depth - len(base)))
                    v = base + format(self.rng.getrandbits(extra), f"0{extra}b")
                    v = v[: self.depth]
            else:
                v = self._random_vertex()
            if game.can_mark(v):
                cands.append(v)
            if len(cands) >= 6:
                break
        if not cands:
            return None
        return max(cands, key=lambda v: (game.marked_ancestors(v) + game.rank(v), v))


class ScriptedAlice:
    def __init__(self, moves: Iterable[str]):
        self._moves: Iterator[str] = iter(list(moves))

    def next_move(self, game):
        return next(self._moves, None)


def play_episode(game: ColoringGame, alice: Alice, strategy: str, on_move=None) -> ColoringGame:
    """Let Alice move until she passes; ``on_move(game, vertex, color)`` after each."""
    while True:
        v = alice.next_move(game)
        if v is None:
            return game
        color = game.play(v, strategy)
        if on_move is not None:
            on_move(game, v, color)


# Bound schedules to colour-indexed prefix-free families.

def schedule_levels(schedule: Iterable[tuple[str, int]]) -> dict[str, int]:
    """Final bound per vertex; an entry ``(v, b)`` asserts value(v) < b."""
    final: dict[str, int] = {}
    for v, b in schedule:
        final[v] = min(b, final.get(v, b))
    return final


def schedule_violations(schedule: Iterable[tuple[str, int]]) -> list[str]:
    """Branches carrying ``2^n`` or more vertices that qualify at level n.

    A vertex qualifies at level ``n`` once its bound is ``<= n`` (it is then
    known that its value is below n). Bounds must also only decrease.
    """
    bad = []
    last: dict[str, int] = {}
    for v, b in schedule:
        if b < 0:
            bad.append(f"negative bound {b} at {v!r}")
        if v in last and b > last[v]:
            bad.append(f"bound at {v!r} increased from {last[v]} to {b}")
        last[v] = min(b, last.get(v, b))
    final = last
    for n in sorted(set(final.values())):
        for w in final:
            count = sum(1 for u in prefixes(w) if u in final and final[u] <= n)
            if count >= 2 ** n:
                bad.append(f"branch through {w!r} has {count} vertices below level {n}")
    return bad


def schedule_to_families(
    schedule: Iterable[tuple[str, int]],
    depth: int | None = None,
    n_max: int | None = None,
    strategy: str = "first-fit",
) -> dict[tuple[int, str], frozenset[str]]:
    """Colour each level's qualifying vertices with ``2^n`` colours.

    For every level ``n`` in ``1..n_max`` a separate game with ``k = 2^n`` is
    fed the vertices in the order they first qualify. Colours are rendered as
    n-bit strings; the family ``(n, c)`` holds the vertices coloured ``c``.
    """
    schedule = [(check_vertex(v, depth), b) for v, b in schedule]
    if not schedule:
        return {}
    if n_max is None:
        n_max = max(1, max(b for _, b in schedule))
    families: dict[tuple[int, str], set[str]] = defaultdict(set)
    for n in range(1, n_max + 1):
        game = ColoringGame(2 ** n, depth)
        for v, b in schedule:
            if b <= n and v not in game.marked:
                color = game.play(v, strategy)
                families[(n, format(color - 1, f"0{n}b"))].add(v)
    return {key: frozenset(vs) for key, vs in families.items()}


def random_schedule(rng: random.Random, depth: int, n_max: int, length: int) -> list[tuple[str, int]]:
    """A legal schedule built by rejecting announcements that would break it."""
    schedule: list[tuple[str, int]] = []
    final: dict[str, int] = {}
    for _ in range(length):
        if final and rng.random() < 0.3:
            v = rng.choice(sorted(final))
            if final[v] <= 1:
                continue
            b = rng.randint(1, final[v] - 1)
        else:
            n = rng.randint(0, depth)
            v = format(rng.getrandbits(n), f"0{n}b") if n else ""
            if rng.random() < 0.5 and final:
                base = rng.choice(sorted(final))
                v = (base + v)[:depth]
            b = rng.randint(1, n_max)
            if v in final:
                b = min(b, final[v])
        trial = dict(final)
        trial[v] = b
        if _levels_ok(trial, v):
            final = trial
            schedule.append((v, b))
    return schedule


def _levels_ok(final: dict[str, int], changed: str) -> bool:
    touched = [w for w in final if is_prefix(changed, w) or is_prefix(w, changed)]
    for n in range(1, max(final.values()) + 1):
        for w in touched:
            if not (is_prefix(changed, w) or w == changed):
                continue
            count = sum(1 for u in prefixes(w) if u in final and final[u] <= n)
            if count >= 2 ** n:
                return False
    return True
