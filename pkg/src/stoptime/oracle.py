"""Complexity relative to an infinite oracle, maximised over the oracles that
extend a given string, decided through cylinder covers.

With a finite mode, description ``p`` describes ``x`` for oracle ``X`` iff some
stored ``(p, z, x)`` has ``z`` a prefix of ``X``. The oracles where that
happens form the union of the cylinders ``[z]``. Whether a union of cylinders
covers every extension of ``x`` is decided structurally, without listing the
extensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .modes import DescriptionMode, complexity_monotone, complexity_plain
from .tree import check_vertex, extensions, is_prefix, prefixes


@dataclass(frozen=True)
class CylinderCover:
    intervals: frozenset[str]
    horizon: int

    def covers(self, base: str = "") -> bool:
        return covers(self.intervals, base, self.horizon)


def covers(intervals: Iterable[str], base: str, horizon: int) -> bool:
    """Does every length-``horizon`` extension of ``base`` extend some interval?"""
    roots = [z for z in set(intervals) if len(z) <= horizon]

    def go(v: str, live: list[str]) -> bool:
        if any(is_prefix(z, v) for z in live):
            return True
        if len(v) >= horizon:
            return False
        deeper = [z for z in live if is_prefix(v, z)]
        if not deeper:
            return False
        return go(v + "0", deeper) and go(v + "1", deeper)

    return go(base, roots)


def describes_with_oracle(mode: DescriptionMode, p: str, x: str) -> set[str]:
    """Conditions ``z`` with ``(p, z, x)`` stored: the cylinders where ``p`` works."""
    return {z for q, z, y in mode.triples if q == p and y == x}


def _horizon(mode: DescriptionMode, x: str, horizon: int | None) -> int:
    h = mode.depth if horizon is None else horizon
    if not len(x) <= h <= mode.depth:
        raise ValueError(f"need |x|={len(x)} <= horizon={h} <= depth={mode.depth}")
    return h


def covered_below(mode: DescriptionMode, x: str, n: int, horizon: int | None = None,
                  condition: str | None = None) -> bool:
    """True iff every oracle extending ``condition`` (default ``x``) has a
    description of ``x`` shorter than ``n``."""
    base = x if condition is None else condition
    check_vertex(x, mode.depth)
    h = _horizon(mode, base, horizon)
    intervals = [z for p, z, y in mode.triples if y == x and len(p) < n]
    return covers(intervals, base, h)


def max_over_extensions(mode: DescriptionMode, x: str, horizon: int | None = None,
                        condition: str | None = None) -> int | None:
    """Max over oracles ``X`` extending ``x`` of the shortest description of
    ``x`` relative to ``X``; None if some oracle has no description.

    The value is (least n whose cover is complete) - 1; only n = |p| + 1 for
    existing descriptions ``p`` need trying. ``condition`` replaces the
    string the oracles must extend (exploratory; no result is claimed).
    """
    base = x if condition is None else condition
    check_vertex(x, mode.depth)
    h = _horizon(mode, base, horizon)
    lengths = sorted({len(p) for p, z, y in mode.triples if y == x})
    for n in (m + 1 for m in lengths):
        intervals = [z for p, z, y in mode.triples if y == x and len(p) < n]
        if covers(intervals, base, h):
            return n - 1
    return None


def brute_max_over_extensions(mode: DescriptionMode, x: str, horizon: int | None = None) -> int | None:
    """Same quantity by listing every length-``horizon`` extension."""
    h = _horizon(mode, x, horizon)
    relevant = [(len(p), z) for p, z, y in mode.triples if y == x]
    if not relevant:
        return None
    worst = -1
    for X in extensions(x, h):
        best = min((n for n, z in relevant if is_prefix(z, X)), default=None)
        if best is None:
            return None
        worst = max(worst, best)
    return worst


def _le(a: int | None, b: int | None) -> bool:
    if b is None:
        return True
    return a is not None and a <= b


def check_oracle_inequality(mode: DescriptionMode, x: str, horizon: int | None = None) -> bool:
    """max over extending oracles <= monotone-conditional complexity of x given x."""
    return _le(max_over_extensions(mode, x, horizon), complexity_monotone(mode, x, x))


def oracle_values(mode: DescriptionMode, horizon: int | None = None) -> dict[str, int]:
    """Finite values of ``max_over_extensions`` over all ``x`` up to the horizon."""
    h = mode.depth if horizon is None else horizon
    out = {}
    for x in sorted(mode.objects()):
        if len(x) <= h:
            s = max_over_extensions(mode, x, h)
            if s is not None:
                out[x] = s
    return out


def cardinality_check_oracle(mode: DescriptionMode, horizon: int | None = None) -> bool:
    """Every branch has fewer than ``2^n`` prefixes ``x`` with value below ``n``.

    A branch's qualifying prefixes form a chain, so it is enough to count the
    qualifying prefixes of each qualifying vertex.
    """
    return not cardinality_violations(mode, horizon)


def cardinality_violations(mode: DescriptionMode, horizon: int | None = None) -> list[tuple[str, int, int]]:
    values = oracle_values(mode, horizon)
    bad = []
    for n in sorted({s + 1 for s in values.values()}):
        for w in values:
            count = sum(1 for u in prefixes(w) if u in values and values[u] < n)
            if count >= 2 ** n:
                bad.append((w, n, count))
    return bad


def max_over_finite_extensions(mode: DescriptionMode, x: str, horizon: int | None = None) -> int | None:
    """Max over finite extensions ``z`` of ``x`` of the exact-condition complexity
    of ``x`` given ``z``, using stored triples only. Exploratory."""
    h = _horizon(mode, x, horizon)
    worst = -1
    for n in range(len(x), h + 1):
        for z in extensions(x, n):
            c = complexity_plain(mode, x, z)
            if c is None:
                return None
            worst = max(worst, c)
    return worst
