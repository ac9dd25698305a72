"""Finite description modes: sets of (description, condition, object) triples.

A mode stores a base set of triples. Conditions are read as prefixes of an
unknown infinite sequence, so a stored ``(p, x, y)`` also describes ``y`` under
every extension of ``x``. That closure is never materialised; every query
evaluates it through prefix tests instead.

Complexities are returned as ``int`` lengths, with ``None`` standing for
"no description" (plus infinity).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .tree import (
    are_compatible,
    check_bits,
    check_prefix_free,
    check_vertex,
    decode_field,
    depth_max,
    encode_field,
    extensions,
    extensions_up_to,
    is_prefix,
)

Triple = tuple[str, str, str]


@dataclass(frozen=True)
class DescriptionMode:
    triples: frozenset[Triple] = frozenset()
    depth: int = field(default_factory=depth_max)

    def __post_init__(self):
        object.__setattr__(self, "triples", frozenset(self.triples))
        if not 0 <= self.depth <= depth_max():
            raise ValueError(f"mode depth {self.depth} outside 0..{depth_max()}")
        for p, x, y in self.triples:
            check_bits(p)
            check_vertex(x, self.depth)
            check_bits(y)

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(sorted(self.triples, key=_triple_key))

    def by_description(self) -> dict[str, list[tuple[str, str]]]:
        out: dict[str, list[tuple[str, str]]] = defaultdict(list)
        for p, x, y in self.triples:
            out[p].append((x, y))
        return out

    def objects(self) -> set[str]:
        return {y for _, _, y in self.triples}


def _triple_key(t: Triple):
    return tuple((len(s), s) for s in t)


def make_mode(triples: Iterable[Sequence[str]], depth: int | None = None) -> DescriptionMode:
    ts = frozenset((p, x, y) for p, x, y in triples)
    return DescriptionMode(ts) if depth is None else DescriptionMode(ts, depth)


@dataclass(frozen=True)
class Violation:
    first: Triple
    second: Triple

    def __str__(self):
        return f"{self.first} conflicts with {self.second}"


def validate_mode(mode: DescriptionMode) -> list[Violation]:
    """Every pair of triples breaking uniqueness under prefix semantics.

    Two triples with the same description and compatible conditions reach a
    common condition (the longer one), so they must agree on the object.
    """
    report = []
    for p, pairs in sorted(mode.by_description().items()):
        pairs = sorted(pairs, key=lambda t: (len(t[0]), t))
        for i, (x, y) in enumerate(pairs):
            for x2, y2 in pairs[i + 1:]:
                if y != y2 and are_compatible(x, x2):
                    report.append(Violation((p, x, y), (p, x2, y2)))
    return report


def is_valid(mode: DescriptionMode) -> bool:
    return not validate_mode(mode)


def admit_stream(stream: Iterable[Triple]) -> tuple[list[Triple], list[Triple]]:
    kept: list[Triple] = []
    dropped: list[Triple] = []
    seen: dict[str, list[tuple[str, str]]] = defaultdict(list)
    for p, x, y in stream:
        if any(y2 != y and are_compatible(x, x2) for x2, y2 in seen[p]):
            dropped.append((p, x, y))
            continue
        seen[p].append((x, y))
        kept.append((p, x, y))
    return kept, dropped


def trim_to_mode(stream: Iterable[Sequence[str]], depth: int | None = None) -> DescriptionMode:
    """Replay an enumeration, ignoring any triple that would break uniqueness."""
    kept, _ = admit_stream(tuple(t) for t in stream)
    return make_mode(kept, depth)


def complexity_monotone(mode: DescriptionMode, y: str, x: str) -> int | None:
    """Shortest description of ``y`` given ``x`` as a prefix of the condition."""
    check_vertex(x, mode.depth)
    best = None
    for p, z, obj in mode.triples:
        if obj == y and is_prefix(z, x) and (best is None or len(p) < best):
            best = len(p)
    return best


def complexity_plain(mode: DescriptionMode, y: str, x: str) -> int | None:
    """Shortest description of ``y`` among stored triples with condition exactly ``x``."""
    check_vertex(x, mode.depth)
    lengths = [len(p) for p, z, obj in mode.triples if obj == y and z == x]
    return min(lengths, default=None)


def closure(mode: DescriptionMode) -> DescriptionMode:
    """Explicit monotone closure up to ``mode.depth``. Exponential; tests only."""
    out = set()
    for p, x, y in mode.triples:
        for x2 in extensions_up_to(x, mode.depth):
            out.add((p, x2, y))
    return DescriptionMode(frozenset(out), mode.depth)


def join_modes(modes: Sequence[DescriptionMode]) -> DescriptionMode:
    """Frame the m-th mode's descriptions with ``0^m 1``."""
    depth = max((m.depth for m in modes), default=depth_max())
    out = set()
    for m, mode in enumerate(modes):
        head = "0" * m + "1"
        out.update((head + p, x, y) for p, x, y in mode.triples)
    return DescriptionMode(frozenset(out), depth)


# Lengths as objects. Width is fixed per depth so the encoding stays injective.

def length_width(depth: int) -> int:
    return depth.bit_length()


def encode_length(n: int, depth: int) -> str:
    width = length_width(depth)
    if not 0 <= n < 2 ** width:
        raise ValueError(f"length {n} not encodable in {width} bits (depth {depth})")
    return format(n, f"0{width}b") if width else ""


def decode_length(s: str, depth: int) -> int:
    if len(s) != length_width(depth):
        raise ValueError(f"{s!r} is not a {length_width(depth)}-bit length code")
    return int(s, 2) if s else 0


def to_length_mode(mode: DescriptionMode) -> tuple[DescriptionMode, list[Triple]]:
    """Replace each object by the code of its length.

    Returns the new mode and the triples dropped because the replacement
    would have broken uniqueness (always empty for a valid input).
    """
    stream = [(p, x, encode_length(len(y), mode.depth)) for p, x, y in mode]
    kept, dropped = admit_stream(stream)
    return DescriptionMode(frozenset(kept), mode.depth), dropped


def from_length_mode(mode: DescriptionMode) -> DescriptionMode:
    """Turn length codes back into objects: the n-bit prefix of the condition.

    A stored ``(p, v, code(n))`` yields ``(p, v, v[:n])`` when ``v`` is long
    enough; otherwise each n-bit extension ``u`` of ``v`` gets ``(p, u, u)``.
    Together with prefix semantics this covers every condition ``u`` extending
    ``v`` with ``|u| >= n``.
    """
    out = set()
    for p, v, code in mode.triples:
        n = decode_length(code, mode.depth)
        if len(v) >= n:
            out.add((p, v, v[:n]))
        elif n <= mode.depth:
            out.update((p, u, u) for u in extensions(v, n))
    return DescriptionMode(frozenset(out), mode.depth)


def mode_to_families(mode: DescriptionMode) -> dict[str, frozenset[str]]:
    """For each description ``p``, the set of ``x`` with ``(p, x, x)`` in the mode."""
    fams: dict[str, set[str]] = defaultdict(set)
    for p, z, y in mode.triples:
        if is_prefix(z, y) and len(y) <= mode.depth:
            fams[p].add(y)
    return {p: frozenset(s) for p, s in fams.items()}


def families_to_mode(families: Mapping[str, Iterable[str]], depth: int | None = None) -> DescriptionMode:
    """Diagonal embedding of prefix-free families: ``(p, y, y)`` per member ``y``.

    Scripts are expected to be trimmed already; a family that is not
    prefix-free would make the result violate uniqueness.
    """
    out = set()
    for p, script in families.items():
        members = list(script)
        if not check_prefix_free(members):
            raise ValueError(f"family for description {p!r} is not prefix-free")
        out.update((p, y, y) for y in members)
    return make_mode(out, depth)


def diagonal_complexities(mode: DescriptionMode) -> dict[str, int]:
    """``complexity_monotone(mode, x, x)`` for every ``x`` where it is finite."""
    out: dict[str, int] = {}
    for p, z, y in mode.triples:
        if is_prefix(z, y) and len(y) <= mode.depth:
            if y not in out or len(p) < out[y]:
                out[y] = len(p)
    return out


# Mode files: one "p<TAB>x<TAB>y" per line, '-' for the empty string.

def dumps_mode(mode: DescriptionMode) -> str:
    lines = [f"# depth={mode.depth}"]
    lines += ["\t".join(encode_field(s) for s in t) for t in mode]
    return "\n".join(lines) + "\n"


def loads_triples(text: str) -> tuple[list[Triple], int | None]:
    """Parse triples in file order, plus the ``# depth=N`` header if present."""
    triples: list[Triple] = []
    depth = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key.strip() == "depth" and depth is None:
                depth = int(value)
            continue
        if not line:
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        triples.append(tuple(decode_field(f) for f in parts))
    return triples, depth


def loads_mode(text: str, depth: int | None = None) -> DescriptionMode:
    triples, header = loads_triples(text)
    return make_mode(triples, header if depth is None else depth)


def read_mode(path, depth: int | None = None) -> DescriptionMode:
    return loads_mode(Path(path).read_text(), depth)


def write_mode(mode: DescriptionMode, path) -> None:
    Path(path).write_text(dumps_mode(mode))

