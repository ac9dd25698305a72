"""Bit strings as vertices of the full binary tree.

Bit strings are plain ``str`` values over the alphabet ``{'0', '1'}`` so that
``""``, ``"0"`` and ``"00"`` stay distinct. The empty string is the root.
"""

from __future__ import annotations

import os
from itertools import product
from typing import Iterable, Iterator

DEFAULT_DEPTH_MAX = 16
DEPTH_ENV_VAR = "STOPTIME_DEPTH_MAX"


class NotPrefixFreeError(ValueError):
    """A collection that must be prefix-free contains a comparable pair."""

    def __init__(self, shorter, longer):
        self.shorter = shorter
        self.longer = longer
        super().__init__(f"{shorter!r} is a prefix of {longer!r}")


def depth_max() -> int:
    """Global vertex depth bound, overridable through ``STOPTIME_DEPTH_MAX``."""
    raw = os.environ.get(DEPTH_ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_DEPTH_MAX
    value = int(raw)
    if value < 0:
        raise ValueError(f"{DEPTH_ENV_VAR} must be non-negative, got {value}")
    return value


def check_bits(s: str) -> str:
    if not isinstance(s, str) or s.strip("01"):
        raise ValueError(f"not a bit string: {s!r}")
    return s


def check_vertex(v: str, depth: int | None = None) -> str:
    """Validate ``v`` as a tree vertex no deeper than ``depth`` (default D_max)."""
    check_bits(v)
    bound = depth_max() if depth is None else depth
    if len(v) > bound:
        raise ValueError(f"vertex {v!r} deeper than depth bound {bound}")
    return v


def is_prefix(a: str, b: str) -> bool:
    return b.startswith(a)


def are_compatible(a: str, b: str) -> bool:
    return a.startswith(b) or b.startswith(a)


def find_prefix_pair(strings: Iterable[str]) -> tuple[str, str] | None:
    """Return some pair ``(a, b)`` with ``a`` a proper prefix of ``b``, or None.

    After sorting, every extension of ``a`` sits in a contiguous block right
    after ``a``, so checking neighbours is enough.
    """
    ordered = sorted(set(strings))
    for a, b in zip(ordered, ordered[1:]):
        if b.startswith(a):
            return a, b
    return None


def check_prefix_free(strings: Iterable[str]) -> bool:
    return find_prefix_pair(strings) is None


def require_prefix_free(strings: Iterable[str]) -> None:
    pair = find_prefix_pair(strings)
    if pair is not None:
        raise NotPrefixFreeError(*pair)


def path_to_root(v: str) -> list[str]:
    """All prefixes of ``v``, from ``v`` itself down to the root."""
    return [v[:i] for i in range(len(v), -1, -1)]


def prefixes(v: str, proper: bool = False) -> Iterator[str]:
    """Prefixes of ``v`` from the root up."""
    stop = len(v) if proper else len(v) + 1
    for i in range(stop):
        yield v[:i]


def parent(v: str) -> str:
    if not v:
        raise ValueError("the root has no parent")
    return v[:-1]


def sibling(v: str) -> str:
    if not v:
        raise ValueError("the root has no sibling")
    return v[:-1] + ("1" if v[-1] == "0" else "0")


def strings_of_length(n: int) -> Iterator[str]:
    for bits in product("01", repeat=n):
        yield "".join(bits)


def all_strings(max_len: int) -> Iterator[str]:
    """Every bit string of length at most ``max_len`` in shortlex order."""
    for n in range(max_len + 1):
        yield from strings_of_length(n)


def extensions(v: str, length: int) -> Iterator[str]:
    """Extensions of ``v`` having exactly ``length`` bits (none if shorter)."""
    if length < len(v):
        return
    for tail in strings_of_length(length - len(v)):
        yield v + tail


def extensions_up_to(v: str, depth: int) -> Iterator[str]:
    for n in range(len(v), depth + 1):
        yield from extensions(v, n)


def shortlex_key(s: str) -> tuple[int, str]:
    return len(s), s


# Text serialisation: the empty string is written as "-" in tabular files.

def encode_field(s: str) -> str:
    return s if s else "-"


def decode_field(s: str) -> str:
    s = s.strip()
    return "" if s == "-" else check_bits(s)
