"""Machines with a one-way read-only input tape, and prefix-free enumerators.

A machine is a pure step function ``step(state, bit) -> (state, action)``.
``bit`` is the bit delivered by the previous ``REQUEST_BIT`` action (``None``
otherwise). One call is one unit of fuel.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence

from .tree import require_prefix_free, are_compatible, shortlex_key


class Action(enum.Enum):
    REQUEST_BIT = "request"
    HALT = "halt"
    INTERNAL_STEP = "step"


@dataclass(frozen=True)
class StoppingMachine:
    initial: Any
    step: Callable[[Any, str | None], tuple[Any, Action]]
    name: str = "machine"


@dataclass(frozen=True)
class StopsAt:
    prefix: str


@dataclass(frozen=True)
class RanOffInput:
    pass


@dataclass(frozen=True)
class FuelExhausted:
    pass


RunOutcome = StopsAt | RanOffInput | FuelExhausted


def run_on(machine: StoppingMachine, tape: str, fuel: int) -> RunOutcome:
    """Run on a finite input; asking for a bit past its end is ``RanOffInput``."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    state, bit, pos = machine.initial, None, 0
    for _ in range(fuel):
        state, action = machine.step(state, bit)
        bit = None
        if action is Action.HALT:
            return StopsAt(tape[:pos])
        if action is Action.REQUEST_BIT:
            if pos == len(tape):
                return RanOffInput()
            bit = tape[pos]
            pos += 1
    return FuelExhausted()


def halting_times(machine: StoppingMachine, depth: int, fuel: int) -> dict[str, int]:
    """Map each ``z`` (``|z| <= depth``) the machine stops at to its step count.

    Simulates all inputs at once: the run only forks when a bit is requested,
    and runs on inputs sharing a prefix coincide up to that point. An idle
    step that leaves the state unchanged repeats forever, so that branch is
    dropped without burning the rest of its fuel.
    """
    found: dict[str, int] = {}
    stack = [(machine.initial, None, "", 0)]
    while stack:
        state, bit, read, used = stack.pop()
        while used < fuel:
            prev, had_bit = state, bit is not None
            state, action = machine.step(state, bit)
            used += 1
            bit = None
            if action is Action.INTERNAL_STEP and not had_bit and state == prev:
                break  # a fixed point: the run idles forever
            if action is Action.HALT:
                found[read] = used
                break
            if action is Action.REQUEST_BIT:
                if len(read) < depth:
                    stack.append((state, "1", read + "1", used))
                    stack.append((state, "0", read + "0", used))
                break
    return found


def stop_set(machine: StoppingMachine, depth: int, fuel: int) -> set[str]:
    return set(halting_times(machine, depth, fuel))


def enumerator_from_machine(machine: StoppingMachine, depth: int, fuel: int) -> list[str]:
    """Dovetailed enumeration of the stop set.

    Round ``f`` runs every input of length ``<= depth`` in shortlex order with
    fuel ``f``; a string is emitted in the first round where the machine stops
    at it. Equivalently: sort by (steps needed, length, bits).
    """
    times = halting_times(machine, depth, fuel)
    return sorted(times, key=lambda z: (times[z], *shortlex_key(z)))


def trim_script(script: Iterable[str]) -> list[str]:
    """Keep each emission unless it is comparable with an earlier kept one."""
    kept: list[str] = []
    for s in script:
        if not any(are_compatible(s, k) for k in kept):
            kept.append(s)
    return kept


def machine_from_enumerator(script: Sequence[str]) -> StoppingMachine:
    """The waiting construction: read a bit only once it is safe to.

    State is ``(read, seen)``: the bits read so far and how many emissions
    have been examined. Each internal step examines one more emission. The
    machine halts once ``read`` itself has been seen, requests a bit once a
    proper extension of ``read`` has been seen, and otherwise keeps waiting.
    """
    emissions = tuple(script)
    require_prefix_free(emissions)
    # first[u]: index of the earliest emission extending u (or equal to it)
    first: dict[str, int] = {}
    for i, s in enumerate(emissions):
        for j in range(len(s) + 1):
            first.setdefault(s[:j], i)

    def step(state, bit):
        read, seen = state
        if bit is not None:
            read += bit
        i = first.get(read)
        if i is not None and i < seen:
            action = Action.HALT if emissions[i] == read else Action.REQUEST_BIT
            return (read, seen), action
        return (read, min(seen + 1, len(emissions))), Action.INTERNAL_STEP

    return StoppingMachine(("", 0), step, name="from-enumerator")


def ample_fuel(script: Sequence[str]) -> int:
    """Fuel that lets ``machine_from_enumerator(script)`` finish every run."""
    longest = max((len(s) for s in script), default=0)
    return (len(script) + 1) * (longest + 2) * 2


# Built-in machine family. Step functions are not serialisable, so the CLI
# and the tests refer to these by name.

def halt_now() -> StoppingMachine:
    return StoppingMachine(None, lambda s, b: (s, Action.HALT), name="halt-now")


def loop_forever() -> StoppingMachine:
    return StoppingMachine(None, lambda s, b: (s, Action.INTERNAL_STEP), name="loop")


def read_then_halt(k: int) -> StoppingMachine:
    def step(count, bit):
        if bit is not None:
            count += 1
        return count, (Action.HALT if count >= k else Action.REQUEST_BIT)

    return StoppingMachine(0, step, name=f"read-{k}")


def count_ones(k: int, delay: int = 0) -> StoppingMachine:
    """Halt right after reading the k-th one; ``delay`` idle steps per bit."""

    def step(state, bit):
        ones, idle = state
        if bit is not None:
            ones += bit == "1"
            idle = delay
        if ones >= k:
            return (ones, idle), Action.HALT
        if idle:
            return (ones, idle - 1), Action.INTERNAL_STEP
        return (ones, idle), Action.REQUEST_BIT

    return StoppingMachine((0, delay), step, name=f"ones-{k}")


def halt_on_pattern(pattern: str) -> StoppingMachine:
    """Halt at the first occurrence of ``pattern`` in the input."""
    if not pattern:
        return halt_now()

    def step(window, bit):
        if bit is not None:
            window = (window + bit)[-len(pattern):]
            if window == pattern:
                return window, Action.HALT
        return window, Action.REQUEST_BIT

    return StoppingMachine("", step, name=f"pattern-{pattern}")


@dataclass(frozen=True)
class TableMachine:
    """Machine driven by a finite table over the bits read so far.

    ``table[w] = (kind, delay)``: after reading ``w`` the machine idles
    ``delay`` steps, then halts, reads, or loops forever. Missing prefixes loop.
    """

    table: tuple[tuple[str, tuple[str, int]], ...]

    def machine(self) -> StoppingMachine:
        table = dict(self.table)

        def step(state, bit):
            read, idle = state
            if bit is not None:
                read += bit
                idle = table.get(read, ("loop", 0))[1]
            if idle:
                return (read, idle - 1), Action.INTERNAL_STEP
            kind = table.get(read, ("loop", 0))[0]
            if kind == "halt":
                return (read, 0), Action.HALT
            if kind == "read":
                return (read, 0), Action.REQUEST_BIT
            return (read, 0), Action.INTERNAL_STEP

        return StoppingMachine(("", table.get("", ("loop", 0))[1]), step, name="table")


def random_table_machine(rng: random.Random, depth: int, max_delay: int = 3) -> StoppingMachine:
    table: dict[str, tuple[str, int]] = {}
    frontier = [""]
    while frontier:
        w = frontier.pop()
        roll = rng.random()
        if len(w) < depth and roll < 0.55:
            kind = "read"
            frontier += [w + "0", w + "1"]
        elif roll < 0.85:
            kind = "halt"
        else:
            kind = "loop"
        table[w] = (kind, rng.randint(0, max_delay))
    return TableMachine(tuple(sorted(table.items()))).machine()


MACHINE_FAMILY: dict[str, Callable[..., StoppingMachine]] = {
    "halt-now": halt_now,
    "loop": loop_forever,
    "read": read_then_halt,
    "ones": count_ones,
    "pattern": halt_on_pattern,
}


def builtin_machine(name: str, *params: Hashable) -> StoppingMachine:
    try:
        factory = MACHINE_FAMILY[name]
    except KeyError:
        raise ValueError(f"unknown machine {name!r}; choose from {sorted(MACHINE_FAMILY)}") from None
    return factory(*params)
