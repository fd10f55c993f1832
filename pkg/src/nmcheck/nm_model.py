"""Parametric model of the N-M switching control system.

A factory's workplaces are split into N priority-ordered sections
W1..WN; a regulator boosts incoming voltage at M levels L1..LM (higher
index = more boost).  The controller reacts to a low/normal/high voltage
reading by moving exactly one of: the powered prefix length or the
level.  This module provides the deterministic step function, the bit
string encoding of configurations and the generated Kripke structure.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator

from .kripke import AtomTable, TransitionSystem, build


class VoltageReading(enum.Enum):
    NONE = "none"
    LOW = "low"
    NORMAL = "normal"
    HIGH = "high"

    @property
    def atom(self) -> str | None:
        """Atomic-proposition name, or None for the startup reading."""
        return {"low": "l", "normal": "n", "high": "h"}.get(self.value)


# environment inputs; NONE only ever occurs in the startup state
READINGS = (VoltageReading.LOW, VoltageReading.NORMAL, VoltageReading.HIGH)


@dataclass(frozen=True)
class NMParams:
    n_sections: int
    m_levels: int

    def __post_init__(self):
        if self.n_sections < 1:
            raise ValueError("n_sections must be >= 1")
        if self.m_levels < 1:
            raise ValueError("m_levels must be >= 1")

    @property
    def start_level(self) -> int:
        # ceil(M / 2)
        return (self.m_levels + 1) // 2


@dataclass(frozen=True)
class NMState:
    """Controller configuration: powered prefix length, level, last reading."""

    powered: int
    level: int
    reading: VoltageReading


# (powered, level) pair produced by one controller step
StepFn = Callable[[NMParams, "NMState"], tuple[int, int]]


def start_state(params: NMParams) -> NMState:
    """Startup configuration: nothing powered, middle level, no reading yet."""
    return NMState(0, params.start_level, VoltageReading.NONE)


def controller_step(params: NMParams, state: NMState) -> tuple[int, int]:
    """Next (powered, level) for the sampled reading.

    low  -> level up while possible, else drop the lowest-priority section;
    normal -> power the next section while possible, else hold;
    high -> level down while possible, else suspend all sections.
    The startup reading holds everything.
    """
    n, m = params.n_sections, params.m_levels
    k, j = state.powered, state.level
    match state.reading:
        case VoltageReading.NONE:
            return k, j
        case VoltageReading.LOW:
            if j < m:
                return k, j + 1
            return max(k - 1, 0), m
        case VoltageReading.NORMAL:
            if k < n:
                return k + 1, j
            return n, j
        case VoltageReading.HIGH:
            if j > 1:
                return k, j - 1
            return 0, 1
    raise ValueError(f"bad reading: {state.reading!r}")


def atom_table(params: NMParams) -> AtomTable:
    """Atoms W1..WN, L1..LM, l, n, h in that fixed order."""
    names = [f"W{i}" for i in range(1, params.n_sections + 1)]
    names += [f"L{j}" for j in range(1, params.m_levels + 1)]
    names += ["l", "n", "h"]
    return AtomTable(names)


def state_label_ids(params: NMParams, state: NMState) -> frozenset[int]:
    """Label set of a configuration as dense atom ids."""
    n, m = params.n_sections, params.m_levels
    ids = set(range(state.powered))              # W1..Wk
    ids.add(n + state.level - 1)                 # one-hot level
    if state.reading is not VoltageReading.NONE:
        offset = {"l": 0, "n": 1, "h": 2}[state.reading.atom]
        ids.add(n + m + offset)
    return frozenset(ids)


def state_label_names(params: NMParams, state: NMState) -> frozenset[str]:
    names = {f"W{i}" for i in range(1, state.powered + 1)}
    names.add(f"L{state.level}")
    if state.reading.atom:
        names.add(state.reading.atom)
    return frozenset(names)


@dataclass(frozen=True)
class NMSystem:
    """Generated Kripke structure plus the id -> configuration map."""

    params: NMParams
    ts: TransitionSystem
    states: tuple[NMState, ...]

    @property
    def atoms(self) -> AtomTable:
        return self.ts.atoms

    def bits(self, state_id: int) -> str:
        return encode(self.params, self.states[state_id])


def build_transition_system(params: NMParams, step: StepFn | None = None) -> NMSystem:
    """Generate the reachable state space as a validated Kripke structure.

    From each state the controller output (k', j') branches over the
    three possible next readings, so every state has exactly three
    successors.  State ids follow breadth-first discovery order with the
    startup state as id 0.  `step` substitutes the controller step
    function (used by mutation tests).
    """
    step = step or controller_step
    atoms = atom_table(params)
    start = start_state(params)
    index: dict[NMState, int] = {start: 0}
    order: list[NMState] = [start]
    edges: list[tuple[int, int]] = []
    queue = deque([start])
    while queue:
        st = queue.popleft()
        sid = index[st]
        k2, j2 = step(params, st)
        for reading in READINGS:
            succ = NMState(k2, j2, reading)
            tid = index.get(succ)
            if tid is None:
                tid = len(order)
                index[succ] = tid
                order.append(succ)
                queue.append(succ)
            edges.append((sid, tid))
    labels = [state_label_ids(params, st) for st in order]
    ts = build(atoms, labels, edges, 0)
    return NMSystem(params=params, ts=ts, states=tuple(order))


class DecodeError(ValueError):
    """A bit string is not a valid controller encoding."""


class BadLength(DecodeError):
    pass


class BadChar(DecodeError):
    pass


class PrefixViolation(DecodeError):
    pass


class LevelNotOneHot(DecodeError):
    pass


class VoltageNotOneHotOrZero(DecodeError):
    pass


_VOLTAGE_BITS = {
    VoltageReading.NONE: "000",
    VoltageReading.LOW: "100",
    VoltageReading.NORMAL: "010",
    VoltageReading.HIGH: "001",
}
_VOLTAGE_FROM_BITS = {v: k for k, v in _VOLTAGE_BITS.items()}


def encode(params: NMParams, state: NMState) -> str:
    """Display-form bit string: sections, levels (descending LM..L1), voltage.

    Example for N=3, M=2: "111 10 010" is all sections powered at the
    maximum level with a normal reading.
    """
    n, m = params.n_sections, params.m_levels
    w = "1" * state.powered + "0" * (n - state.powered)
    lv = "".join("1" if state.level == m - p else "0" for p in range(m))
    return f"{w} {lv} {_VOLTAGE_BITS[state.reading]}"


def decode(params: NMParams, bits: str) -> NMState:
    """Inverse of `encode`; whitespace in `bits` is ignored.

    Invalid strings raise the first violated constraint in field order:
    length/characters, then the section prefix, the level one-hot and
    the voltage field (one-hot or all zero).
    """
    n, m = params.n_sections, params.m_levels
    s = "".join(bits.split())
    expected = n + m + 3
    if len(s) != expected:
        raise BadLength(f"expected {expected} bits, got {len(s)}")
    bad = next((c for c in s if c not in "01"), None)
    if bad is not None:
        raise BadChar(f"invalid character {bad!r}")
    w, lv, v = s[:n], s[n:n + m], s[n + m:]

    powered = 0
    while powered < n and w[powered] == "1":
        powered += 1
    if "1" in w[powered:]:
        raise PrefixViolation(f"section bits {w!r} power a non-prefix set")

    if lv.count("1") != 1:
        raise LevelNotOneHot(f"level bits {lv!r} are not one-hot")
    level = m - lv.index("1")

    reading = _VOLTAGE_FROM_BITS.get(v)
    if reading is None:
        raise VoltageNotOneHotOrZero(f"voltage bits {v!r} are not one-hot or zero")
    return NMState(powered, level, reading)


def count_valid_encodings(params: NMParams) -> int:
    """Number of bit strings that can occur in control: (N+1) * 4M."""
    return (params.n_sections + 1) * 4 * params.m_levels


def enumerate_valid_encodings(params: NMParams) -> Iterator[str]:
    """All valid display-form bit strings, ordered by (sections, level, voltage)."""
    for k in range(params.n_sections + 1):
        for j in range(1, params.m_levels + 1):
            for reading in (VoltageReading.NONE,) + READINGS:
                yield encode(params, NMState(k, j, reading))
