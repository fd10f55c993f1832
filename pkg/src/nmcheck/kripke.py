"""Finite Kripke structures: atom tables, validated transition systems, queries.

States are dense integer ids, labels are sets of atom ids, and the
transition relation is required to be total so that every state starts
an infinite path.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable


class ModelError(Exception):
    """A transition-system description is malformed."""


class UnknownAtom(ModelError):
    """An atom name or id is not present in the atom table."""


class DanglingEdge(ModelError):
    """A state id is out of range."""


class NonTotal(ModelError):
    """Some state has no successor."""


class ModelFormatError(ModelError):
    """The model text format could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class AtomTable:
    """Ordered set of distinct atomic-proposition names with dense ids."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if any(not isinstance(n, str) or not n for n in names):
            raise ModelError("atom names must be non-empty strings")
        if len(set(names)) != len(names):
            raise ModelError("duplicate atom names")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AtomTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"AtomTable({list(self.names)!r})"

    def id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAtom(f"unknown atom {name!r}") from None

    def name(self, atom_id: int) -> str:
        if not 0 <= atom_id < len(self.names):
            raise UnknownAtom(f"atom id {atom_id} out of range")
        return self.names[atom_id]


@dataclass(frozen=True)
class TransitionSystem:
    """Validated Kripke structure with a single initial state.

    Immutable after `build`; safe to share between concurrent checkers.
    """

    atoms: AtomTable
    num_states: int
    initial: int
    labels: tuple[frozenset[int], ...]
    successors: tuple[tuple[int, ...], ...]

    def label_names(self, state: int) -> tuple[str, ...]:
        return tuple(self.atoms.name(a) for a in sorted(self.labels[state]))


def build(
    atoms: AtomTable,
    states: Iterable[Iterable[int | str]],
    transitions: Iterable[tuple[int, int]],
    initial: int,
) -> TransitionSystem:
    """Validate and assemble a transition system.

    `states` is a per-state label set whose members may be atom ids or
    names.  Raises DanglingEdge for out-of-range ids, UnknownAtom for bad
    labels and NonTotal when some state has no outgoing transition.
    """
    label_sets = []
    for raw in states:
        ids = set()
        for a in raw:
            if isinstance(a, str):
                ids.add(atoms.id(a))
            else:
                if not 0 <= a < len(atoms):
                    raise UnknownAtom(f"atom id {a} out of range")
                ids.add(a)
        label_sets.append(frozenset(ids))
    n = len(label_sets)
    if n == 0:
        raise ModelError("a transition system needs at least one state")
    if not 0 <= initial < n:
        raise DanglingEdge(f"initial state {initial} out of range 0..{n - 1}")
    succ: list[set[int]] = [set() for _ in range(n)]
    for src, dst in transitions:
        if not 0 <= src < n:
            raise DanglingEdge(f"transition source {src} out of range")
        if not 0 <= dst < n:
            raise DanglingEdge(f"transition target {dst} out of range")
        succ[src].add(dst)
    for s, out in enumerate(succ):
        if not out:
            raise NonTotal(f"state {s} has no successor")
    return TransitionSystem(
        atoms=atoms,
        num_states=n,
        initial=initial,
        labels=tuple(label_sets),
        successors=tuple(tuple(sorted(out)) for out in succ),
    )


def reachable(ts: TransitionSystem) -> frozenset[int]:
    """States reachable from the initial state (breadth-first closure)."""
    seen = {ts.initial}
    frontier = deque([ts.initial])
    while frontier:
        s = frontier.popleft()
        for t in ts.successors[s]:
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    return frozenset(seen)


def satisfies_label(ts: TransitionSystem, state: int, atom: int | str) -> bool:
    """True iff the atom is in the state's label set."""
    if not 0 <= state < ts.num_states:
        raise DanglingEdge(f"state {state} out of range")
    atom_id = ts.atoms.id(atom) if isinstance(atom, str) else atom
    if not 0 <= atom_id < len(ts.atoms):
        raise UnknownAtom(f"atom id {atom_id} out of range")
    return atom_id in ts.labels[state]


def serialize_model(ts: TransitionSystem) -> str:
    """Render a transition system in the line-oriented model text format."""
    lines = [
        "atoms: " + " ".join(ts.atoms.names),
        f"states: {ts.num_states}",
        f"init: {ts.initial}",
    ]
    for s in range(ts.num_states):
        if ts.labels[s]:
            lines.append(f"label {s}: " + " ".join(ts.label_names(s)))
    for s in range(ts.num_states):
        for t in ts.successors[s]:
            lines.append(f"trans {s} -> {t}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> TransitionSystem:
    """Parse the model text format; inverse of `serialize_model`.

    Sections `atoms:`, `states:` and `init:` are required; `label` and
    `trans` lines may appear in any order.  Lines starting with `#` are
    comments.
    """
    atoms: AtomTable | None = None
    num_states: int | None = None
    initial: int | None = None
    label_lines: list[tuple[int, int, list[str]]] = []
    trans: list[tuple[int, int]] = []

    def _int(tok: str, line_no: int, what: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ModelFormatError(line_no, f"bad {what}: {tok!r}") from None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("atoms:"):
            atoms = AtomTable(line[len("atoms:"):].split())
        elif line.startswith("states:"):
            num_states = _int(line[len("states:"):].strip(), line_no, "state count")
        elif line.startswith("init:"):
            initial = _int(line[len("init:"):].strip(), line_no, "initial state")
        elif line.startswith("label"):
            head, _, names = line[len("label"):].partition(":")
            label_lines.append((line_no, _int(head.strip(), line_no, "state id"), names.split()))
        elif line.startswith("trans"):
            parts = line[len("trans"):].split("->")
            if len(parts) != 2:
                raise ModelFormatError(line_no, "expected `trans FROM -> TO`")
            trans.append((_int(parts[0].strip(), line_no, "state id"),
                          _int(parts[1].strip(), line_no, "state id")))
        else:
            raise ModelFormatError(line_no, f"unrecognized line: {line!r}")

    if atoms is None:
        raise ModelFormatError(0, "missing `atoms:` section")
    if num_states is None:
        raise ModelFormatError(0, "missing `states:` section")
    if initial is None:
        raise ModelFormatError(0, "missing `init:` section")

    labels: list[set[str]] = [set() for _ in range(num_states)]
    for line_no, state, names in label_lines:
        if not 0 <= state < num_states:
            raise ModelFormatError(line_no, f"label state {state} out of range")
        labels[state].update(names)
    return build(atoms, labels, trans, initial)
