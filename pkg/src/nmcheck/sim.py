"""Deterministic trace replay through the controller plus finite-trace
safety monitoring of the requirement schemata.

Monitoring uses weak finite-trace semantics: a step obligation
G(antecedent -> X consequent) is violated at position t only when the
antecedent holds at t and the consequent fails at t+1 inside the run;
obligations pending past the end of the trace are not violations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import specs as specs_mod
from .ltl import And, Atom, Bool, Formula, Not
from .nm_model import (
    NMParams,
    NMState,
    StepFn,
    VoltageReading,
    controller_step,
    start_state,
    state_label_names,
)


class BadReading(ValueError):
    """A trace entry is not a recognizable voltage reading."""


_READING_WORDS = {
    "low": VoltageReading.LOW,
    "l": VoltageReading.LOW,
    "normal": VoltageReading.NORMAL,
    "n": VoltageReading.NORMAL,
    "high": VoltageReading.HIGH,
    "h": VoltageReading.HIGH,
}


def parse_reading(word: str) -> VoltageReading:
    reading = _READING_WORDS.get(word.strip().lower())
    if reading is None:
        raise BadReading(f"not a voltage reading: {word!r}")
    return reading


def parse_trace(text: str) -> list[VoltageReading]:
    """One reading per line; `#` comment lines and blank lines ignored."""
    readings = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            readings.append(parse_reading(line))
        except BadReading as exc:
            raise BadReading(f"line {line_no}: {exc}") from None
    if not readings:
        raise BadReading("trace contains no readings")
    return readings


@dataclass(frozen=True)
class Violation:
    spec_id: str
    indices: tuple[int, ...]
    position: int


@dataclass
class Run:
    """Replay result: states[t+1] is states[t] stepped under readings[t]."""

    params: NMParams
    readings: tuple[VoltageReading, ...]
    states: tuple[NMState, ...]
    violations: list[Violation] = field(default_factory=list)

    def render(self) -> str:
        from .nm_model import encode  # local to keep module import light

        lines = [f"0: {encode(self.params, self.states[0])}"]
        for t in range(1, len(self.states)):
            reading = self.readings[t - 1].value
            lines.append(f"{t}: {encode(self.params, self.states[t])} <- {reading}")
        return "\n".join(lines) + "\n"


def run(params: NMParams, readings: Sequence[VoltageReading], step: StepFn | None = None) -> Run:
    """Replay a reading sequence from the startup state.

    Each reading is installed into the current configuration, the
    controller acts on it, and the resulting state records the reading
    that produced it.
    """
    step = step or controller_step
    if not readings:
        raise BadReading("trace must be nonempty")
    if any(r is VoltageReading.NONE for r in readings):
        raise BadReading("traces cannot contain the startup reading")
    states = [start_state(params)]
    for reading in readings:
        current = states[-1]
        k, j = step(params, NMState(current.powered, current.level, reading))
        states.append(NMState(k, j, reading))
    return Run(params=params, readings=tuple(readings), states=tuple(states))


@dataclass(frozen=True)
class MonitorResult:
    violations: tuple[Violation, ...]
    goal_reached_at: int | None  # first position with all sections powered


def monitor(
    params: NMParams,
    run_: Run,
    which: Iterable[str] = specs_mod.SPEC_IDS,
    strict: bool = False,
) -> MonitorResult:
    """Check the instantiated schemata along a finite run.

    Step schemata fire at position t when their antecedent holds under
    readings[t]; the consequent is judged at t+1.  D7 is a state
    invariant checked at every position.  Reaching the all-powered
    state is reported as the D8 goal, not a violation.
    """
    instances = specs_mod.instantiate(params, which, strict=strict)
    compiled = [(inst, _literal_sets(inst)) for inst in instances
                if inst.spec_id not in ("D7", "D8")]
    d7 = [inst for inst in instances if inst.spec_id == "D7"]
    want_goal = any(inst.spec_id == "D8" for inst in instances)

    # position t labels = configuration of states[t] plus the reading
    # installed there (readings[t]); the final state has no reading yet
    steps = len(run_.readings)
    full = [
        frozenset(state_label_names(params, NMState(
            run_.states[t].powered, run_.states[t].level, run_.readings[t],
        )))
        for t in range(steps)
    ]
    configs = [
        frozenset(state_label_names(params, NMState(st.powered, st.level, VoltageReading.NONE)))
        for st in run_.states
    ]

    violations = []
    for t in range(steps):
        labels = full[t]
        for inst, (ant, cons) in compiled:
            if _holds(ant, labels) and not _holds(cons, configs[t + 1]):
                violations.append(Violation(inst.spec_id, inst.indices, t))

    for inst in d7:
        i, j = inst.indices
        wi, wj = f"W{i}", f"W{j}"
        for t, labels in enumerate(configs):
            if wi not in labels and wj in labels:
                violations.append(Violation(inst.spec_id, inst.indices, t))

    goal_at = None
    if want_goal:
        for t, st in enumerate(run_.states):
            if st.powered == params.n_sections:
                goal_at = t
                break

    violations.sort(key=lambda v: (v.position, v.spec_id, v.indices))
    return MonitorResult(violations=tuple(violations), goal_reached_at=goal_at)


# a propositional conjunction of literals as (positive, negative) name sets
_LiteralSets = tuple[frozenset[str], frozenset[str]]


def _literal_sets(inst: specs_mod.SpecInstance) -> tuple[_LiteralSets, _LiteralSets]:
    ant = _conj_literals(inst.antecedent)
    cons = _conj_literals(inst.consequent)
    if ant is None or cons is None:
        raise ValueError(f"{inst.name} is not a literal step schema")
    return ant, cons


def _conj_literals(f: Formula | None) -> _LiteralSets | None:
    """Split a conjunction of literals into positive/negative name sets."""
    if f is None:
        return None
    pos: set[str] = set()
    neg: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Bool(True):
                pass
            case Atom(name):
                pos.add(name)
            case Not(Atom(name)):
                neg.add(name)
            case And(a, b):
                stack.append(a)
                stack.append(b)
            case _:
                return None
    return frozenset(pos), frozenset(neg)


def _holds(sets: _LiteralSets, labels: frozenset[str]) -> bool:
    pos, neg = sets
    return pos <= labels and neg.isdisjoint(labels)
