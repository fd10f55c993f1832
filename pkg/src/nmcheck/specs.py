"""Requirement schemata D1..D8 instantiated as LTL formulas for given (N, M).

D1..D7 are universal properties that must hold on the generated model.
D8 ("full supply is possible") is existential, so its negation D8' is
checked instead: refuting D8' yields a path witnessing D8.

Level anchoring: D1 triggers at the maximum level LM and D2 at the
minimum level L1.  The swapped variants (D1 at L1, D2 at LM) are kept
behind `literal_paper` for documentation; they are expected to fail.
The D1 swapped variant pins the boundary section `!Wi` in its
consequent: without that pin the wrong anchor is unobservable, because
the lax consequent is satisfied by level-up behaviour as well.

Strict mode sharpens the schemata from "at least i sections" to
"exactly i sections" and pins the boundary atom of the consequent, so
that holding is distinguished from actually switching.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from . import ltl
from .check import Counterexample, Verdict, check as check_formula
from .ltl import Always, And, Atom, Eventually, Formula, Implies, Next, Not, conj
from .nm_model import NMParams, NMSystem, StepFn, build_transition_system

SPEC_IDS = ("D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8")

UNIVERSAL = "universal"
REFUTATION_WITNESS = "refutation-witness"


@dataclass(frozen=True)
class SpecInstance:
    spec_id: str
    indices: tuple[int, ...]
    formula: Formula
    polarity: str
    # decomposition for monitoring: G(antecedent -> X consequent)
    antecedent: Formula | None = None
    consequent: Formula | None = None
    # D8 reach goal
    goal: Formula | None = None

    @property
    def name(self) -> str:
        if not self.indices:
            return self.spec_id
        inner = ",".join(f"{k}={v}" for k, v in zip("ij", self.indices))
        return f"{self.spec_id}[{inner}]"


def _w(i: int) -> Atom:
    return Atom(f"W{i}")


def _level(j: int) -> Atom:
    return Atom(f"L{j}")


def _sections(i: int) -> list[Formula]:
    return [_w(x) for x in range(1, i + 1)]


def _step_instance(spec_id, indices, ant, cons, goal=None) -> SpecInstance:
    return SpecInstance(
        spec_id=spec_id,
        indices=indices,
        formula=Always(Implies(ant, Next(cons))),
        polarity=UNIVERSAL,
        antecedent=ant,
        consequent=cons,
        goal=goal,
    )


def instantiate(
    params: NMParams,
    which: Iterable[str] = SPEC_IDS,
    strict: bool = False,
    literal_paper: bool = False,
) -> list[SpecInstance]:
    """Concrete formulas for the selected schemata.

    Empty index ranges (D3/D4 when M=1, D5 when N=1, D7 when N=1)
    produce no instances.  Instance counts: D1 N, D2 1, D3 N(M-1),
    D4 N(M-1), D5 N-1, D6 1, D7 N(N-1)/2, D8 1.
    """
    selected = _normalize_which(which)
    n, m = params.n_sections, params.m_levels
    low, normal, high = Atom("l"), Atom("n"), Atom("h")
    out: list[SpecInstance] = []

    def exact(i: int) -> list[Formula]:
        # pin "exactly i sections" when the boundary exists
        if strict and i < n:
            return [Not(_w(i + 1))]
        return []

    if "D1" in selected:
        anchor = _level(1) if literal_paper else _level(m)
        for i in range(1, n + 1):
            ant = conj([anchor, low] + _sections(i) + exact(i))
            cons_parts: list[Formula] = _sections(i - 1)
            if strict or literal_paper:
                cons_parts.append(Not(_w(i)))
            out.append(_step_instance("D1", (i,), ant, conj(cons_parts)))

    if "D2" in selected:
        anchor = _level(m) if literal_paper else _level(1)
        ant = conj([anchor, high])
        cons = conj([Not(_w(i)) for i in range(1, n + 1)])
        out.append(_step_instance("D2", (), ant, cons))

    if "D3" in selected:
        for i in range(1, n + 1):
            for j in range(1, m):
                ant = conj([_level(j), low] + _sections(i) + exact(i))
                cons = conj([_level(j + 1)] + _sections(i) + exact(i))
                out.append(_step_instance("D3", (i, j), ant, cons))

    if "D4" in selected:
        for i in range(1, n + 1):
            for j in range(2, m + 1):
                ant = conj([_level(j), high] + _sections(i) + exact(i))
                cons = conj([_level(j - 1)] + _sections(i) + exact(i))
                out.append(_step_instance("D4", (i, j), ant, cons))

    if "D5" in selected:
        for i in range(1, n):
            ant = conj([normal] + _sections(i) + exact(i))
            cons = conj(_sections(i + 1))
            out.append(_step_instance("D5", (i,), ant, cons))

    if "D6" in selected:
        ant = conj([normal] + _sections(n))
        cons = conj(_sections(n))
        out.append(_step_instance("D6", (), ant, cons))

    if "D7" in selected:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                body = Not(And(Not(_w(i)), _w(j)))
                out.append(SpecInstance(
                    spec_id="D7",
                    indices=(i, j),
                    formula=Always(body),
                    polarity=UNIVERSAL,
                ))

    if "D8" in selected:
        goal = conj(_sections(n))
        out.append(SpecInstance(
            spec_id="D8",
            indices=(),
            formula=Not(Eventually(goal)),
            polarity=REFUTATION_WITNESS,
            goal=goal,
        ))

    return out


def _normalize_which(which: Iterable[str]) -> tuple[str, ...]:
    ids = tuple(which)
    unknown = [x for x in ids if x not in SPEC_IDS]
    if unknown:
        raise ValueError(f"unknown spec ids: {', '.join(unknown)}")
    return ids


@dataclass(frozen=True)
class SpecResult:
    instance: SpecInstance
    holds: bool
    passed: bool
    counterexample: Counterexample | None
    witness: tuple[int, ...] | None  # D8: path to the all-powered state


@dataclass(frozen=True)
class SuiteReport:
    system: NMSystem
    strict: bool
    literal_paper: bool
    results: tuple[SpecResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_text(self) -> str:
        lines = []
        params = self.system.params
        mode = "strict" if self.strict else "faithful"
        if self.literal_paper:
            mode += ", literal-paper anchors"
        lines.append(
            f"N={params.n_sections} M={params.m_levels} ({mode}): "
            f"{sum(r.passed for r in self.results)}/{len(self.results)} obligations met"
        )
        for r in self.results:
            lines.append(f"  {r.instance.name}: {_verdict_word(r)}")
            if r.counterexample is not None and r.instance.polarity == UNIVERSAL:
                lines.extend(_render_lasso(self.system, r.counterexample, indent="    "))
            if r.witness is not None:
                lines.append("    witness path:")
                for sid in r.witness:
                    lines.append(f"      {sid}: {self.system.bits(sid)}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        params = self.system.params
        return {
            "sections": params.n_sections,
            "levels": params.m_levels,
            "strict": self.strict,
            "literal_paper": self.literal_paper,
            "all_passed": self.all_passed,
            "results": [
                {
                    "id": r.instance.spec_id,
                    "indices": list(r.instance.indices),
                    "formula": str(r.instance.formula),
                    "polarity": r.instance.polarity,
                    "holds": r.holds,
                    "passed": r.passed,
                    "counterexample": _cx_json(self.system, r.counterexample),
                    "witness": _witness_json(self.system, r.witness),
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _verdict_word(r: SpecResult) -> str:
    if r.instance.polarity == UNIVERSAL:
        return "holds" if r.holds else "FAILED"
    if r.passed:
        return "refuted as required (goal witnessed)"
    return "NOT refuted (goal unreachable)"


def _render_lasso(system: NMSystem, cx: Counterexample, indent: str) -> list[str]:
    lines = [indent + "counterexample:"]
    for part, ids in (("stem", cx.stem), ("cycle", cx.cycle)):
        for sid in ids:
            labels = ",".join(system.ts.label_names(sid)) or "-"
            lines.append(f"{indent}  {part} {sid}: {system.bits(sid)}  {{{labels}}}")
    return lines


def _cx_json(system: NMSystem, cx: Counterexample | None):
    if cx is None:
        return None
    def state(sid: int) -> dict:
        return {
            "id": sid,
            "bits": system.bits(sid),
            "labels": list(system.ts.label_names(sid)),
        }
    return {
        "stem": [state(s) for s in cx.stem],
        "cycle": [state(s) for s in cx.cycle],
    }


def _witness_json(system: NMSystem, witness: tuple[int, ...] | None):
    if witness is None:
        return None
    return [
        {"id": sid, "bits": system.bits(sid), "labels": list(system.ts.label_names(sid))}
        for sid in witness
    ]


def run_suite(
    params: NMParams,
    which: Iterable[str] = SPEC_IDS,
    strict: bool = False,
    literal_paper: bool = False,
    step: StepFn | None = None,
    algorithm: str = "ndfs",
) -> SuiteReport:
    """Build the model once and check every selected instance.

    Universal instances pass when they hold.  The D8' instance passes
    when it is refuted; the refutation prefix reaching the all-powered
    state is reported as the D8 witness.
    """
    system = build_transition_system(params, step=step)
    instances = instantiate(params, which, strict=strict, literal_paper=literal_paper)
    results = []
    for inst in instances:
        verdict = check_formula(system.ts, inst.formula, algorithm=algorithm)
        if inst.polarity == UNIVERSAL:
            results.append(SpecResult(
                instance=inst,
                holds=verdict.holds,
                passed=verdict.holds,
                counterexample=verdict.counterexample,
                witness=None,
            ))
        else:
            witness = None
            if not verdict.holds:
                witness = _goal_prefix(system, inst.formula, verdict)
            results.append(SpecResult(
                instance=inst,
                holds=verdict.holds,
                passed=witness is not None,
                counterexample=verdict.counterexample,
                witness=witness,
            ))
    return SuiteReport(
        system=system,
        strict=strict,
        literal_paper=literal_paper,
        results=tuple(results),
    )


def _goal_prefix(system: NMSystem, formula: Formula, verdict: Verdict) -> tuple[int, ...] | None:
    """Shortest prefix of the D8' counterexample reaching the goal state."""
    cx = verdict.counterexample
    if cx is None:
        return None
    goal = _strip_not_eventually(formula)
    unrolled = list(cx.stem) + list(cx.cycle)
    for pos, sid in enumerate(unrolled):
        if ltl.eval_prop(goal, system.ts.labels[sid], system.atoms):
            return tuple(unrolled[:pos + 1])
    return None


def _strip_not_eventually(formula: Formula) -> Formula:
    match formula:
        case Not(Eventually(goal)):
            return goal
    raise ValueError(f"not a refutation-witness formula: {formula}")
