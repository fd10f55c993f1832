"""Shared test helpers: random generators, controller mutants and a tiny
interpreter for the emitted SMV next-state logic."""
from __future__ import annotations

import random
import re

from nmcheck import kripke
from nmcheck.ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Implies,
    Lasso,
    Next,
    Not,
    Or,
    Release,
    Until,
    WeakUntil,
)
from nmcheck.nm_model import VoltageReading, controller_step

PQR = kripke.AtomTable(["p", "q", "r"])


# ---------------------------------------------------------------- generators

def rand_formula(rng: random.Random, depth: int):
    """Random formula over p, q, r with operator depth <= `depth`."""
    if depth == 0:
        return rng.choice([Atom("p"), Atom("q"), Atom("r"), TRUE, FALSE])
    kind = rng.randrange(12)
    if kind <= 2:
        return rand_formula(rng, 0)
    if kind == 3:
        return Not(rand_formula(rng, depth - 1))
    if kind == 4:
        return And(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))
    if kind == 5:
        return Or(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))
    if kind == 6:
        return Implies(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))
    if kind == 7:
        return Next(rand_formula(rng, depth - 1))
    if kind == 8:
        return Eventually(rand_formula(rng, depth - 1))
    if kind == 9:
        return Always(rand_formula(rng, depth - 1))
    if kind == 10:
        return Until(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))
    cls = rng.choice([WeakUntil, Release])
    return cls(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))


def rand_labels(rng: random.Random) -> frozenset[int]:
    return frozenset(i for i in range(3) if rng.random() < 0.5)


def rand_lasso(rng: random.Random, max_stem: int = 5, max_cycle: int = 4) -> Lasso:
    stem = tuple(rand_labels(rng) for _ in range(rng.randrange(max_stem + 1)))
    cycle = tuple(rand_labels(rng) for _ in range(rng.randrange(1, max_cycle + 1)))
    return Lasso(stem, cycle)


def rand_system(rng: random.Random, max_states: int = 6) -> kripke.TransitionSystem:
    """Random total transition system over the p/q/r atoms."""
    n = rng.randrange(1, max_states + 1)
    labels = [[a for a in "pqr" if rng.random() < 0.4] for _ in range(n)]
    edges = []
    for s in range(n):
        outs = [t for t in range(n) if rng.random() < 0.4]
        if not outs:
            outs = [rng.randrange(n)]
        edges.extend((s, t) for t in outs)
    return kripke.build(PQR, labels, edges, 0)


def rand_single_path_system(rng: random.Random, max_states: int = 6) -> kripke.TransitionSystem:
    """Deterministic system (one successor per state): exactly one path."""
    n = rng.randrange(1, max_states + 1)
    labels = [[a for a in "pqr" if rng.random() < 0.4] for _ in range(n)]
    edges = [(s, s + 1) for s in range(n - 1)]
    edges.append((n - 1, rng.randrange(n)))
    return kripke.build(PQR, labels, edges, 0)


def rand_trace(rng: random.Random, max_len: int = 50) -> list[VoltageReading]:
    choices = (VoltageReading.LOW, VoltageReading.NORMAL, VoltageReading.HIGH)
    return [rng.choice(choices) for _ in range(rng.randrange(1, max_len + 1))]


# ------------------------------------------------------------------- mutants

def mutant_level_up_unguarded(params, state):
    """Level-up guard removed: always level up on low (clamped at M)."""
    if state.reading is VoltageReading.LOW:
        return state.powered, min(state.level + 1, params.m_levels)
    return controller_step(params, state)


def mutant_no_section_increment(params, state):
    """Section increment skipped on normal once any section is powered.

    The bootstrap increment is kept: with it removed too, no powered
    state is reachable and the D5 antecedent becomes vacuous.
    """
    if state.reading is VoltageReading.NORMAL and state.powered >= 1:
        return state.powered, state.level
    return controller_step(params, state)


def mutant_hold_on_high_at_min(params, state):
    """Suspend-all replaced by hold on high at the minimum level."""
    if state.reading is VoltageReading.HIGH and state.level == 1:
        return state.powered, 1
    return controller_step(params, state)


MUTANTS = {
    "level_up_unguarded": (mutant_level_up_unguarded, ("D1", "D3")),
    "no_section_increment": (mutant_no_section_increment, ("D5",)),
    "hold_on_high_at_min": (mutant_hold_on_high_at_min, ("D2",)),
}


# ----------------------------------------------------- SMV case interpreter

_CASE_ROW = re.compile(r"^\s*(.+?)\s*:\s*(.+?);$")


def parse_smv_cases(text: str) -> dict[str, list[tuple[str, str]]]:
    """Extract the guard/result rows of every `next(x) := case ... esac`."""
    cases: dict[str, list[tuple[str, str]]] = {}
    current: str | None = None
    for line in text.splitlines():
        stripped = line.strip()
        m = re.match(r"next\((\w)\) :=$", stripped)
        if m:
            current = m.group(1)
            cases[current] = []
            continue
        if stripped == "esac;":
            current = None
            continue
        if current is not None and stripped != "case":
            row = _CASE_ROW.match(line)
            assert row, f"unparseable case row: {line!r}"
            cases[current].append((row.group(1), row.group(2)))
    return cases


def _eval_term(term: str, env: dict) -> bool:
    m = re.fullmatch(r"(\w+)\s*(=|<|>)\s*(\w+)", term.strip())
    assert m, f"unparseable guard term: {term!r}"
    lhs, op, rhs = m.groups()
    left = env[lhs]
    right = env[rhs] if rhs in env else (int(rhs) if rhs.lstrip("-").isdigit() else rhs)
    if op == "=":
        return left == right
    if op == "<":
        return left < right
    return left > right


def _eval_result(expr: str, env: dict) -> int:
    m = re.fullmatch(r"(\w+)\s*([+-])\s*(\d+)", expr.strip())
    if m:
        base, op, amount = m.groups()
        value = env[base]
        return value + int(amount) if op == "+" else value - int(amount)
    expr = expr.strip()
    if expr in env:
        return env[expr]
    return int(expr)


def interpret_smv_step(cases: dict, k: int, j: int, v: str) -> tuple[int, int]:
    """Evaluate the emitted next(k)/next(j) case logic for one state."""
    env = {"k": k, "j": j, "v": v}
    out = {}
    for var in ("k", "j"):
        for guard, result in cases[var]:
            if all(_eval_term(t, env) for t in guard.split("&")):
                out[var] = _eval_result(result, env)
                break
        else:
            raise AssertionError(f"no case row matched for {var} in state {env}")
    return out["k"], out["j"]
