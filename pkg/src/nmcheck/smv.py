"""SMV text emission for cross-checking the generated model externally.

The module keeps the SMV state space as the (k, j, v) triple and derives
the atomic propositions in a DEFINE block, so the external tool's
reachable state count matches the internal model.  Output ordering is
fixed; emission is deterministic byte for byte.
"""
from __future__ import annotations

from typing import Iterable

from . import specs as specs_mod
from .ltl import And, Atom, Bool, Eventually, Formula, Implies, Next, Not, Or, Always
from .nm_model import NMParams


def formula_to_smv(f: Formula) -> str:
    """Render a formula in SMV LTL syntax (TRUE/FALSE literals)."""
    match f:
        case Atom(name):
            return name
        case Bool(v):
            return "TRUE" if v else "FALSE"
        case Not(g):
            return "!" + formula_to_smv(g)
        case Next(g):
            return "X" + _spaced(g)
        case Eventually(g):
            return "F" + _spaced(g)
        case Always(g):
            return "G" + _spaced(g)
        case And(a, b):
            return f"({formula_to_smv(a)} & {formula_to_smv(b)})"
        case Or(a, b):
            return f"({formula_to_smv(a)} | {formula_to_smv(b)})"
        case Implies(a, b):
            return f"({formula_to_smv(a)} -> {formula_to_smv(b)})"
    raise ValueError(f"operator not supported in SMV output: {f}")


def _spaced(g: Formula) -> str:
    s = formula_to_smv(g)
    return s if s.startswith("(") else " " + s


def export_smv(
    params: NMParams,
    which: Iterable[str] = specs_mod.SPEC_IDS,
    strict: bool = False,
    literal_paper: bool = False,
) -> str:
    """Single-module SMV model with one LTLSPEC per instantiated schema.

    The next-state case analysis mirrors the controller step table row
    for row; statically impossible guards (M = 1 has no higher or lower
    level) are omitted.  next(v) is the nondeterministic reading set.
    """
    n, m = params.n_sections, params.m_levels
    lines = [
        "MODULE main",
        "VAR",
        f"    k : 0..{n};",
        f"    j : 1..{m};",
        "    v : {none, low, normal, high};",
        "ASSIGN",
        "    init(k) := 0;",
        f"    init(j) := {params.start_level};",
        "    init(v) := none;",
    ]

    k_rows = [("v = none", "k")]
    if m > 1:
        k_rows.append((f"v = low & j < {m}", "k"))
    k_rows.append((f"v = low & j = {m} & k > 0", "k - 1"))
    k_rows.append((f"v = low & j = {m} & k = 0", "0"))
    k_rows.append((f"v = normal & k < {n}", "k + 1"))
    k_rows.append((f"v = normal & k = {n}", "k"))
    if m > 1:
        k_rows.append(("v = high & j > 1", "k"))
    k_rows.append(("v = high & j = 1", "0"))

    j_rows = [("v = none", "j")]
    if m > 1:
        j_rows.append((f"v = low & j < {m}", "j + 1"))
    j_rows.append((f"v = low & j = {m}", "j"))
    j_rows.append(("v = normal", "j"))
    if m > 1:
        j_rows.append(("v = high & j > 1", "j - 1"))
    j_rows.append(("v = high & j = 1", "1"))

    for var, rows in (("k", k_rows), ("j", j_rows)):
        lines.append(f"    next({var}) :=")
        lines.append("        case")
        for guard, result in rows:
            lines.append(f"            {guard} : {result};")
        lines.append("        esac;")
    lines.append("    next(v) := {low, normal, high};")

    lines.append("DEFINE")
    for i in range(1, n + 1):
        lines.append(f"    W{i} := k >= {i};")
    for j in range(1, m + 1):
        lines.append(f"    L{j} := j = {j};")
    lines.append("    l := v = low;")
    lines.append("    n := v = normal;")
    lines.append("    h := v = high;")
    lines.append("")

    instances = specs_mod.instantiate(
        params, which, strict=strict, literal_paper=literal_paper
    )
    for inst in instances:
        if inst.polarity == specs_mod.REFUTATION_WITNESS:
            lines.append("-- must be refuted: the counterexample is the full-supply witness")
        lines.append(f"LTLSPEC {formula_to_smv(inst.formula)}")
    return "\n".join(lines) + "\n"
