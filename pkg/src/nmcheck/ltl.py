"""Linear temporal logic: syntax tree, parser, normal forms and the
exact semantics on ultimately periodic paths (the test oracle).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .kripke import AtomTable


class Formula:
    """Base class of all formula nodes."""

    def __str__(self) -> str:
        return to_str(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Bool(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class WeakUntil(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


TRUE = Bool(True)
FALSE = Bool(False)


@dataclass(frozen=True)
class Lasso:
    """Finite representation of the infinite path stem . cycle^omega.

    Entries are label sets (atom ids).  The cycle must be nonempty.
    """

    stem: tuple[frozenset[int], ...]
    cycle: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")


class ParseError(ValueError):
    """Formula text could not be parsed; `position` is a 0-based offset."""

    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position


_TOKEN_RE = re.compile(r"(->)|([()&|!])|([A-Za-z_][A-Za-z0-9_]*)|(\S)")
_UNARY = {"!", "X", "F", "G"}
_BINARY_TEMPORAL = {"U", "W", "R"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.group(4):
            raise ParseError(pos, f"unknown token {text[pos]!r}")
        tok = m.group(0)
        if m.group(3):
            kind = "ident"
            if tok in ("true", "false"):
                kind = "const"
            elif tok in _UNARY or tok in _BINARY_TEMPORAL:
                kind = "op"
        else:
            kind = "op"
        tokens.append((kind, tok, pos))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent; precedence (tightest first): unary, U/W/R, &, |, ->."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError(len(self.text), "unexpected end of formula")
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != text:
            at = tok[2] if tok else len(self.text)
            raise ParseError(at, f"expected {text!r}")
        self.pos += 1

    def parse(self) -> Formula:
        f = self.implies()
        tok = self.peek()
        if tok is not None:
            raise ParseError(tok[2], f"unexpected token {tok[1]!r}")
        return f

    def implies(self) -> Formula:
        left = self.disj()
        tok = self.peek()
        if tok and tok[1] == "->":
            self.take()
            return Implies(left, self.implies())  # right-associative
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while (tok := self.peek()) and tok[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.until()
        while (tok := self.peek()) and tok[1] == "&":
            self.take()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok and tok[1] in _BINARY_TEMPORAL:
            op = self.take()[1]
            right = self.until()  # right-associative
            cls = {"U": Until, "W": WeakUntil, "R": Release}[op]
            return cls(left, right)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok and tok[1] in _UNARY:
            op = self.take()[1]
            sub = self.unary()
            cls = {"!": Not, "X": Next, "F": Eventually, "G": Always}[op]
            return cls(sub)
        return self.primary()

    def primary(self) -> Formula:
        kind, tok, at = self.take()
        if tok == "(":
            f = self.implies()
            self.expect(")")
            return f
        if kind == "const":
            return TRUE if tok == "true" else FALSE
        if kind == "ident":
            return Atom(tok)
        raise ParseError(at, f"unexpected token {tok!r}")


def parse(text: str) -> Formula:
    """Parse concrete LTL syntax into a formula tree."""
    return _Parser(text).parse()


def to_str(f: Formula) -> str:
    """Canonical printer; `parse(to_str(f))` is structurally equal to `f`."""
    match f:
        case Atom(name):
            return name
        case Bool(v):
            return "true" if v else "false"
        case Not(g):
            return "!" + _wrap(g)
        case Next(g):
            return "X" + _pad(_wrap(g))
        case Eventually(g):
            return "F" + _pad(_wrap(g))
        case Always(g):
            return "G" + _pad(_wrap(g))
        case And(a, b):
            return f"({to_str(a)} & {to_str(b)})"
        case Or(a, b):
            return f"({to_str(a)} | {to_str(b)})"
        case Implies(a, b):
            return f"({to_str(a)} -> {to_str(b)})"
        case Until(a, b):
            return f"({to_str(a)} U {to_str(b)})"
        case WeakUntil(a, b):
            return f"({to_str(a)} W {to_str(b)})"
        case Release(a, b):
            return f"({to_str(a)} R {to_str(b)})"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula) -> str:
    # binary nodes already print parenthesized
    return to_str(f)


def _pad(s: str) -> str:
    return s if s.startswith("(") else " " + s


def atoms_of(f: Formula) -> set[str]:
    match f:
        case Atom(name):
            return {name}
        case Bool():
            return set()
        case Not(g) | Next(g) | Eventually(g) | Always(g):
            return atoms_of(g)
        case And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | WeakUntil(a, b) | Release(a, b):
            return atoms_of(a) | atoms_of(b)
    raise TypeError(f"not a formula: {f!r}")


def is_propositional(f: Formula) -> bool:
    """True when the formula contains no temporal operator."""
    match f:
        case Atom() | Bool():
            return True
        case Not(g):
            return is_propositional(g)
        case And(a, b) | Or(a, b) | Implies(a, b):
            return is_propositional(a) and is_propositional(b)
        case _:
            return False


def to_nnf(f: Formula) -> Formula:
    """Negation normal form over {literals, &, |, X, U, R}.

    Implication is eliminated, F becomes `true U .`, G becomes
    `false R .` and weak until is rewritten through release.  The result
    is equivalent to the input on every lasso.
    """
    match f:
        case Atom() | Bool():
            return f
        case Not(g):
            return _nnf_neg(g)
        case And(a, b):
            return And(to_nnf(a), to_nnf(b))
        case Or(a, b):
            return Or(to_nnf(a), to_nnf(b))
        case Implies(a, b):
            return Or(_nnf_neg(a), to_nnf(b))
        case Next(g):
            return Next(to_nnf(g))
        case Eventually(g):
            return Until(TRUE, to_nnf(g))
        case Always(g):
            return Release(FALSE, to_nnf(g))
        case Until(a, b):
            return Until(to_nnf(a), to_nnf(b))
        case WeakUntil(a, b):
            # a W b == b R (a | b)
            return Release(to_nnf(b), Or(to_nnf(a), to_nnf(b)))
        case Release(a, b):
            return Release(to_nnf(a), to_nnf(b))
    raise TypeError(f"not a formula: {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    """NNF of the negation of `f`."""
    match f:
        case Bool(v):
            return Bool(not v)
        case Atom():
            return Not(f)
        case Not(g):
            return to_nnf(g)
        case And(a, b):
            return Or(_nnf_neg(a), _nnf_neg(b))
        case Or(a, b):
            return And(_nnf_neg(a), _nnf_neg(b))
        case Implies(a, b):
            return And(to_nnf(a), _nnf_neg(b))
        case Next(g):
            return Next(_nnf_neg(g))
        case Eventually(g):
            return Release(FALSE, _nnf_neg(g))
        case Always(g):
            return Until(TRUE, _nnf_neg(g))
        case Until(a, b):
            return Release(_nnf_neg(a), _nnf_neg(b))
        case WeakUntil(a, b):
            return _nnf_neg(Release(b, Or(a, b)))
        case Release(a, b):
            return Until(_nnf_neg(a), _nnf_neg(b))
    raise TypeError(f"not a formula: {f!r}")


def simplify(f: Formula) -> Formula:
    """Bottom-up constant folding with a few cheap equivalences.

    Preserves negation normal form and lasso semantics; used to shrink
    formulas before automaton translation.  Rules: boolean identities,
    idempotence, complement detection on structurally equal operands,
    `X true`/`X false`, `x U true`, `x U false`, `false U x` kept (it is
    F x), `x U x`, and the duals for release.
    """
    match f:
        case Atom() | Bool():
            return f
        case Not(g):
            sub = simplify(g)
            if isinstance(sub, Bool):
                return Bool(not sub.value)
            return Not(sub)
        case And(a, b):
            left, right = simplify(a), simplify(b)
            if left == FALSE or right == FALSE:
                return FALSE
            if left == TRUE:
                return right
            if right == TRUE:
                return left
            if left == right:
                return left
            if _complementary(left, right):
                return FALSE
            return And(left, right)
        case Or(a, b):
            left, right = simplify(a), simplify(b)
            if left == TRUE or right == TRUE:
                return TRUE
            if left == FALSE:
                return right
            if right == FALSE:
                return left
            if left == right:
                return left
            if _complementary(left, right):
                return TRUE
            return Or(left, right)
        case Implies(a, b):
            left, right = simplify(a), simplify(b)
            if left == FALSE or right == TRUE:
                return TRUE
            if left == TRUE:
                return right
            return Implies(left, right)
        case Next(g):
            sub = simplify(g)
            if isinstance(sub, Bool):
                return sub
            return Next(sub)
        case Eventually(g):
            sub = simplify(g)
            if isinstance(sub, Bool):
                return sub
            return Eventually(sub)
        case Always(g):
            sub = simplify(g)
            if isinstance(sub, Bool):
                return sub
            return Always(sub)
        case Until(a, b):
            left, right = simplify(a), simplify(b)
            if isinstance(right, Bool):
                return right  # x U true = true, x U false = false
            if left == right:
                return left
            if left == FALSE:
                return right  # no step can be taken before the witness
            return Until(left, right)
        case WeakUntil(a, b):
            left, right = simplify(a), simplify(b)
            if right == TRUE or left == TRUE:
                return TRUE  # either disjunct of  (x U y) | G x  is met
            if right == FALSE:
                return Always(left) if not isinstance(left, Bool) else left
            if left == right:
                return left
            return WeakUntil(left, right)
        case Release(a, b):
            left, right = simplify(a), simplify(b)
            if isinstance(right, Bool):
                return right  # x R true = true, x R false = false
            if left == right:
                return left
            if left == TRUE:
                return right  # released immediately
            return Release(left, right)
    raise TypeError(f"not a formula: {f!r}")


def _complementary(a: Formula, b: Formula) -> bool:
    return (isinstance(b, Not) and b.operand == a) or (isinstance(a, Not) and a.operand == b)


def eval_on_lasso(f: Formula, path: Lasso, atoms: AtomTable) -> bool:
    """Exact LTL truth of `f` at position 0 of stem . cycle^omega.

    Computed by dynamic programming over the |stem| + |cycle| distinct
    positions: least fixpoint for U/F, greatest fixpoint for R/G/W on
    the loop.  This is the semantics oracle used to cross-check the
    automaton pipeline; keep it independent of the translation code.
    """
    labels = list(path.stem) + list(path.cycle)
    n = len(labels)
    loop = len(path.stem)
    nxt = list(range(1, n)) + [loop]
    memo: dict[Formula, list[bool]] = {}

    def vals(g: Formula) -> list[bool]:
        cached = memo.get(g)
        if cached is not None:
            return cached
        match g:
            case Atom(name):
                aid = atoms.id(name)
                out = [aid in labels[i] for i in range(n)]
            case Bool(v):
                out = [v] * n
            case Not(sub):
                out = [not x for x in vals(sub)]
            case And(a, b):
                va, vb = vals(a), vals(b)
                out = [x and y for x, y in zip(va, vb)]
            case Or(a, b):
                va, vb = vals(a), vals(b)
                out = [x or y for x, y in zip(va, vb)]
            case Implies(a, b):
                va, vb = vals(a), vals(b)
                out = [(not x) or y for x, y in zip(va, vb)]
            case Next(sub):
                vs = vals(sub)
                out = [vs[nxt[i]] for i in range(n)]
            case Eventually(sub):
                out = _lfp([True] * n, vals(sub), nxt)
            case Always(sub):
                out = _gfp([False] * n, vals(sub), nxt, conj=True)
            case Until(a, b):
                out = _lfp(vals(a), vals(b), nxt)
            case WeakUntil(a, b):
                # greatest fixpoint of b | (a & X .)
                out = _gfp(vals(a), vals(b), nxt, conj=False)
            case Release(a, b):
                out = _gfp(vals(a), vals(b), nxt, conj=True)
            case _:
                raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return vals(f)[0]


def _lfp(va: list[bool], vb: list[bool], nxt: list[int]) -> list[bool]:
    """Least fixpoint of  v[i] = b[i] or (a[i] and v[next i])."""
    n = len(nxt)
    v = [False] * n
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            new = vb[i] or (va[i] and v[nxt[i]])
            if new != v[i]:
                v[i] = new
                changed = True
    return v


def _gfp(va: list[bool], vb: list[bool], nxt: list[int], conj: bool) -> list[bool]:
    """Greatest fixpoint of  v[i] = b[i] (and|or) (a[i] ... X v).

    conj=True computes release (b & (a | Xv)); conj=False computes weak
    until (b | (a & Xv)).
    """
    n = len(nxt)
    v = [True] * n
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            if conj:
                new = vb[i] and (va[i] or v[nxt[i]])
            else:
                new = vb[i] or (va[i] and v[nxt[i]])
            if new != v[i]:
                v[i] = new
                changed = True
    return v


def eval_prop(f: Formula, labels: frozenset[int] | set[int], atoms: AtomTable) -> bool:
    """Evaluate a temporal-operator-free formula against one label set."""
    match f:
        case Atom(name):
            return atoms.id(name) in labels
        case Bool(v):
            return v
        case Not(g):
            return not eval_prop(g, labels, atoms)
        case And(a, b):
            return eval_prop(a, labels, atoms) and eval_prop(b, labels, atoms)
        case Or(a, b):
            return eval_prop(a, labels, atoms) or eval_prop(b, labels, atoms)
        case Implies(a, b):
            return (not eval_prop(a, labels, atoms)) or eval_prop(b, labels, atoms)
    raise ValueError(f"temporal operator in propositional context: {f}")


def conj(parts: list[Formula]) -> Formula:
    """Left-folded conjunction; the empty conjunction is `true`."""
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out
