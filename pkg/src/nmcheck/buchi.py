"""Translation of NNF LTL formulas into Buchi automata.

Uses the classic tableau (node expansion) construction: states carry the
propositional obligations they impose on the current label set, and one
acceptance set per until-subformula rules out runs that postpone an
until forever.  Degeneralization folds the acceptance sets into a
counter, yielding an ordinary Buchi automaton with transition labels.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .kripke import AtomTable
from . import ltl
from .ltl import And, Atom, Bool, Formula, Lasso, Next, Not, Or, Release, Until

# (atom id, polarity); a label set satisfies a literal set when every
# positive atom is present and every negative atom absent
Literal = tuple[int, bool]


class NotInNNF(ValueError):
    """The formula is not in negation normal form."""


@dataclass(frozen=True)
class GBANode:
    node_id: int
    literals: frozenset[Literal]
    successors: tuple[int, ...]


@dataclass(frozen=True)
class GeneralizedBuchi:
    """State-labelled generalized Buchi automaton.

    A run over a word of label sets stays consistent when each position's
    label set satisfies the node's literals; it accepts when every
    acceptance set is visited infinitely often.
    """

    nodes: tuple[GBANode, ...]
    initial: tuple[int, ...]
    acceptance: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class BuchiAutomaton:
    """Nondeterministic Buchi automaton with literal-set transition labels."""

    num_states: int
    initial: tuple[int, ...]
    accepting: frozenset[int]
    # per-state tuple of (literal set, destination)
    transitions: tuple[tuple[tuple[frozenset[Literal], int], ...], ...]

    def dump(self) -> str:
        """Line-oriented debug form; not a stability-guaranteed format."""
        lines = [f"states: {self.num_states}",
                 "initial: " + " ".join(map(str, self.initial)),
                 "accepting: " + " ".join(map(str, sorted(self.accepting)))]
        for src in range(self.num_states):
            for lits, dst in self.transitions[src]:
                guard = " ".join(
                    ("" if pos else "!") + str(aid)
                    for aid, pos in sorted(lits)
                ) or "true"
                lines.append(f"{src} -[{guard}]-> {dst}")
        return "\n".join(lines) + "\n"


def _check_nnf(f: Formula) -> None:
    match f:
        case Bool() | Atom():
            return
        case Not(Atom()):
            return
        case And(a, b) | Or(a, b) | Until(a, b) | Release(a, b):
            _check_nnf(a)
            _check_nnf(b)
        case Next(g):
            _check_nnf(g)
        case _:
            raise NotInNNF(f"operator not allowed in NNF: {f}")


def _until_subformulas(f: Formula) -> list[Until]:
    """Until subformulas in deterministic preorder, deduplicated."""
    seen: list[Until] = []

    def walk(g: Formula) -> None:
        match g:
            case Until(a, b):
                if g not in seen:
                    seen.append(g)
                walk(a)
                walk(b)
            case And(a, b) | Or(a, b) | Release(a, b):
                walk(a)
                walk(b)
            case Next(h) | Not(h):
                walk(h)
            case _:
                pass

    walk(f)
    return seen


class _NodeRec:
    __slots__ = ("node_id", "incoming", "old", "nxt")

    def __init__(self, node_id: int, incoming: set[int], old: frozenset, nxt: frozenset):
        self.node_id = node_id
        self.incoming = incoming
        self.old = old
        self.nxt = nxt


_INIT = -1


def translate(f: Formula, atoms: AtomTable) -> GeneralizedBuchi:
    """Tableau translation of an NNF formula.

    The automaton accepts exactly the infinite words (over label sets)
    satisfying the formula; atom names are resolved against `atoms`.
    """
    _check_nnf(f)
    for name in sorted(ltl.atoms_of(f)):
        atoms.id(name)  # raise UnknownAtom early

    # fragment: (incoming node ids, pending formulas as a stack, old, next)
    nodes: dict[tuple[frozenset, frozenset], _NodeRec] = {}
    fragments: list[tuple[set[int], list[Formula], set[Formula], set[Formula]]] = [
        ({_INIT}, [f], set(), set())
    ]
    while fragments:
        inc, new, old, nxt = fragments.pop()
        if not new:
            key = (frozenset(old), frozenset(nxt))
            rec = nodes.get(key)
            if rec is not None:
                rec.incoming.update(inc)
            else:
                rec = _NodeRec(len(nodes), set(inc), key[0], key[1])
                nodes[key] = rec
                fragments.append(({rec.node_id}, list(key[1]), set(), set()))
            continue
        g = new.pop()
        if g in old:
            fragments.append((inc, new, old, nxt))
            continue
        match g:
            case Bool(False):
                continue  # contradictory fragment, discard
            case Bool(True):
                fragments.append((inc, new, old, nxt))
            case Atom() | Not(Atom()):
                negated = g.operand if isinstance(g, Not) else Not(g)
                if negated in old:
                    continue  # contradictory fragment, discard
                fragments.append((inc, new, old | {g}, nxt))
            case And(a, b):
                fragments.append((inc, new + [a, b], old | {g}, nxt))
            case Or(a, b):
                fragments.append((set(inc), new + [a], old | {g}, set(nxt)))
                fragments.append((inc, new + [b], old | {g}, nxt))
            case Next(a):
                fragments.append((inc, new, old | {g}, nxt | {a}))
            case Until(a, b):
                fragments.append((set(inc), new + [a], old | {g}, nxt | {g}))
                fragments.append((inc, new + [b], old | {g}, nxt))
            case Release(a, b):
                fragments.append((set(inc), new + [b], old | {g}, nxt | {g}))
                fragments.append((inc, new + [a, b], old | {g}, nxt))
            case _:
                raise NotInNNF(f"operator not allowed in NNF: {g}")

    recs = sorted(nodes.values(), key=lambda r: r.node_id)
    succ: list[list[int]] = [[] for _ in recs]
    initial = []
    for rec in recs:
        for src in sorted(rec.incoming):
            if src == _INIT:
                initial.append(rec.node_id)
            else:
                succ[src].append(rec.node_id)

    def lits(rec: _NodeRec) -> frozenset[Literal]:
        out = set()
        for g in rec.old:
            if isinstance(g, Atom):
                out.add((atoms.id(g.name), True))
            elif isinstance(g, Not):
                out.add((atoms.id(g.operand.name), False))
        return frozenset(out)

    acceptance = []
    for u in _until_subformulas(f):
        # `true` never lands in `old`, so an `x U true` counts as fulfilled
        acceptance.append(frozenset(
            rec.node_id for rec in recs
            if u not in rec.old or u.right in rec.old or u.right == ltl.TRUE
        ))

    return GeneralizedBuchi(
        nodes=tuple(
            GBANode(rec.node_id, lits(rec), tuple(sorted(succ[rec.node_id])))
            for rec in recs
        ),
        initial=tuple(sorted(initial)),
        acceptance=tuple(acceptance),
    )


def degeneralize(g: GeneralizedBuchi) -> BuchiAutomaton:
    """Fold the acceptance sets into a waiting counter.

    State (q, i) waits for acceptance set i; passing through a member of
    set i advances the counter, and completing a full round is the
    single Buchi acceptance condition.  With no acceptance sets the
    structure is copied once and every state accepts.
    """
    k = len(g.acceptance)
    if k == 0:
        transitions = tuple(
            tuple((g.nodes[src].literals, dst) for dst in g.nodes[src].successors)
            for src in range(len(g.nodes))
        )
        return BuchiAutomaton(
            num_states=len(g.nodes),
            initial=g.initial,
            accepting=frozenset(range(len(g.nodes))),
            transitions=transitions,
        )

    index: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []

    def intern(q: int, i: int) -> int:
        sid = index.get((q, i))
        if sid is None:
            sid = len(order)
            index[(q, i)] = sid
            order.append((q, i))
        return sid

    initial = tuple(intern(q, 0) for q in g.initial)
    frontier = deque(range(len(order)))
    transitions: dict[int, list[tuple[frozenset[Literal], int]]] = {}
    while frontier:
        sid = frontier.popleft()
        if sid in transitions:
            continue
        q, i = order[sid]
        i2 = (i + 1) % k if q in g.acceptance[i] else i
        outs = []
        for dst in g.nodes[q].successors:
            before = len(order)
            tid = intern(dst, i2)
            if tid >= before:
                frontier.append(tid)
            outs.append((g.nodes[q].literals, tid))
        transitions[sid] = outs

    accepting = frozenset(
        sid for sid, (q, i) in enumerate(order)
        if i == k - 1 and q in g.acceptance[k - 1]
    )
    return BuchiAutomaton(
        num_states=len(order),
        initial=initial,
        accepting=accepting,
        transitions=tuple(tuple(transitions[s]) for s in range(len(order))),
    )


def satisfies(labels: frozenset[int], literals: frozenset[Literal]) -> bool:
    return all((aid in labels) == positive for aid, positive in literals)


def accepts_lasso(a: BuchiAutomaton, path: Lasso) -> bool:
    """Whether some run over stem . cycle^omega is accepting.

    Decided on the product of the automaton with the lasso positions: a
    reachable accepting product state lying on a cycle witnesses
    acceptance.  Used as the membership oracle in tests; intentionally
    independent of the emptiness checkers.
    """
    labels = list(path.stem) + list(path.cycle)
    n = len(labels)
    loop = len(path.stem)

    def succ(pos: int, q: int):
        nxt = pos + 1 if pos + 1 < n else loop
        for lits, q2 in a.transitions[q]:
            if satisfies(labels[pos], lits):
                yield nxt, q2

    start = [(0, q) for q in a.initial]
    reached = set(start)
    frontier = deque(start)
    while frontier:
        node = frontier.popleft()
        for t in succ(*node):
            if t not in reached:
                reached.add(t)
                frontier.append(t)

    for node in reached:
        if node[1] not in a.accepting:
            continue
        # can the accepting node reach itself through at least one edge?
        frontier = deque(succ(*node))
        seen = set(frontier)
        hit = node in seen
        while frontier and not hit:
            cur = frontier.popleft()
            for t in succ(*cur):
                if t == node:
                    hit = True
                    break
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
        if hit:
            return True
    return False
