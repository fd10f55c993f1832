"""Model checking: does a formula hold on every path from the initial state?

Decided by emptiness of the product of the system with a Buchi automaton
for the negated formula.  Two independent emptiness algorithms are
provided (nested DFS and an SCC-based search) so they can cross-check
each other; both extract lasso counterexamples.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import buchi, ltl
from .buchi import BuchiAutomaton, satisfies
from .kripke import TransitionSystem
from .ltl import Formula, Lasso, Not

ProductState = tuple[int, int]  # (system state, automaton state)


@dataclass(frozen=True)
class Counterexample:
    """Ultimately periodic system path violating the checked formula."""

    stem: tuple[int, ...]
    cycle: tuple[int, ...]

    def lasso(self, ts: TransitionSystem) -> Lasso:
        return Lasso(
            stem=tuple(ts.labels[s] for s in self.stem),
            cycle=tuple(ts.labels[s] for s in self.cycle),
        )


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Counterexample | None = None


class _Product:
    """On-the-fly product of a system with a Buchi automaton.

    Successors are generated in ascending (state id, automaton id) order
    so counterexamples are reproducible run to run.
    """

    def __init__(self, ts: TransitionSystem, ba: BuchiAutomaton):
        self.ts = ts
        self.ba = ba
        self._cache: dict[ProductState, tuple[ProductState, ...]] = {}

    def initial(self) -> tuple[ProductState, ...]:
        return tuple((self.ts.initial, q) for q in self.ba.initial)

    def accepting(self, node: ProductState) -> bool:
        return node[1] in self.ba.accepting

    def successors(self, node: ProductState) -> tuple[ProductState, ...]:
        cached = self._cache.get(node)
        if cached is not None:
            return cached
        s, q = node
        labels = self.ts.labels[s]
        targets = sorted({
            q2 for lits, q2 in self.ba.transitions[q] if satisfies(labels, lits)
        })
        out = tuple((s2, q2) for s2 in self.ts.successors[s] for q2 in targets)
        self._cache[node] = out
        return out


def check(ts: TransitionSystem, f: Formula, algorithm: str = "ndfs") -> Verdict:
    """Decide whether `f` holds on every path of `ts` from its initial state.

    A failed check carries a lasso counterexample that replays through
    the transition relation and satisfies the negated formula.
    """
    negated = ltl.simplify(ltl.to_nnf(Not(f)))
    ba = buchi.degeneralize(buchi.translate(negated, ts.atoms))
    product = _Product(ts, ba)
    if algorithm == "ndfs":
        found = _nested_dfs(product)
    elif algorithm == "scc":
        found = _scc_search(product)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if found is None:
        return Verdict(holds=True)
    stem, cycle = found
    return Verdict(
        holds=False,
        counterexample=Counterexample(
            stem=tuple(s for s, _ in stem),
            cycle=tuple(s for s, _ in cycle),
        ),
    )


def _nested_dfs(product: _Product):
    """Nested depth-first search for a reachable accepting cycle.

    The outer (blue) DFS explores the product; when an accepting state is
    finished, an inner (red) search looks for a path back to any state on
    the blue stack, which closes an accepting lasso.  Red marks persist
    across seeds, keeping the whole search linear.  Counterexample stems
    are taken from the blue stack and therefore never repeat a product
    state; no further minimization is attempted.
    """
    blue: set[ProductState] = set()
    red: set[ProductState] = set()
    for root in product.initial():
        if root in blue:
            continue
        blue.add(root)
        path = [root]
        on_path = {root}
        iters = [iter(product.successors(root))]
        while path:
            nxt = next(iters[-1], None)
            if nxt is not None:
                if nxt not in blue:
                    blue.add(nxt)
                    path.append(nxt)
                    on_path.add(nxt)
                    iters.append(iter(product.successors(nxt)))
                continue
            node = path[-1]
            if product.accepting(node):
                back = _red_search(product, node, on_path, red)
                if back is not None:
                    idx = path.index(back[-1])
                    stem = tuple(path[:idx])
                    cycle = tuple(path[idx:]) + tuple(back[1:-1])
                    return stem, cycle
            path.pop()
            on_path.discard(node)
            iters.pop()
    return None


def _red_search(product, seed, on_path, red):
    """BFS from `seed` for any blue-stack state; returns the connecting path."""
    red.add(seed)
    parents: dict[ProductState, ProductState] = {}
    frontier = deque([seed])
    while frontier:
        cur = frontier.popleft()
        for t in product.successors(cur):
            if t in on_path:
                path = [t, cur]
                while path[-1] != seed:
                    path.append(parents[path[-1]])
                path.reverse()
                return path
            if t not in red:
                red.add(t)
                parents[t] = cur
                frontier.append(t)
    return None


def _scc_search(product: _Product):
    """Emptiness via strongly connected components (iterative Tarjan).

    The product fails iff some reachable SCC with at least one internal
    edge contains an accepting state.  Kept independent of the nested
    DFS so the two can cross-check each other.
    """
    index: dict[ProductState, int] = {}
    low: dict[ProductState, int] = {}
    on_stack: set[ProductState] = set()
    stack: list[ProductState] = []
    counter = 0
    candidates: list[list[ProductState]] = []

    for root in product.initial():
        if root in index:
            continue
        work: list[tuple[ProductState, int]] = [(root, 0)]
        while work:
            node, child = work[-1]
            if child == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            succ = product.successors(node)
            if child < len(succ):
                work[-1] = (node, child + 1)
                t = succ[child]
                if t not in index:
                    work.append((t, 0))
                elif t in on_stack:
                    low[node] = min(low[node], index[t])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                if _is_candidate(product, comp):
                    candidates.append(comp)

    if not candidates:
        return None
    # deterministic choice: the component holding the smallest product state
    comp = min(candidates, key=lambda c: min(c))
    members = set(comp)
    accepting = min(n for n in comp if product.accepting(n))
    stem = _bfs_path(product.initial(), lambda n: n == accepting, product)
    assert stem is not None
    cycle_back = _bfs_cycle(product, accepting, members)
    return tuple(stem[:-1]), (accepting,) + tuple(cycle_back)


def _is_candidate(product, comp):
    if not any(product.accepting(n) for n in comp):
        return False
    if len(comp) > 1:
        return True
    node = comp[0]
    return node in product.successors(node)


def _bfs_path(starts, is_goal, product):
    parents: dict[ProductState, ProductState | None] = {}
    frontier = deque()
    for s in starts:
        if s not in parents:
            parents[s] = None
            frontier.append(s)
    while frontier:
        cur = frontier.popleft()
        if is_goal(cur):
            path = [cur]
            while parents[path[-1]] is not None:
                path.append(parents[path[-1]])
            path.reverse()
            return path
        for t in product.successors(cur):
            if t not in parents:
                parents[t] = cur
                frontier.append(t)
    return None


def _bfs_cycle(product, node, members):
    """Shortest nonempty path node -> ... -> node inside one SCC."""
    parents: dict[ProductState, ProductState] = {}
    frontier = deque()
    for t in product.successors(node):
        if t == node:
            return ()
        if t in members and t not in parents:
            parents[t] = node
            frontier.append(t)
    while frontier:
        cur = frontier.popleft()
        for t in product.successors(cur):
            if t == node:
                path = [cur]
                while path[-1] != node:
                    nxt = parents[path[-1]]
                    if nxt == node:
                        break
                    path.append(nxt)
                path.reverse()
                return tuple(path)
            if t in members and t not in parents:
                parents[t] = cur
                frontier.append(t)
    raise AssertionError("SCC candidate without a cycle")


def exists_path_reaching(ts: TransitionSystem, goal: Formula) -> list[int] | None:
    """Shortest path from the initial state to a goal-satisfying state.

    `goal` must be propositional.  Returns the state-id path (initial
    state included) or None when no reachable state satisfies the goal.
    """
    if not ltl.is_propositional(goal):
        raise ValueError(f"goal must be propositional: {goal}")
    parents: dict[int, int | None] = {ts.initial: None}
    frontier = deque([ts.initial])
    while frontier:
        s = frontier.popleft()
        if ltl.eval_prop(goal, ts.labels[s], ts.atoms):
            path = [s]
            while parents[path[-1]] is not None:
                path.append(parents[path[-1]])
            path.reverse()
            return path
        for t in ts.successors[s]:
            if t not in parents:
                parents[t] = s
                frontier.append(t)
    return None


def validate_counterexample(ts: TransitionSystem, f: Formula, cx: Counterexample) -> bool:
    """Independent check of a counterexample: a real path satisfying !f."""
    states = list(cx.stem) + list(cx.cycle)
    if not cx.cycle or any(not 0 <= s < ts.num_states for s in states):
        return False
    if states[0] != ts.initial:
        return False
    for a, b in zip(states, states[1:]):
        if b not in ts.successors[a]:
            return False
    if cx.cycle[0] not in ts.successors[cx.cycle[-1]]:
        return False
    return ltl.eval_on_lasso(Not(f), cx.lasso(ts), ts.atoms)
