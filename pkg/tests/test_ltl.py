"""Tests for parsing, printing, NNF and the lasso semantics oracle."""
from __future__ import annotations

import random

import pytest

from conftest import PQR, rand_formula, rand_lasso
from nmcheck.kripke import UnknownAtom
from nmcheck.ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Bool,
    Eventually,
    Implies,
    Lasso,
    Next,
    Not,
    Or,
    ParseError,
    Release,
    Until,
    WeakUntil,
    eval_on_lasso,
    eval_prop,
    parse,
    to_nnf,
    to_str,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def lasso(stem, cycle):
    ids = lambda names: frozenset(PQR.id(x) for x in names)
    return Lasso(tuple(ids(s) for s in stem), tuple(ids(c) for c in cycle))


class TestParse:
    def test_response_shape(self):
        assert parse("G(l -> X n)") == Always(Implies(Atom("l"), Next(Atom("n"))))

    def test_negated_reachability_shape(self):
        assert parse("!F(W1 & W2)") == Not(Eventually(And(Atom("W1"), Atom("W2"))))

    def test_until_right_associative(self):
        assert parse("p U q U r") == Until(p, Until(q, r))

    def test_implies_right_associative(self):
        assert parse("p -> q -> r") == Implies(p, Implies(q, r))

    def test_precedence_unary_over_until(self):
        assert parse("!p U q") == Until(Not(p), q)

    def test_precedence_until_over_and(self):
        assert parse("p U q & r") == And(Until(p, q), r)

    def test_precedence_and_over_or(self):
        assert parse("p | q & r") == Or(p, And(q, r))

    def test_precedence_or_over_implies(self):
        assert parse("p | q -> r") == Implies(Or(p, q), r)

    def test_constants(self):
        assert parse("true") == TRUE
        assert parse("false U p") == Until(FALSE, p)

    def test_weak_until_and_release(self):
        assert parse("p W q") == WeakUntil(p, q)
        assert parse("p R q") == Release(p, q)

    def test_temporal_letters_can_prefix_atom_names(self):
        assert parse("W1 U X1") == Until(Atom("W1"), Atom("X1"))

    def test_unknown_token_position(self):
        with pytest.raises(ParseError) as err:
            parse("p $ q")
        assert err.value.position == 2

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse("(p & q")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("p q")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse("")

    def test_dangling_operator(self):
        with pytest.raises(ParseError):
            parse("p &")


class TestPrinter:
    def test_round_trip_examples(self):
        for text in ["G(l -> X n)", "!F(W1 & W2)", "p U q U r", "(p R q) W r"]:
            f = parse(text)
            assert parse(to_str(f)) == f

    def test_round_trip_random(self):
        rng = random.Random(101)
        for _ in range(500):
            f = rand_formula(rng, rng.randrange(0, 5))
            assert parse(to_str(f)) == f


def _assert_nnf(f):
    match f:
        case Bool() | Atom() | Not(Atom()):
            return
        case And(a, b) | Or(a, b) | Until(a, b) | Release(a, b):
            _assert_nnf(a)
            _assert_nnf(b)
        case Next(g):
            _assert_nnf(g)
        case _:
            raise AssertionError(f"not in NNF: {f}")


class TestNNF:
    def test_not_globally_becomes_eventually(self):
        assert to_nnf(Not(Always(p))) == Until(TRUE, Not(p))

    def test_not_next_commutes(self):
        assert to_nnf(Not(Next(p))) == Next(Not(p))

    def test_eventually_rewritten(self):
        assert to_nnf(Eventually(p)) == Until(TRUE, p)

    def test_globally_rewritten(self):
        assert to_nnf(Always(p)) == Release(FALSE, p)

    def test_implication_eliminated(self):
        assert to_nnf(Implies(p, q)) == Or(Not(p), q)

    def test_result_is_structurally_nnf(self):
        rng = random.Random(55)
        for _ in range(300):
            _assert_nnf(to_nnf(rand_formula(rng, rng.randrange(0, 5))))

    def test_preserves_lasso_semantics(self):
        rng = random.Random(56)
        for _ in range(1000):
            f = rand_formula(rng, rng.randrange(0, 5))
            sigma = rand_lasso(rng)
            assert eval_on_lasso(f, sigma, PQR) == eval_on_lasso(to_nnf(f), sigma, PQR)


class TestEvalOnLasso:
    def test_globally_true(self):
        assert eval_on_lasso(Always(TRUE), lasso([], [[]]), PQR)

    def test_eventually_false_when_atom_never_holds(self):
        sigma = lasso([["q"]], [["q"], []])
        assert not eval_on_lasso(Eventually(p), sigma, PQR)

    def test_next_looks_into_cycle(self):
        assert eval_on_lasso(Next(p), lasso([[]], [["p"]]), PQR)

    def test_eventually_includes_position_zero(self):
        assert eval_on_lasso(Eventually(p), lasso([["p"]], [[]]), PQR)

    def test_until_needs_witness(self):
        sigma = lasso([["p"]], [["p"]])
        assert not eval_on_lasso(Until(p, q), sigma, PQR)
        assert eval_on_lasso(Until(p, q), lasso([["p"]], [["q"]]), PQR)

    def test_release_without_release_point(self):
        assert eval_on_lasso(Release(q, p), lasso([], [["p"]]), PQR)
        assert not eval_on_lasso(Release(q, p), lasso([], [["p"], []]), PQR)

    def test_weak_until_holds_without_witness(self):
        assert eval_on_lasso(WeakUntil(p, q), lasso([], [["p"]]), PQR)
        assert not eval_on_lasso(Until(p, q), lasso([], [["p"]]), PQR)

    def test_globally_is_conjunction_of_positions(self):
        rng = random.Random(77)
        for _ in range(300):
            sigma = rand_lasso(rng)
            positions = list(sigma.stem) + list(sigma.cycle)
            expected = all(PQR.id("p") in labels for labels in positions)
            assert eval_on_lasso(Always(p), sigma, PQR) == expected

    def test_eventually_is_disjunction_of_positions(self):
        rng = random.Random(78)
        for _ in range(300):
            sigma = rand_lasso(rng)
            positions = list(sigma.stem) + list(sigma.cycle)
            expected = any(PQR.id("p") in labels for labels in positions)
            assert eval_on_lasso(Eventually(p), sigma, PQR) == expected

    def test_expansion_laws(self):
        rng = random.Random(79)
        until = Until(p, q)
        expanded_until = Or(q, And(p, Next(until)))
        globally = Always(p)
        expanded_globally = And(p, Next(globally))
        for _ in range(300):
            sigma = rand_lasso(rng)
            assert eval_on_lasso(until, sigma, PQR) == eval_on_lasso(expanded_until, sigma, PQR)
            assert eval_on_lasso(globally, sigma, PQR) == eval_on_lasso(expanded_globally, sigma, PQR)

    def test_unknown_atom(self):
        with pytest.raises(UnknownAtom):
            eval_on_lasso(Atom("mystery"), lasso([], [[]]), PQR)

    def test_cycle_must_be_nonempty(self):
        with pytest.raises(ValueError):
            Lasso((), ())


class TestSimplify:
    def test_boolean_identities(self):
        from nmcheck.ltl import simplify

        assert simplify(parse("p & true")) == p
        assert simplify(parse("p & false")) == FALSE
        assert simplify(parse("p | true")) == TRUE
        assert simplify(parse("p | false")) == p
        assert simplify(parse("p & p")) == p
        assert simplify(parse("p & !p")) == FALSE
        assert simplify(parse("p | !p")) == TRUE

    def test_temporal_identities(self):
        from nmcheck.ltl import simplify

        assert simplify(parse("X true")) == TRUE
        assert simplify(parse("p U true")) == TRUE
        assert simplify(parse("p U false")) == FALSE
        assert simplify(parse("false U p")) == p
        assert simplify(parse("p R true")) == TRUE
        assert simplify(parse("true R p")) == p
        assert simplify(parse("F false")) == FALSE
        assert simplify(parse("G true")) == TRUE

    def test_preserves_nnf(self):
        from nmcheck.ltl import simplify

        rng = random.Random(57)
        for _ in range(300):
            _assert_nnf(simplify(to_nnf(rand_formula(rng, rng.randrange(0, 5)))))

    def test_preserves_lasso_semantics(self):
        from nmcheck.ltl import simplify

        rng = random.Random(58)
        for _ in range(1000):
            f = rand_formula(rng, rng.randrange(0, 5))
            sigma = rand_lasso(rng)
            assert eval_on_lasso(f, sigma, PQR) == eval_on_lasso(simplify(f), sigma, PQR), str(f)


class TestEvalProp:
    def test_basic(self):
        labels = frozenset({PQR.id("p")})
        assert eval_prop(parse("p & !q"), labels, PQR)
        assert not eval_prop(parse("p -> q"), labels, PQR)

    def test_rejects_temporal(self):
        with pytest.raises(ValueError):
            eval_prop(Next(p), frozenset(), PQR)
