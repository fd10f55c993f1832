"""Tests for transition-system construction, queries and the text format."""
from __future__ import annotations

import pytest

from nmcheck import kripke
from nmcheck.kripke import (
    AtomTable,
    DanglingEdge,
    ModelError,
    ModelFormatError,
    NonTotal,
    UnknownAtom,
)
from nmcheck.nm_model import NMParams, build_transition_system

PQ = AtomTable(["p", "q"])


class TestAtomTable:
    def test_ids_are_dense(self):
        at = AtomTable(["a", "b", "c"])
        assert [at.id(n) for n in "abc"] == [0, 1, 2]
        assert at.name(1) == "b"

    def test_rejects_duplicates(self):
        with pytest.raises(ModelError):
            AtomTable(["p", "p"])

    def test_rejects_empty_names(self):
        with pytest.raises(ModelError):
            AtomTable(["p", ""])

    def test_unknown_atom(self):
        with pytest.raises(UnknownAtom):
            PQ.id("zzz")


class TestBuild:
    def test_smallest_total_system(self):
        ts = kripke.build(PQ, [["p"]], [(0, 0)], 0)
        assert ts.num_states == 1
        assert ts.successors == ((0,),)
        assert ts.labels[0] == frozenset({0})

    def test_three_state_total_relation(self):
        ts = kripke.build(
            PQ,
            [["p"], ["q"], []],
            [(0, 1), (1, 2), (2, 0), (2, 1)],
            0,
        )
        assert ts.num_states == 3
        assert all(len(ts.successors[s]) >= 1 for s in range(3))

    def test_non_total_rejected(self):
        with pytest.raises(NonTotal):
            kripke.build(PQ, [[], []], [(0, 1)], 0)

    def test_dangling_edge_rejected(self):
        with pytest.raises(DanglingEdge):
            kripke.build(PQ, [[], []], [(0, 1), (1, 5)], 0)

    def test_initial_out_of_range(self):
        with pytest.raises(DanglingEdge):
            kripke.build(PQ, [[]], [(0, 0)], 3)

    def test_unknown_label_rejected(self):
        with pytest.raises(UnknownAtom):
            kripke.build(PQ, [["nope"]], [(0, 0)], 0)
        with pytest.raises(UnknownAtom):
            kripke.build(PQ, [[42]], [(0, 0)], 0)

    def test_zero_states_rejected(self):
        with pytest.raises(ModelError):
            kripke.build(PQ, [], [], 0)


class TestReachable:
    def test_self_loop(self):
        ts = kripke.build(PQ, [["p"]], [(0, 0)], 0)
        assert kripke.reachable(ts) == {0}

    def test_chain(self):
        ts = kripke.build(PQ, [[], [], []], [(0, 1), (1, 2), (2, 2)], 0)
        assert kripke.reachable(ts) == {0, 1, 2}

    def test_unreachable_part_excluded(self):
        ts = kripke.build(PQ, [[], [], []], [(0, 0), (1, 2), (2, 1)], 0)
        assert kripke.reachable(ts) == {0}

    def test_nm_model_3_2(self):
        nm = build_transition_system(NMParams(3, 2))
        assert len(kripke.reachable(nm.ts)) == 25

    def test_fixed_point(self):
        nm = build_transition_system(NMParams(2, 3))
        region = kripke.reachable(nm.ts)
        for s in region:
            assert set(nm.ts.successors[s]) <= region


class TestSatisfiesLabel:
    def test_present_and_absent(self):
        ts = kripke.build(PQ, [["p", "q"], []], [(0, 1), (1, 0)], 0)
        assert kripke.satisfies_label(ts, 0, "p")
        assert kripke.satisfies_label(ts, 0, 1)
        assert not kripke.satisfies_label(ts, 1, "p")

    def test_nm_start_level(self):
        # control starts at the middle level: ceil(M/2) = 1 for M = 2
        nm = build_transition_system(NMParams(3, 2))
        assert kripke.satisfies_label(nm.ts, nm.ts.initial, "L1")

    def test_bad_ids(self):
        ts = kripke.build(PQ, [["p"]], [(0, 0)], 0)
        with pytest.raises(DanglingEdge):
            kripke.satisfies_label(ts, 7, "p")
        with pytest.raises(UnknownAtom):
            kripke.satisfies_label(ts, 0, "nope")


class TestModelFormat:
    def test_round_trip(self):
        ts = kripke.build(
            AtomTable(["p", "q", "r"]),
            [["p", "q"], [], ["r"]],
            [(0, 1), (1, 2), (2, 0), (2, 2)],
            0,
        )
        assert kripke.parse_model(kripke.serialize_model(ts)) == ts

    def test_nm_model_round_trip(self):
        nm = build_transition_system(NMParams(2, 2))
        assert kripke.parse_model(kripke.serialize_model(nm.ts)) == nm.ts

    def test_parser_tolerates_whitespace_comments_and_order(self):
        text = """
        # a comment
        trans 0 -> 1
        atoms:  p   q
        states: 2
        label 0:  q p

        trans 1 -> 0
        init: 0
        """
        ts = kripke.parse_model(text)
        assert ts.num_states == 2
        assert ts.label_names(0) == ("p", "q")
        assert ts.labels[1] == frozenset()

    def test_missing_section_rejected(self):
        with pytest.raises(ModelFormatError):
            kripke.parse_model("atoms: p\ninit: 0\ntrans 0 -> 0\n")

    def test_bad_line_rejected(self):
        with pytest.raises(ModelFormatError) as err:
            kripke.parse_model("atoms: p\nstates: 1\ninit: 0\nwhatever\n")
        assert err.value.line_no == 4

    def test_bad_trans_rejected(self):
        with pytest.raises(ModelFormatError):
            kripke.parse_model("atoms: p\nstates: 2\ninit: 0\ntrans 0 1\n")

    def test_label_state_out_of_range(self):
        with pytest.raises(ModelFormatError):
            kripke.parse_model("atoms: p\nstates: 1\ninit: 0\nlabel 4: p\ntrans 0 -> 0\n")
