"""Explicit-state LTL model checking for the N-M switching control system.

The package generates the parametric controller model as a Kripke
structure, instantiates the requirement schemata D1..D8 for any (N, M),
verifies them with counterexample extraction, and replays or monitors
voltage traces through the controller.
"""
from .check import Counterexample, Verdict, check, exists_path_reaching, validate_counterexample
from .kripke import AtomTable, TransitionSystem, build, parse_model, reachable, serialize_model
from .ltl import Formula, Lasso, eval_on_lasso, parse, to_nnf
from .nm_model import (
    NMParams,
    NMState,
    NMSystem,
    VoltageReading,
    build_transition_system,
    controller_step,
    count_valid_encodings,
    decode,
    encode,
    enumerate_valid_encodings,
    start_state,
)
from .sim import monitor, parse_trace, run
from .smv import export_smv
from .specs import SPEC_IDS, SpecInstance, SuiteReport, instantiate, run_suite

__all__ = [
    "AtomTable",
    "Counterexample",
    "Formula",
    "Lasso",
    "NMParams",
    "NMState",
    "NMSystem",
    "SPEC_IDS",
    "SpecInstance",
    "SuiteReport",
    "TransitionSystem",
    "Verdict",
    "VoltageReading",
    "build",
    "build_transition_system",
    "check",
    "controller_step",
    "count_valid_encodings",
    "decode",
    "encode",
    "enumerate_valid_encodings",
    "eval_on_lasso",
    "exists_path_reaching",
    "export_smv",
    "instantiate",
    "monitor",
    "parse",
    "parse_model",
    "parse_trace",
    "reachable",
    "run",
    "run_suite",
    "serialize_model",
    "start_state",
    "to_nnf",
    "validate_counterexample",
]

__version__ = "0.1.0"
