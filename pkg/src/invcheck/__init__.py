"""Compile mini-language programs to finite-domain constraints and check invariants by refutation."""

from __future__ import annotations

from .compiler import CompiledProgram, compile_program, emit_clp, solution_graph
from .domain import Domain, IntWidth
from .frontend import ProgramAst, parse_program, pretty_print
from .inference import filter_candidates, generate_candidates, infer
from .interpreter import Diverged, Fault, Returned, Trace, run, run_suite
from .invariants import format_invariant, parse_invariant
from .refute import CheckConfig, Verdict, check_all, check_invariant, negate_invariant
from .solver import Store, new_store
from .ssa import SsaProgram, pretty_print_ssa, to_ssa

__all__ = [
    "CheckConfig",
    "CompiledProgram",
    "Diverged",
    "Domain",
    "Fault",
    "IntWidth",
    "ProgramAst",
    "Returned",
    "SsaProgram",
    "Store",
    "Trace",
    "Verdict",
    "check_all",
    "check_invariant",
    "compile_program",
    "emit_clp",
    "filter_candidates",
    "format_invariant",
    "generate_candidates",
    "infer",
    "negate_invariant",
    "new_store",
    "parse_invariant",
    "parse_program",
    "pretty_print",
    "pretty_print_ssa",
    "run",
    "run_suite",
    "solution_graph",
    "to_ssa",
]
