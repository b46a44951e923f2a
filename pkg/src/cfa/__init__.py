"""Counting and gap semantics for one-way finite automata families."""

from .kernels import BACKEND
from .machines import (EPS, LEND, REND, Dfa, Dft, Dpda, Nfa, PathCounts, Pfa, parse_machine,
                       parse_machines, serialize_machine, stack_state_complexity,
                       state_complexity, validate)
from .semantics import (Verdict, count_paths, dpda_run, enumerate_paths, gap_value,
                        pfa_probabilities, transduce)

__all__ = [
    "BACKEND", "EPS", "LEND", "REND", "Dfa", "Dft", "Dpda", "Nfa", "PathCounts", "Pfa",
    "Verdict", "count_paths", "dpda_run", "enumerate_paths", "gap_value", "parse_machine",
    "parse_machines", "pfa_probabilities", "serialize_machine", "stack_state_complexity",
    "state_complexity", "transduce", "validate",
]
