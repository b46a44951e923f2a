import os
import subprocess
import sys
from array import array
from fractions import Fraction

import pytest
from hypothesis import given, settings

from cfa import _pykernels, kernels
from cfa import constructions as cons
from cfa.encodings import encode_trans
from cfa.errors import AlphabetError, CapExceeded
from cfa.families import build_machine
from cfa.machines import EPS, LEND, REND, Dfa, Dft, Dpda, Nfa, Pfa
from cfa.semantics import (Verdict, count_paths, dpda_run, enumerate_paths, gap_value,
                           pfa_probabilities, tally, transduce)

from .strategies import nfa_and_word

LOOP = Dfa(("0", "1"), 2, 0, {1}, set(),
           {(0, LEND): [0], (0, "0"): [0], (0, "1"): [0], (0, REND): [1]})


def test_deterministic_loop():
    assert count_paths(LOOP, "01") == (1, 0, 0)
    assert len(enumerate_paths(LOOP, "01")) == 1


def test_paths_freeze_on_halting():
    # accepts right after the left endmarker; the rest of the tape is ignored
    m = Nfa(("a",), 2, 0, {1}, set(), {(0, LEND): [1]})
    assert count_paths(m, "aaa") == (1, 0, 0)


def test_dead_branches_and_unfinished_paths_are_improper():
    m = Nfa(("a",), 3, 0, {2}, set(), {(0, LEND): [0, 1], (0, "a"): [0], (0, REND): [2]})
    assert count_paths(m, "a") == (1, 0, 1)
    stuck = Nfa(("a",), 1, 0, set(), set(), {(0, LEND): [0], (0, "a"): [0], (0, REND): [0]})
    assert count_paths(stuck, "aa") == (0, 0, 1)


def test_lparity_example():
    assert count_paths(build_machine("Lparity", 2), "0$1#1$1").accepting == 1


def test_lsp_example_gap():
    assert gap_value(build_machine("Lsp", 1), "00#0") == 1


@given(nfa_and_word())
def test_count_matches_enumeration(case):
    m, x = case
    c = count_paths(m, x)
    assert c == tally(enumerate_paths(m, x, limit=10**6))
    assert c.gap == c.accepting - c.rejecting
    assert min(c) >= 0


@given(nfa_and_word())
def test_flip_negates_gap(case):
    m, x = case
    assert gap_value(cons.flip(m), x) == -gap_value(m, x)


def test_normal_form_path_total():
    m = Nfa(("a",), 3, 0, {1}, {2}, {(0, LEND): [0], (0, "a"): [0, 1], (0, REND): [1, 2]})
    nf = cons.branching_normal_form(m, degree=2)
    assert len(enumerate_paths(nf.machine, "aa")) == 16


def test_unknown_symbols_rejected():
    with pytest.raises(AlphabetError):
        count_paths(LOOP, "2")
    with pytest.raises(AlphabetError):
        count_paths(LOOP, LEND)


def test_enumeration_cap():
    wide = Nfa(("a",), 2, 0, {1}, set(), {(0, LEND): [0, 1], (0, "a"): [0, 1], (0, REND): [1]})
    assert count_paths(wide, "a" * 40).total == 42
    branching = Nfa(("a",), 3, 0, {1}, set(),
                    {(0, LEND): [0, 2], (2, LEND): [0], (0, "a"): [0, 2], (2, "a"): [0, 2],
                     (0, REND): [1], (2, REND): [1]})
    with pytest.raises(CapExceeded):
        enumerate_paths(branching, "a" * 20, limit=1000)


def test_large_counts_exceed_64_bits():
    m = Nfa(("a",), 3, 0, {1}, set(),
            {(0, LEND): [0, 2], (2, LEND): [0, 2], (0, "a"): [0, 2], (2, "a"): [0, 2],
             (0, REND): [1], (2, REND): [1]})
    x = "a" * 100
    assert count_paths(m, x).accepting == 2 ** 101


@settings(max_examples=50)
@given(nfa_and_word(max_len=8))
def test_backends_agree(case):
    m, x = case
    offsets, targets, kind, index, _ = m.table
    word = array("i", [0, *(index[c] for c in x), index[REND]])
    args = (offsets, targets, kind, m.num_states, m.start, word)
    assert kernels.count_table(*args) == _pykernels.count_table(*args)


def test_pfa_examples():
    absorbing = Pfa(("a",), 1, [1], {s: [[1]] for s in (LEND, "a", REND)}, {0}, set())
    assert pfa_probabilities(absorbing, "aa") == (1, 0, 0)
    half = Fraction(1, 2)
    fair = Pfa(("a",), 3, [1, 0, 0],
               {LEND: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "a": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                REND: [[0, half, half], [0, 1, 0], [0, 0, 1]]}, {1}, {2})
    assert pfa_probabilities(fair, "a") == (half, half, 0)


def test_transducers():
    ident = Dft(("0", "1"), ("0", "1"), 1, 0,
                {(0, LEND): (0, ""), (0, "0"): (0, "0"), (0, "1"): (0, "1"), (0, REND): (0, "")})
    const = Dft(("0", "1"), ("0", "1"), 1, 0,
                {(0, s): (0, encode_trans(3) if s == LEND else "") for s in (LEND, "0", "1", REND)})
    for x in ("", "0", "0110"):
        assert transduce(ident, x) == x
        assert transduce(const, x) == "111"


def _counting_dpda():
    # push one A per 'a', pop one per 'b', accept on an empty count at the end
    d = {(0, LEND, "Z"): (1, "Z"), (1, "a", "Z"): (1, "AZ"), (1, "a", "A"): (1, "AA"),
         (1, "b", "A"): (2, ""), (2, "b", "A"): (2, ""), (2, REND, "Z"): (3, "Z"),
         (1, REND, "Z"): (3, "Z")}
    return Dpda(("a", "b"), ("Z", "A"), "Z", 2, 5, 0, {3}, {4}, d)


def test_dpda_run_counts_turns():
    d = _counting_dpda()
    out = dpda_run(d, "aabb")
    assert out.verdict is Verdict.ACCEPT
    assert out.turns == 1 and out.max_height == 3
    assert dpda_run(d, "aab").verdict is Verdict.IMPROPER
    assert dpda_run(d, "").turns == 0


def test_dpda_keeps_bottom():
    d = build_machine("Ldot", 2)
    for x in ("01#10", "1$0#0$1", "##"):
        dpda_run(d, x, observer=lambda step, q, stack: assert_bottom(stack))


def assert_bottom(stack):
    assert stack[0] == "Z" and "Z" not in stack[1:]


def test_empty_move_loop_hits_cap():
    loop = Dpda(("a",), ("Z", "A"), "Z", 2, 2, 0, {1}, set(),
                {(0, EPS, "Z"): (0, "AZ"), (0, EPS, "A"): (0, "AA")})
    out = dpda_run(loop, "a", step_cap=500)
    assert out.verdict is Verdict.CAP_EXCEEDED and out.steps == 500
    with pytest.raises(ValueError):
        dpda_run(loop, "a", step_cap=0)


def test_pure_backend_switch():
    env = dict(os.environ, CFA_PURE="1")
    done = subprocess.run([sys.executable, "-c", "import cfa; print(cfa.BACKEND)"],
                          capture_output=True, text=True, env=env, check=True)
    assert done.stdout.strip() == "python"
