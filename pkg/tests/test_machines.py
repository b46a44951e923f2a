from fractions import Fraction

import pytest
from hypothesis import given, settings

from cfa.errors import InvariantViolation, ParseError
from cfa.families import build_machine
from cfa.machines import (EPS, LEND, REND, Dfa, Dft, Dpda, Nfa, Pfa, parse_machine, parse_machines,
                          serialize_machine, stack_state_complexity, state_complexity, validate)
from cfa import constructions as cons

from .strategies import nfas

LOOP_TEXT = """
# one live state that accepts at the right endmarker
machine loop
kind dfa
alphabet 0 1
states 2
start live
accept done
trans live LEND live
trans live 0 live
trans live 1 live
trans live REND done
end
"""


def test_parse_named_states():
    m = parse_machine(LOOP_TEXT)
    assert isinstance(m, Dfa)
    assert m.num_states == 2
    assert m.start == 0 and m.accept == {1}


@given(nfas)
def test_nfa_round_trip(m):
    text = serialize_machine(m)
    again = parse_machine(text)
    assert again == m
    assert serialize_machine(again) == text


@pytest.mark.parametrize("build", [
    lambda: build_machine("Ldot", 2),
    lambda: cons.nfa_to_pfa(cons.branching_normal_form(build_machine("Lsp", 1))),
    lambda: Dft(("a",), ("0", "1"), 2, 0, {(0, LEND): (1, "1"), (1, LEND): (1, ""),
                                          (0, "a"): (0, "1"), (1, "a"): (1, "01"),
                                          (0, REND): (0, ""), (1, REND): (1, "1")}),
])
def test_other_kinds_round_trip(build):
    m = build()
    text = serialize_machine(m)
    assert parse_machine(text) == m
    assert serialize_machine(parse_machine(text)) == text


def test_multiple_blocks():
    text = LOOP_TEXT + serialize_machine(build_machine("Lsp", 1))
    assert [m.name for m in parse_machines(text)] == ["loop", "Lsp_1"]
    with pytest.raises(ParseError):
        parse_machine(text)


def test_overlapping_halting_sets_rejected():
    text = LOOP_TEXT.replace("accept done", "accept done\nreject done")
    with pytest.raises(InvariantViolation):
        parse_machine(text)


@pytest.mark.parametrize("text, line", [
    ("machine a\nkind nfa\nbogus 1\nend\n", 3),
    ("kind nfa\n", 1),
    ("machine a\nkind nfa\nalphabet 0\nstates 1\nstart 0\ntrans 0 LEND\nend\n", 6),
    ("machine a\nkind nfa\nalphabet 0\nstates 1\nstart 0\n", 1),
    ("machine a\nkind nfa\nalphabet 0\nstates 1\nstart 5\nend\n", 5),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_machine(text)
    assert err.value.line == line


def test_nfa_invariants():
    with pytest.raises(InvariantViolation):
        Nfa(("a",), 2, 0, {1}, set(), {(1, "a"): [0]})
    with pytest.raises(InvariantViolation):
        Nfa(("a",), 2, 0, set(), set(), {(0, "z"): [0]})
    with pytest.raises(InvariantViolation):
        Nfa(("a",), 2, 3, set(), set(), {})
    with pytest.raises(InvariantViolation):
        Dfa(("a",), 2, 0, set(), set(), {(0, "a"): [0, 1]})


def test_pfa_must_be_stochastic():
    mats = {s: [[1, 0], [0, 1]] for s in (LEND, "a", REND)}
    Pfa(("a",), 2, [Fraction(1, 2), Fraction(1, 2)], mats, {0}, {1})
    with pytest.raises(InvariantViolation):
        Pfa(("a",), 2, [1, 1], mats, {0}, {1})
    bad = dict(mats, a=[[Fraction(1, 2), Fraction(1, 3)], [0, 1]])
    with pytest.raises(InvariantViolation):
        Pfa(("a",), 2, [1, 0], bad, {0}, {1})


def test_dft_must_be_total():
    with pytest.raises(InvariantViolation):
        Dft(("a",), ("0", "1"), 1, 0, {(0, LEND): (0, "")})


def test_dpda_determinism_and_bottom():
    base = dict(alphabet=("a",), stack_alphabet=("Z", "A"), bottom="Z", push_size=2,
                num_states=3, start=0, accept={1}, reject={2})
    with pytest.raises(InvariantViolation):
        Dpda(**base, delta={(0, "a", "Z"): (0, "AZ"), (0, EPS, "Z"): (1, "Z")})
    with pytest.raises(InvariantViolation):
        Dpda(**base, delta={(0, "a", "Z"): (0, "A")})
    with pytest.raises(InvariantViolation):
        Dpda(**base, delta={(0, "a", "A"): (0, "ZA")})


def test_state_complexities():
    assert state_complexity(Nfa(("a",), 4, 0, set(), set(), {})) == 4
    d = Dpda(("a",), ("Z", "A"), "Z", 1, 3, 0, {1}, {2}, {(0, "a", "Z"): (1, "Z")})
    assert stack_state_complexity(d) == 9


@settings(max_examples=30)
@given(nfas)
def test_constructions_yield_valid_machines(m):
    for out in (cons.complete_paths(m), cons.flip(m), cons.split_rejecting(m),
                cons.square_gap(m), cons.complement_gapwise(m),
                cons.branching_normal_form(m).machine):
        validate(out)
