import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cfa import analysis as an
from cfa import constructions as cons
from cfa.errors import DivisionByZero, NotInSpan, RangeError, ScaleError
from cfa.families import build_machine, family
from cfa.machines import LEND, REND, Pfa
from cfa.randomgen import random_nfa
from cfa.semantics import pfa_vector

from .strategies import seeds


def words(alphabet, max_len):
    return ["".join(w) for k in range(max_len + 1) for w in itertools.product(alphabet, repeat=k)]


def random_pfa(seed):
    return cons.nfa_to_pfa(cons.branching_normal_form(random_nfa(random.Random(seed), max_states=4)))


def constant_pfa(alphabet):
    return Pfa(alphabet, 1, [1], {s: [[1]] for s in (LEND, *alphabet, REND)}, set(), set())


def test_prefix_vector_concatenation():
    p = random_pfa(7)
    for w in words(p.alphabet, 2):
        for v in words(p.alphabet, 2):
            assert an.prefix_vector(p, w + v).vector == tuple(
                pfa_vector(p, v, an.prefix_vector(p, w).vector))
    assert an.prefix_vector(p, "").vector == tuple(pfa_vector(p, LEND))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_spanning_set_size_is_rank(seed):
    p = random_pfa(seed)
    prefixes = words(p.alphabet, 3)
    s = an.spanning_prefix_set(p, prefixes)
    matrix = sympy.Matrix([an.prefix_vector(p, w).vector for w in prefixes])
    assert len(s) == matrix.rank()
    assert len(s) <= p.num_states
    assert len(an.spanning_prefix_set(p, prefixes[::-1])) == len(s)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_affine_reconstruction_is_exact(seed):
    p = random_pfa(seed)
    prefixes = words(p.alphabet, 3)
    s = an.spanning_prefix_set(p, prefixes)
    for x in prefixes:
        d = an.affine_decomposition(p, s, x)
        rebuilt = [sum((a * an.prefix_vector(p, w).vector[i] for w, a in d.coefficients.items()),
                       Fraction(0)) for i in range(p.num_states)]
        assert tuple(rebuilt) == an.prefix_vector(p, x).vector
        assert d.total == 1
        assert d.minimum == min(d.coefficients.values())
        if x in s:
            assert d.coefficients == {w: int(w == x) for w in s}


def test_equal_vectors_span_once():
    p = constant_pfa(("a",))
    assert an.spanning_prefix_set(p, ["", "a", "aa"]) == [""]


def test_not_in_span():
    with pytest.raises(NotInSpan):
        an.solve_exact([[1, 0, 0]], [0, 1, 0])
    with pytest.raises(NotInSpan):
        an.solve_exact([[1, 0], [2, 0]], [1, 0])


def test_extension_vacuous_and_scale():
    fam = family("Lsp")
    report = an.check_cequal_extension(constant_pfa(fam.alphabet), fam, 1, 3, 2, "##")
    assert report.prefixes == [] and report.ok
    with pytest.raises(ScaleError):
        an.check_cequal_extension(constant_pfa(fam.alphabet), fam, 1, 30, 15, "0" * 15)
    with pytest.raises(ValueError):
        an.check_cequal_extension(constant_pfa(fam.alphabet), fam, 1, 3, 2, "0")


def test_extension_report_lines():
    fam = family("Lsp")
    p = cons.nfa_to_pfa(cons.balanced_normal_form(cons.complement_gapwise(build_machine("Lsp", 1))))
    report = an.check_cequal_extension(p, fam, 1, 4, 2, "#0")
    assert report.ok and report.prefixes
    assert report.lines()[0].startswith("n=1 m=4 l=2")


def test_sign_patterns():
    fam = family("Lparity")
    assert an.sign_pattern(fam, 2, ["1$1#", "1$0#"], "1$0").bits == "11"
    assert not an.sign_pattern(fam, 2, ["1$1#"], "1$").defined
    spanning = ["0$0#", "1$0#", "0$1#", "1$1#"]
    seen = {an.sign_pattern(fam, 2, spanning, y).bits for y in words("01$", 3)} - {None}
    assert len(seen) == 4


def test_margins_and_flipping_pair():
    fam = family("Lsp")
    p = constant_pfa(fam.alphabet)
    assert an.acceptance_margins(p, ["0", "1"], "#") == [Fraction(-1, 2)] * 2
    assert an.find_flipping_pair(fam, 1, "0#", ["", "0", "1"]) == ("", "0")
    assert an.find_flipping_pair(fam, 1, "0#", ["1"]) is None


@pytest.mark.parametrize("op, args, want", [
    ("intdiv", (7, 2), 3), ("propersub", (3, 5), 0), ("propersub", (5, 3), 2), ("max", (2, 5), 5),
    ("min", (2, 5), 2), ("dec1", (0,), 0), ("dec1", (4,), 3), ("half", (9,), 4), ("add", (2, 3), 5),
    ("mul", (4, 3), 12)])
def test_funop_examples(op, args, want):
    assert an.funop_apply(op, *args) == want


def test_funop_errors():
    with pytest.raises(DivisionByZero):
        an.funop_apply("intdiv", 1, 0)
    with pytest.raises(RangeError):
        an.funop_apply("propersub", -1, 2)
    with pytest.raises(TypeError):
        an.funop_apply("half", 1, 2)
    with pytest.raises(ValueError):
        an.funop_apply("pow", 1, 2)


@given(st.integers(0, 2**300), st.integers(1, 2**300))
def test_funops_are_exact(a, b):
    assert an.funop_apply("intdiv", a, b) * b + a % b == a
    assert an.funop_apply("propersub", a, b) + min(a, b) == a
