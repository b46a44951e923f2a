import pytest

from cfa import constructions as cons
from cfa.errors import AlphabetMismatch, UnknownSuite
from cfa.families import build_machine, family
from cfa.harness import ClassCondition, check_class_condition, run_suite


def test_condition_semantics():
    counting = {ClassCondition.ONE_N, ClassCondition.ONE_U, ClassCondition.ONE_PARITY}
    for cond in ClassCondition:
        assert cond.semantics == ("counting" if cond in counting else "gap")
    assert ClassCondition.parse("onep") is ClassCondition.ONE_P


@pytest.mark.parametrize("cond, pos, neg", [
    (ClassCondition.ONE_N, [1, 7], [0]),
    (ClassCondition.ONE_U, [1], [0]),
    (ClassCondition.ONE_PARITY, [1, 3], [0, 2]),
    (ClassCondition.ONE_CEQ, [0], [1, -2]),
    (ClassCondition.ONE_SP, [1], [0]),
    (ClassCondition.ONE_P, [1, 5], [0, -3]),
])
def test_predicates(cond, pos, neg):
    assert all(cond.holds(True, f) for f in pos)
    assert all(cond.holds(False, f) for f in neg)
    assert not any(cond.holds(False, f) for f in pos)


@pytest.mark.parametrize("cond, machine", [
    (ClassCondition.ONE_PARITY, lambda: build_machine("Lparity", 2)),
    (ClassCondition.ONE_U, lambda: build_machine("LU", 2)),
    (ClassCondition.ONE_SP, lambda: cons.split_rejecting(build_machine("LU", 2))),
])
def test_class_condition_examples(cond, machine):
    fam = family("Lparity" if cond is ClassCondition.ONE_PARITY else "LU")
    report = check_class_condition(cond, machine(), fam, 2)
    assert report.passed, report.render()


def test_class_condition_reports_failures():
    report = check_class_condition(ClassCondition.ONE_U, cons.flip(build_machine("LU", 2)),
                                   family("LU"), 2)
    assert not report.passed
    assert "first=" in report.render()


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        check_class_condition(ClassCondition.ONE_N, build_machine("Lparity", 2), family("LU"), 2)


def test_suite_passes_and_is_deterministic():
    first = run_suite("all", 42, "small")
    assert first.passed, first.render()
    assert first.render() == run_suite("all", 42, "small").render()
    assert first.render().splitlines()[-1].endswith(f"pass={len(first.checks)} fail=0")


def test_named_proof_checks_present():
    ids = {c.check_id for c in run_suite("constructions", 1).checks}
    assert {"split.gap_is_accepting", "square.gap_squared", "closure.gap_product", "hom.inverse"} <= ids


def test_injected_faults_fail():
    report = run_suite("constructions", 42, "small", inject_fault=True)
    failing = {c.check_id for c in report.checks if not c.passed}
    assert {"flip.swaps_counts", "split.gap_is_accepting", "square.gap_squared", "closure.product"} <= failing
    assert "FAIL flip.swaps_counts" in report.render()


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("everything")
    with pytest.raises(ValueError):
        run_suite("semantics", scale="huge")
