import pytest

CRITERIA = {
    1: "counting oracle equivalence",
    2: "branching normal form",
    3: "gap squaring",
    4: "closure identities",
    5: "Lsp gap identity",
    6: "Lparity accepting count",
    7: "LU unambiguous acceptance",
    8: "LN set inequality",
    9: "reject splitting",
    10: "PFA bridge",
    11: "equality-gap extension property",
    12: "Ldot pushdown machine",
    13: "transducer compilation",
    14: "homomorphism closure",
    15: "integer operator oracles",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    criterion = getattr(report, "criterion", None)
    if criterion is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(criterion, []).append(report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        status = "NOT RUN" if not results else "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {status:7s} {title}")

