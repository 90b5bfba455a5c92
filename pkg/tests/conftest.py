"""Shared pytest plumbing.

The acceptance gate in test_acceptance.py tags each test with the number of
the criterion it checks; a terminal-summary hook prints one PASS/FAIL line
per criterion so the gate's verdict is readable without scrolling.
"""

import re

CRITERIA = {
    1: "partition of unity: min equals the closed-form bound, max equals 1, full order sweep",
    2: "p-form equivalence and q' against finite differences, 1000 randomized cases",
    3: "cascade L2 monotonicity, convergence, B-spline oracle, refinement residual",
    4: "filter-bank row and half-shift identities within 1e-10 for every order",
    5: "discrete Parseval and perfect reconstruction on random signals",
    6: "regularity and approximation: fits and closed forms for fractional orders",
    7: "lowpass arctan condition, positive floor, and pointwise ordering",
    8: "real shifts: phase identity, unchanged reports, unchanged bank identities",
    9: "CLI determinism, exit-code table, and order-constraint rejection",
}

_CRITERION_RE = re.compile(r"test_criterion_(\d+)")
_outcomes: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance-gate test tied to a numbered criterion")


def pytest_runtest_logreport(report):
    match = _CRITERION_RE.search(report.nodeid)
    if match is None:
        return
    number = int(match.group(1))
    if report.failed:
        _outcomes[number] = "FAIL"
    elif report.skipped:
        _outcomes.setdefault(number, "SKIP")
    elif report.when == "call":
        _outcomes.setdefault(number, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        status = _outcomes.get(number, "NOT RUN")
        terminalreporter.write_line(f"[criterion {number}] {status} - {CRITERIA[number]}")
