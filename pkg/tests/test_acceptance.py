"""Full-scale acceptance run: every criterion, one verdict line each.

The suite executes once per session (the Monte Carlo blocks dominate the
runtime); each criterion then gets its own test that prints the measured
vs required line and asserts the verdict.
"""

import pytest

from vrrw.acceptance import acceptance_suite

CRITERIA = list(range(1, 13))


@pytest.fixture(scope="module")
def full_results():
    results, _ = acceptance_suite("full", echo=lambda line: None)
    return {r.number: r for r in results}


@pytest.mark.parametrize("number", CRITERIA)
def test_criterion(full_results, number, capsys):
    res = full_results[number]
    with capsys.disabled():
        print(res.line())
    assert res.passed, res.line()


def test_every_criterion_ran(full_results):
    assert sorted(full_results) == CRITERIA
