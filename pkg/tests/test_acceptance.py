"""Runs the ten acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line; ``pytest -s`` shows them inline.
"""

import pytest

from listrec.acceptance import CRITERIA, Context, run_criterion


@pytest.fixture(scope="module")
def ctx():
    return Context()


@pytest.mark.parametrize("cid", list(CRITERIA))
def test_criterion(cid, ctx):
    res = run_criterion(cid, ctx)
    print(res.line())
    assert res.passed, res.detail
