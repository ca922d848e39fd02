"""The fourteen acceptance checks, each at its stated time limit."""

import pytest

from indepkit.suite import CHECKS, DEFAULT_SEED, run_check


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(CHECKS), ids=[f"{k:02d}-{CHECKS[k][0].replace(' ', '-')}" for k in sorted(CHECKS)])
def test_acceptance(number):
    res = run_check(number, DEFAULT_SEED)
    print(res.line())
    assert res.passed, res.detail
    assert res.in_time, f"took {res.seconds:.1f}s, limit {res.limit:.0f}s"
