"""Acceptance gate: every criterion at its stated tolerance, one line each."""

import pytest

from moment_atlas import acceptance


@pytest.mark.parametrize(
    "criterion", acceptance.ALL_CRITERIA, ids=lambda fn: fn.__name__
)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
