"""The twelve acceptance criteria, one test each, with a PASS/FAIL line per criterion."""
import pytest

from conseq_lab.acceptance import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__ for c in CHECKS])
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
