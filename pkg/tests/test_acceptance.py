"""The eight acceptance criteria, one test each; prints a PASS/FAIL line per criterion."""

import pytest

from jacstab.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def test_corpus_verify_command():
    from jacstab.cli import run_command
    doc, code = run_command(["corpus", "verify"])
    assert code == 0
    assert [f["criterion"] for f in doc["details"]] == list(range(1, 9))
