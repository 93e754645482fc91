"""Acceptance criteria, one test per criterion.

Each test prints the criterion's pass/fail line (visible with or without -s)
and fails with the criterion's own messages. Run this file directly for the
plain listing.
"""

from __future__ import annotations

import pytest

from kuelshammer.acceptance import CRITERIA, Workspace, run_criterion


@pytest.fixture(scope="module")
def workspace():
    # towers and instances are shared between criteria, as in the selftest command
    return Workspace()


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"{c.number:02d}-{c.key}" for c in CRITERIA])
def test_criterion(criterion, workspace, capsys):
    res = run_criterion(criterion, workspace)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, "\n".join(res.failures[:20])


if __name__ == "__main__":
    import sys

    ws = Workspace()
    results = [run_criterion(c, ws) for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
