"""Acceptance criteria, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one pass/fail line per
criterion.
"""
import subprocess
import sys
import time

import pytest

from unisign.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line(timing=True))
    assert result.passed, result.line(timing=True)


def test_selftest_end_to_end():
    # a fresh interpreter, so no cached gallery runs shorten the measurement
    budget = 240.0
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "unisign", "selftest"], capture_output=True,
                          text=True, timeout=2 * budget)
    dt = time.perf_counter() - t0
    ok = proc.returncode == 0 and "8/8 criteria passed" in proc.stdout and dt < budget
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] 9. selftest end to end: exit {proc.returncode}, {dt:.1f} s (limit {budget:g} s)")
    assert ok, proc.stdout + proc.stderr
