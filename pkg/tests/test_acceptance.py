"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run directly (``python tests/test_acceptance.py``) for the lines alone.
"""
import functools

import pytest

from loopkit import presets, validation
from loopkit.tline import Dielectric

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # executed as a script
    ACCEPTANCE_LINES = []


def describe(result: validation.CriterionResult) -> str:
    verdict = "PASS" if result.passed else "FAIL"
    failed = [c for c in result.checks if not c.passed]
    detail = "; ".join(f"{c.name} expected {c.expected} got {c.computed} (tol {c.tolerance})" for c in failed)
    line = f"criterion {result.number}: {verdict} {result.title}"
    return f"{line} [{detail}]" if detail else line


def record(result: validation.CriterionResult) -> None:
    line = describe(result)
    ACCEPTANCE_LINES.append(line)
    print(line)
    for c in result.checks:
        print(f"    {'ok  ' if c.passed else 'FAIL'} {c.name}: expected {c.expected}, computed {c.computed}, tol {c.tolerance}")


@pytest.mark.parametrize("check", validation.CRITERIA, ids=lambda fn: fn.__name__.removeprefix("check_"))
def test_criterion(check):
    result = check()
    record(result)
    assert result.passed, describe(result)


def test_fixture_integrity():
    result = validation.check_fixture_integrity()
    record(result)
    assert result.passed


def test_full_suite_runtime():
    import time

    t0 = time.perf_counter()
    validation.run_all()
    assert time.perf_counter() - t0 < 30.0


def test_model_check_detects_wrong_permittivity(monkeypatch):
    wrong = functools.partial(presets.stripline_loop, dielectric=Dielectric(3.0, presets.DUROID_5880.tan_d))
    monkeypatch.setattr(validation.presets, "stripline_loop", wrong)
    result = validation.check_stripline_model()
    f0 = next(c for c in result.checks if c.name == "f0")
    assert not f0.passed
    assert f0.expected != f0.computed


if __name__ == "__main__":
    for r in validation.run_all():
        print(describe(r))
