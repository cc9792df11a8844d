import dataclasses
import math

import pytest

from zeromode import positivity, verify
from zeromode.positivity import PositivityReport
from zeromode.theta import ThetaParams


def test_tolerance_override() -> None:
    check = verify._check("lemmas", "poisson", 1e-9, 1e-10, None)
    assert not check.passed
    check = verify._check("lemmas", "poisson", 1e-9, 1e-10, 1e-8)
    assert check.tolerance == 1e-8
    assert check.passed


def test_invariant_ignores_tolerance() -> None:
    check = verify._invariant("spectrum", "bound-states-grow-with-level", 1.0)
    assert check.tolerance == 0.0
    assert not check.passed
    assert verify._invariant("positivity", "slope-inequality", 0.0).passed


def test_nonfinite_error_fails() -> None:
    assert not verify._check("lemmas", "poisson", math.nan, 1.0, None).passed


def test_broken_inequality_fails_under_loose_tolerance(monkeypatch: pytest.MonkeyPatch) -> None:
    real_check = positivity.positivity_check

    def broken_check(R: float, grid_points: int, tp: ThetaParams) -> PositivityReport:
        report = real_check(R, 3, tp)
        return dataclasses.replace(report, worst_margin=-0.5, grid_passed=False)

    monkeypatch.setattr(positivity, "positivity_check", broken_check)
    checks = {check.name: check for check in verify.positivity_suite(1.0)}
    assert checks["slope-inequality"].error == 0.5
    assert checks["slope-inequality"].tolerance == 0.0
    assert not checks["slope-inequality"].passed
