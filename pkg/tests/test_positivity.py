import math

import numpy as np
import pytest

from zeromode.errors import InvalidArgumentError
from zeromode.numerics import relative_error
from zeromode.positivity import (
    SMALL_R_CONSTANT,
    closed_majorant,
    critical_angle,
    large_R_bound,
    log_slope_quotient,
    positivity_check,
    printed_log_slope,
    quadratic_majorant,
    slope_bound,
    slope_bound_minimum,
    theta3_log_slope,
    trigonometric_majorant,
)
from zeromode.theta import ThetaParams


@pytest.mark.parametrize("R", [0.05, 0.1, 0.3, 1.0, 5.0])
def test_grid_check_passes(R: float) -> None:
    report = positivity_check(R, 200, ThetaParams(R))
    assert report.grid_passed
    assert report.worst_margin >= 0
    assert report.counterexample is None
    assert math.pi / (2 * R) <= report.worst_z <= math.pi / R


@pytest.mark.parametrize("R", [0.06, 0.2, 1.0, 3.0, 10.0])
def test_large_R_condition(R: float) -> None:
    tp = ThetaParams(R)
    assert large_R_bound(R, tp) <= slope_bound_minimum(R)
    assert positivity_check(R, 20, tp).condition == "large-R"


@pytest.mark.parametrize("R", [0.05, 0.08, 0.1])
def test_small_R_condition(R: float) -> None:
    report = positivity_check(R, 20, ThetaParams(R))
    assert report.small_R_max <= SMALL_R_CONSTANT * math.exp(math.pi * R)
    assert report.small_R_fires


def test_large_R_bound_diverges() -> None:
    bounds = [large_R_bound(R, ThetaParams(R)) for R in (0.04, 0.01, 0.0025)]
    assert bounds[0] < bounds[1] < bounds[2]
    assert bounds[2] > 1.0


@pytest.mark.parametrize("R", [0.3, 1.0, 3.0])
@pytest.mark.parametrize("z", [0.2, 1.0, 2.5])
def test_log_slope_series(R: float, z: float) -> None:
    tp = ThetaParams(R)
    expected = log_slope_quotient(R, z, tp)
    assert abs(theta3_log_slope(R, z, tp) - expected) <= 1e-10 * max(1.0, abs(expected))


def test_printed_log_slope_differs() -> None:
    R, z = 1.0, 0.3
    tp = ThetaParams(R)
    assert relative_error(printed_log_slope(R, z, tp), log_slope_quotient(R, z, tp)) > 1e-3


@pytest.mark.parametrize("R", [0.05, 0.5, 2.0])
def test_slope_bound_minimum(R: float) -> None:
    z = math.pi / (2 * R)
    assert math.isclose(slope_bound(R, z), slope_bound_minimum(R), rel_tol=1e-12)
    for w in np.linspace(z, 2 * z, 50):
        assert slope_bound(R, float(w)) >= slope_bound_minimum(R) * (1 - 1e-12)


def test_slope_bound_large_z() -> None:
    assert math.isclose(slope_bound(1.0, 400.0), 2.0, rel_tol=1e-12)


@pytest.mark.parametrize("R", [0.05, 0.1, 0.5])
def test_critical_angle_is_maximum(R: float) -> None:
    tp = ThetaParams(R)
    theta = critical_angle(R, tp)
    assert 0 < theta < math.pi
    peak = trigonometric_majorant(R, theta, tp)
    for offset in (-0.01, 0.01):
        assert trigonometric_majorant(R, theta + offset, tp) <= peak


@pytest.mark.parametrize("R", [0.05, 0.1])
@pytest.mark.parametrize("theta", [0.5, 1.5, 2.5])
def test_quadratic_majorant(R: float, theta: float) -> None:
    tp = ThetaParams(R)
    x = 2 * math.pi * R * np.arange(1, 1_000_000)
    terms = 1 / (1 - math.cos(theta) + x * x)
    direct = 2 * R * math.exp(math.pi * R) * math.sin(theta) * float(np.sum(terms))
    quadratic = quadratic_majorant(R, theta, tp)
    assert math.isclose(quadratic, direct, rel_tol=1e-5)
    assert quadratic <= closed_majorant(R, theta)


@pytest.mark.parametrize("R", [0.05, 1.0])
def test_mismatched_params(R: float) -> None:
    with pytest.raises(InvalidArgumentError):
        positivity_check(R, 20, ThetaParams(2 * R))


def test_invalid_grid() -> None:
    with pytest.raises(InvalidArgumentError):
        positivity_check(1.0, 1, ThetaParams(1.0))
