import math
from collections.abc import Callable

import mpmath
import pytest

from zeromode.cartan_geometry import (
    HARISH_CHANDRA,
    IDENTITY,
    PROFILES,
    STENZEL,
    MetricProfile,
    alpha_check,
    gk_constant_shift,
    matrix_realization,
    radial_geometry,
    stenzel_block_identity,
)
from zeromode.errors import InvalidArgumentError

SAMPLES = (0.3, 1.0, 2.5)


def test_profiles() -> None:
    assert set(PROFILES) == {"identity", "harish-chandra", "stenzel"}


@pytest.mark.parametrize("r", SAMPLES)
def test_rho(r: float) -> None:
    assert radial_geometry(IDENTITY).rho(r) == 1.0
    expected = (2 * math.sinh(r / 2) / r) ** 2
    assert math.isclose(radial_geometry(HARISH_CHANDRA).rho(r), expected, rel_tol=1e-14)
    expected = math.tanh(r / 2) / (r / 2)
    assert math.isclose(radial_geometry(STENZEL).rho(r), expected, rel_tol=1e-14)


@pytest.mark.parametrize("r", SAMPLES)
def test_delta(r: float) -> None:
    assert math.isclose(radial_geometry(IDENTITY).delta(r), r * r, rel_tol=1e-14)
    expected = 4 * math.sinh(r / 2) ** 2
    assert math.isclose(radial_geometry(HARISH_CHANDRA).delta(r), expected, rel_tol=1e-14)


@pytest.mark.parametrize("metric", [IDENTITY, HARISH_CHANDRA, STENZEL])
def test_alpha_is_one(metric: MetricProfile) -> None:
    report = alpha_check(metric, SAMPLES)
    assert report.label == metric.label
    assert report.max_deviation < 1e-12


@pytest.mark.parametrize("metric", [HARISH_CHANDRA, STENZEL])
@pytest.mark.parametrize("r", SAMPLES)
def test_matrix_rho(metric: MetricProfile, r: float) -> None:
    realization = matrix_realization(metric, r)
    assert math.isclose(realization.rho, radial_geometry(metric).rho(r), rel_tol=1e-10)


def test_gk_constant_shift() -> None:
    assert abs(gk_constant_shift() - 0.25) < 1e-12
    assert abs(gk_constant_shift([0.1, 7.0]) - 0.25) < 1e-12


def test_identity_gamma_vanishes() -> None:
    geometry = radial_geometry(IDENTITY)
    for r in SAMPLES:
        assert abs(geometry.gamma(r)) < 1e-12


LOG_SLOPES = [
    (IDENTITY, lambda r: 2 / r),
    (HARISH_CHANDRA, lambda r: 1 / math.tanh(r / 2)),
    (STENZEL, lambda r: 1 / r + 1 / math.sinh(r)),
]


@pytest.mark.parametrize(("metric", "log_slope"), LOG_SLOPES)
@pytest.mark.parametrize("r", SAMPLES)
def test_gamma_discrepancy(
    metric: MetricProfile, log_slope: Callable[[float], float], r: float
) -> None:
    expected = -(log_slope(r) ** 2) / 4
    discrepancy = radial_geometry(metric).gamma_discrepancy(r)
    assert abs(discrepancy - expected) < 1e-10 * max(1.0, abs(expected))


@pytest.mark.parametrize("metric", [IDENTITY, HARISH_CHANDRA, STENZEL])
@pytest.mark.parametrize("r", SAMPLES)
def test_constants_are_annihilated(metric: MetricProfile, r: float) -> None:
    assert abs(radial_geometry(metric).constant_residual(r)) < 1e-5


@pytest.mark.parametrize("z", [0.0, 1e-3, 0.5, 4.0, 30.0])
def test_stenzel_block(z: float) -> None:
    block, profile = stenzel_block_identity(z)
    assert math.isclose(block, profile, rel_tol=1e-12)


def test_profile_validation() -> None:
    with pytest.raises(InvalidArgumentError):
        MetricProfile("shifted", lambda z: 1 + mpmath.mpf(1) + z)
    with pytest.raises(InvalidArgumentError):
        MetricProfile("flat", lambda z: mpmath.mpf(1), ambient_dim=1)


def test_alpha_check_needs_samples() -> None:
    with pytest.raises(InvalidArgumentError):
        alpha_check(IDENTITY, [])
