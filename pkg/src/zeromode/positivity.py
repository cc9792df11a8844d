"""Positivity of the finite-radius density.

The density is nonnegative exactly when the log-slope of theta3(Rz) stays
below 2 sinh z cosh z / (sinh^2(pi/2R) + cosh^2 z). The check is done
directly on a grid and through the chain of majorants that proves it for
large and for small R.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import optimize

from .errors import InvalidArgumentError
from .numerics import coth_remainder, sum_series
from .theta import ThetaParams, theta3, theta3_dz

LOGGER = logging.getLogger(__name__)

SMALL_R_CONSTANT = 0.73

type Condition = Literal["large-R", "small-R", "none"]


def _check_params(R: float, tp: ThetaParams) -> None:
    if not R > 0:
        raise InvalidArgumentError(f"R must be positive, got {R}")
    if not math.isclose(R, tp.R, rel_tol=1e-15):
        raise InvalidArgumentError(f"theta modulus {tp.R} does not match R={R}")


def theta3_log_slope(R: float, z: float, tp: ThetaParams) -> float:
    """d/dz ln theta3(Rz) from the product expansion of theta3."""
    _check_params(R, tp)
    angle = 2 * R * z
    c = math.cos(angle)

    def term(n: int) -> float:
        weight = math.exp(-math.pi * R * (2 * n - 1))
        return weight / (1 + 2 * c * weight + weight * weight)

    return -4 * R * math.sin(angle) * sum_series(term, tp.tol, tp.max_terms)


def printed_log_slope(R: float, z: float, tp: ThetaParams) -> float:
    _check_params(R, tp)
    angle = 2 * R * z
    c = math.cos(angle)
    q = tp.q

    def term(n: int) -> float:
        return q ** (n - 0.5) / (1 + 2 * c * q**n + q ** (2 * n))

    return -4 * R * math.sin(angle) * sum_series(term, tp.tol, tp.max_terms)


def log_slope_quotient(R: float, z: float, tp: ThetaParams) -> float:
    return R * theta3_dz(R * z, tp).real / theta3(R * z, tp).real


def slope_bound(R: float, z: float) -> float:
    """2 sinh z cosh z / (sinh^2(pi/2R) + cosh^2 z), scaled against overflow."""
    e2 = math.exp(-2 * z)
    s = math.sinh(math.pi / (2 * R)) ** 2
    return 2 * (1 - e2 * e2) / (4 * s * e2 + 1 + 2 * e2 + e2 * e2)


def trigonometric_majorant(R: float, theta: float, tp: ThetaParams) -> float:
    """2R sin(theta) e^(pi R) sum 1 / (cosh(2 pi R n) - cos(theta))."""
    c = math.cos(theta)

    def term(n: int) -> float:
        x = 2 * math.pi * R * n
        return 2 * math.exp(-x) / (1 + math.exp(-2 * x) - 2 * c * math.exp(-x))

    return 2 * R * math.sin(theta) * math.exp(math.pi * R) * sum_series(term, tp.tol, tp.max_terms)


def large_R_bound(R: float, tp: ThetaParams) -> float:
    """2R e^(pi R) sum 1 / sinh(2 pi R n)."""

    def term(n: int) -> float:
        x = 2 * math.pi * R * n
        return 2 * math.exp(-x) / -math.expm1(-2 * x)

    return 2 * R * math.exp(math.pi * R) * sum_series(term, tp.tol, tp.max_terms)


def slope_bound_minimum(R: float) -> float:
    """The bound at z = pi/(2R), equal to tanh(pi/R)."""
    return math.tanh(math.pi / R)


def _critical_equation(R: float, theta: float, tp: ThetaParams) -> float:
    c = math.cos(theta)

    def term(n: int) -> float:
        x = 2 * math.pi * R * n
        # (c cosh x - 1) / (cosh x - c)^2 with e^(-x) factored out
        e = math.exp(-x)
        return 2 * e * (c * (1 + e * e) - 2 * e) / (1 + e * e - 2 * c * e) ** 2

    return sum_series(term, tp.tol, tp.max_terms)


def critical_angle(R: float, tp: ThetaParams) -> float:
    return float(
        optimize.brentq(
            lambda theta: _critical_equation(R, theta, tp), 1e-12, math.pi, xtol=1e-14
        )
    )


def quadratic_majorant(R: float, theta: float, tp: ThetaParams) -> float:
    """The majorant after cosh x >= 1 + x^2/2, summed by the Poisson identity."""
    one_minus_cos = 1 - math.cos(theta)
    alpha = math.sqrt(one_minus_cos) / (2 * math.pi * R)
    # sum 1 / (alpha^2 + n^2) = (pi^2 / 2) (w coth w - 1) / w^2, w = pi alpha
    summed = math.pi**2 / 2 * coth_remainder(math.pi * alpha)
    return 2 * R * math.exp(math.pi * R) * math.sin(theta) * summed / (2 * math.pi * R) ** 2


def closed_majorant(R: float, theta: float) -> float:
    """e^(pi R) sin(theta) coth(pi alpha) / (2 (1 - cos theta)^(1/2))."""
    one_minus_cos = 1 - math.cos(theta)
    alpha = math.sqrt(one_minus_cos) / (2 * math.pi * R)
    return (
        math.exp(math.pi * R)
        * math.sin(theta)
        / (2 * math.sqrt(one_minus_cos) * math.tanh(math.pi * alpha))
    )


@dataclass(frozen=True)
class PositivityReport:
    R: float
    grid_points: int
    grid_passed: bool
    worst_margin: float
    worst_z: float
    large_R_bound: float
    slope_bound_minimum: float
    critical_angle: float
    critical_angle_exceeds_2piR: bool
    small_R_max: float
    closed_majorant: float
    small_R_bound: float

    @property
    def large_R_fires(self) -> bool:
        return self.large_R_bound <= self.slope_bound_minimum

    @property
    def small_R_fires(self) -> bool:
        return self.small_R_max <= self.small_R_bound <= self.slope_bound_minimum

    @property
    def condition(self) -> Condition:
        if self.large_R_fires:
            return "large-R"
        if self.small_R_fires:
            return "small-R"
        return "none"

    @property
    def counterexample(self) -> tuple[float, float] | None:
        return None if self.grid_passed else (self.R, self.worst_z)


def positivity_check(R: float, grid_points: int, tp: ThetaParams) -> PositivityReport:
    _check_params(R, tp)
    if grid_points < 2:
        raise InvalidArgumentError(f"grid_points must be at least 2, got {grid_points}")

    grid = np.linspace(math.pi / (2 * R), math.pi / R, grid_points)
    margins = np.array([slope_bound(R, z) - theta3_log_slope(R, z, tp) for z in grid])
    worst = int(np.argmin(margins))

    theta_R = critical_angle(R, tp)
    report = PositivityReport(
        R=R,
        grid_points=grid_points,
        grid_passed=bool(margins[worst] >= 0),
        worst_margin=float(margins[worst]),
        worst_z=float(grid[worst]),
        large_R_bound=large_R_bound(R, tp),
        slope_bound_minimum=slope_bound_minimum(R),
        critical_angle=theta_R,
        critical_angle_exceeds_2piR=theta_R >= 2 * math.pi * R,
        small_R_max=trigonometric_majorant(R, theta_R, tp),
        closed_majorant=closed_majorant(R, theta_R),
        small_R_bound=SMALL_R_CONSTANT * math.exp(math.pi * R),
    )
    LOGGER.info(
        "positivity at R=%s: grid %s, condition %s",
        R,
        "passed" if report.grid_passed else "FAILED",
        report.condition,
    )
    return report
