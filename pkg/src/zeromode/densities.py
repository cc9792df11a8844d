"""Radial zero-mode densities, their Schrodinger potentials and the rank-one inversion.

A density delta on r >= 0 gives the potential of its ground state,
q = D^2(delta^(1/2)) / delta^(1/2) = (ln delta)''/2 + ((ln delta)')^2/4.
Every density here carries analytic log-derivatives so that q never needs
a finite difference.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

from . import config
from .errors import DomainError, InvalidArgumentError
from .numerics import QuadratureSpec, integrate_interval, x_coth_x
from .theta import ThetaParams, theta3_derivative
from .transforms import theta_kernel

LOGGER = logging.getLogger(__name__)

# below this radius the potentials switch to their Taylor series
SERIES_RADIUS = 1e-3

type RadialFunction = Callable[[float], float]


@dataclass(frozen=True)
class RadialDensity:
    label: str
    evaluate: RadialFunction
    log_derivative: RadialFunction
    log_second: RadialFunction
    normalization: float

    def normalized(self, r: float) -> float:
        return self.evaluate(r) / self.normalization

    def ground_state_potential(self, r: float) -> float:
        first = self.log_derivative(r)
        return self.log_second(r) / 2 + first * first / 4


@dataclass(frozen=True)
class PotentialProfile:
    label: str
    evaluate: RadialFunction
    continuum_threshold: float | None = None


def _spec(spec: QuadratureSpec | None) -> QuadratureSpec:
    return spec if spec is not None else config.quadrature_spec()


def _sech(r: float) -> float:
    e = math.exp(-2 * abs(r))
    return 2 * math.exp(-abs(r)) / (1 + e)


def _csch2(r: float) -> float:
    e = math.exp(-2 * abs(r))
    return 4 * e / math.expm1(-2 * abs(r)) ** 2


def _coth_difference(a: float, r: float) -> float:
    if r < SERIES_RADIUS:
        return (
            (a**2 - 1) * r / 3
            - (a**4 - 1) * r**3 / 45
            + 2 * (a**6 - 1) * r**5 / 945
        )
    return (x_coth_x(a * r) - x_coth_x(r)) / r


def _positive(r: float) -> None:
    if not r > 0:
        raise DomainError(f"log-derivatives of the density are singular at r={r}", r)


def _level_value(a: float, r: float) -> float:
    # sech^3(r) sinh(r) sinh(ar) with the exponentials factored out
    r = abs(r)
    e = math.exp(-2 * r)
    return (
        2
        * math.exp((a - 2) * r)
        * -math.expm1(-2 * r)
        * -math.expm1(-2 * a * r)
        / (1 + e) ** 3
    )


@lru_cache(maxsize=64)
def _level_normalization(a: float, spec: QuadratureSpec) -> float:
    value, _ = integrate_interval(
        lambda r: _level_value(a, r), 0.0, spec.radius(2 - a), spec
    )
    LOGGER.debug("level density normalization at a=%s: %s", a, value)
    return value


def delta_level(level: float, spec: QuadratureSpec | None = None) -> RadialDensity:
    """sech^3(r) sinh(r) sinh(ar) with a = 2/(2+l)."""
    if not level >= 0:
        raise InvalidArgumentError(f"level must be nonnegative, got {level}")
    a = 2 / (2 + level)

    def log_derivative(r: float) -> float:
        _positive(r)
        return -3 * math.tanh(r) + (x_coth_x(r) + x_coth_x(a * r)) / r

    def log_second(r: float) -> float:
        _positive(r)
        return -3 * _sech(r) ** 2 - _csch2(r) - a * a * _csch2(a * r)

    return RadialDensity(
        label=f"delta-level-{level:g}",
        evaluate=lambda r: _level_value(a, r),
        log_derivative=log_derivative,
        log_second=log_second,
        normalization=_level_normalization(a, _spec(spec)),
    )


def delta_infinity(spec: QuadratureSpec | None = None) -> RadialDensity:
    density = delta_level(0.0, spec)
    return RadialDensity(
        label="delta-infinity",
        evaluate=density.evaluate,
        log_derivative=density.log_derivative,
        log_second=density.log_second,
        normalization=density.normalization,
    )


def potential_level(level: float) -> PotentialProfile:
    if not level >= 0:
        raise InvalidArgumentError(f"level must be nonnegative, got {level}")
    a = 2 / (2 + level)

    def evaluate(r: float) -> float:
        r = abs(r)
        ratio = 1 / a if r == 0.0 else math.tanh(r) / math.tanh(a * r)
        difference = _coth_difference(a, r)
        return (
            5
            + 2 * a * a
            - 6 * a * ratio
            - difference * difference
            - 15 * _sech(r) ** 2
        ) / 4

    return PotentialProfile(
        label=f"potential-level-{level:g}",
        evaluate=evaluate,
        continuum_threshold=(2 - a) ** 2 / 4,
    )


def g0_normalization() -> float:
    """Integral of sech(2|x|) (tanh(2|x|)/(2|x|))^2 over R^3."""
    return math.pi**2 / 8


def g0_density_su2(x_norm: float) -> float:
    u = 2 * abs(x_norm)
    ratio = 1 - u * u / 3 if u < SERIES_RADIUS else math.tanh(u) / u
    return _sech(u) * ratio * ratio / g0_normalization()


def g0_radial_jacobian(r: float) -> float:
    """4 pi |x|^2 d|x| / dr for r = 2|x|."""
    return math.pi * r * r / 2


def phi_l_normalization(level: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of the unnormalized phi_l against (sinh(2|x|)/(2|x|))^2 d^3x."""
    k = 2 + level
    return math.pi * delta_level(level, spec).normalization / (8 * k)


def phi_l_unnormalized(level: float, x: float) -> float:
    """(a^k + a^-k)^-3 (a^k - a^-k) / (a^2 - a^-2) with a = e^x, k = 2 + l."""
    k = 2 + level
    x = abs(x)
    if x == 0.0:
        return k / 16
    e = math.exp(-2 * k * x)
    return (
        math.exp(-(2 * k + 2) * x)
        * -math.expm1(-2 * k * x)
        / ((1 + e) ** 3 * -math.expm1(-4 * x))
    )


def phi_l_closed_form(level: float, x: float, spec: QuadratureSpec | None = None) -> float:
    if not level >= 0:
        raise InvalidArgumentError(f"level must be nonnegative, got {level}")
    return phi_l_unnormalized(level, x) / phi_l_normalization(level, spec)


@dataclass(frozen=True)
class _FiniteRadiusTerms:
    value: float
    first_ratio: float
    second_ratio: float


def _finite_R_terms(r: float, tp: ThetaParams) -> _FiniteRadiusTerms:
    # delta = -d/dr[theta3(Rr) / D] sinh(r) with D = sinh^2(pi/2R) + cosh^2(r);
    # the ratios are formed from D * delta since every derivative shares 1/D
    R = tp.R
    r = abs(r)
    e2 = math.exp(-2 * r)
    e4 = e2 * e2
    s = math.sinh(math.pi / (2 * R)) ** 2

    # D scaled by 4 e^(-2r); u, v, w are D'/D, D''/D, D'''/D
    scaled = 4 * s * e2 + 1 + 2 * e2 + e4
    u = 2 * (1 - e4) / scaled
    v = 4 * (1 + e4) / scaled
    w = 8 * (1 - e4) / scaled

    h1 = -u
    h2 = 2 * u * u - v
    h3 = -6 * u**3 + 6 * u * v - w

    n0, n1, n2, n3 = (R**j * theta3_derivative(R * r, tp, j).real for j in range(4))
    g1 = n1 + n0 * h1
    g2 = n2 + 2 * n1 * h1 + n0 * h2
    g3 = n3 + 3 * n2 * h1 + 3 * n1 * h2 + n0 * h3

    sinh, cosh = math.sinh(r), math.cosh(r)
    tilde = -g1 * sinh
    first = -g2 * sinh - g1 * cosh
    second = -g3 * sinh - 2 * g2 * cosh - g1 * sinh

    # sinh(r) / D with the exponentials factored out
    value = -g1 * 2 * math.exp(-r) * -math.expm1(-2 * r) / scaled
    if tilde == 0.0:
        return _FiniteRadiusTerms(value, math.nan, math.nan)
    return _FiniteRadiusTerms(value, first / tilde, second / tilde)


def _finite_R_log_terms(r: float, tp: ThetaParams) -> tuple[float, float]:
    _positive(r)
    terms = _finite_R_terms(r, tp)
    if not (terms.value > 0 and math.isfinite(terms.first_ratio)):
        raise DomainError(
            f"finite-radius density vanishes at r={r}, R={tp.R}; log-derivative undefined", r
        )
    return terms.first_ratio, terms.second_ratio - terms.first_ratio**2


@lru_cache(maxsize=64)
def _finite_R_normalization(tp: ThetaParams, spec: QuadratureSpec) -> float:
    half = math.pi / (2 * tp.R)
    value, _ = integrate_interval(
        lambda r: _finite_R_terms(r, tp).value,
        0.0,
        2 * half + spec.radius(1.0),
        spec,
        points=(half, 2 * half),
    )
    LOGGER.debug("finite-radius normalization at R=%s: %s", tp.R, value)
    return value


def delta_finite_R(
    R: float, tp: ThetaParams, spec: QuadratureSpec | None = None
) -> RadialDensity:
    if not math.isclose(R, tp.R, rel_tol=1e-15):
        raise InvalidArgumentError(f"theta modulus {tp.R} does not match R={R}")

    return RadialDensity(
        label=f"delta-finite-R-{R:g}",
        evaluate=lambda r: _finite_R_terms(r, tp).value,
        log_derivative=lambda r: _finite_R_log_terms(r, tp)[0],
        log_second=lambda r: _finite_R_log_terms(r, tp)[1],
        normalization=_finite_R_normalization(tp, _spec(spec)),
    )


def potential_finite_R(R: float, tp: ThetaParams | None = None) -> PotentialProfile:
    """Ground-state potential of the finite-radius density; R = inf gives the level-zero well."""
    if math.isinf(R):
        return potential_level(0.0)
    if tp is None:
        tp = config.theta_params(R)
    if not math.isclose(R, tp.R, rel_tol=1e-15):
        raise InvalidArgumentError(f"theta modulus {tp.R} does not match R={R}")

    def evaluate(r: float) -> float:
        first, second = _finite_R_log_terms(r, tp)
        return second / 2 + first * first / 4

    # whether q_R has a limit at infinity is open
    return PotentialProfile(label=f"potential-finite-R-{R:g}", evaluate=evaluate)


@dataclass(frozen=True)
class InversionResult:
    phi: float
    radial_density: float
    error_estimate: float


def _transform_profile(R: float, tp: ThetaParams | None) -> RadialFunction:
    if math.isinf(R):
        return lambda y: y / math.sinh(y) if y != 0.0 else 1.0
    assert tp is not None
    return lambda y: theta_kernel(y, tp)


def invert_transform_rank1(
    level: float,
    R: float,
    r: float,
    tp: ThetaParams | None = None,
    spec: QuadratureSpec | None = None,
) -> InversionResult:
    """Weyl-alternated inverse transform of the rank-one spectral profile.

    With y = pi lam0 / (2 + l) and z = (2 + l)|x| = r, the inverse transform is
    phi(x) = (1 / sinh 2x) * integral over y > 0 of y f(y) sin(2 z y / pi),
    up to a constant. The radial density is phi(x) sinh^2(2x).
    """
    if not level >= 0:
        raise InvalidArgumentError(f"level must be nonnegative, got {level}")
    if not r > 0:
        raise InvalidArgumentError(f"radial coordinate must be positive, got {r}")
    if not R > 0:
        raise InvalidArgumentError(f"radius must be positive, got {R}")

    spec = _spec(spec)
    if math.isfinite(R):
        if tp is None:
            tp = config.theta_params(R)
        if not math.isclose(R, tp.R, rel_tol=1e-15):
            raise InvalidArgumentError(f"theta modulus {tp.R} does not match R={R}")
        radius = math.sqrt(math.pi * R * (10.0 - math.log(spec.abs_tol)))
        points = [m * math.pi * R for m in range(1, math.ceil(radius / (math.pi * R)))]
    else:
        radius = spec.radius(1.0) + 10.0
        points = []

    profile = _transform_profile(R, tp)
    p = 2 * r / math.pi
    x = r / (2 + level)

    # the Weyl sum leaves only the sine part of the line integral
    value, error = integrate_interval(
        lambda y: y * profile(y) * math.sin(p * y), 0.0, radius, spec, points
    )

    sinh2x = math.sinh(2 * x)
    return InversionResult(
        phi=value / sinh2x,
        radial_density=value * sinh2x,
        error_estimate=error,
    )
