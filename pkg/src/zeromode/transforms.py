"""c-functions, their theta deformations and the Fourier identities behind them.

Spectral parameters live in the ambient coordinates of the root system, so
for A1 the parameter lam0 * alpha pairs with alpha to 2 * lam0.
"""

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import special

from .errors import InvalidArgumentError
from .numerics import (
    QuadratureSpec,
    coth_remainder,
    integrate_interval,
    sum_series,
)
from .root_systems import RootSystem, Vector
from .theta import (
    ThetaParams,
    quasi_period_residuals,
    theta1,
    theta1_prime0,
    theta1_product,
    theta3,
    theta4,
)

LOGGER = logging.getLogger(__name__)

# exp(-690) is the last power of e a double can take without underflow
LOG_UNDERFLOW = 690.0


@dataclass(frozen=True)
class SpectralParameter:
    coordinates: Vector

    def pairings(self, rs: RootSystem) -> list[float]:
        if len(self.coordinates) != rs.dimension:
            raise InvalidArgumentError(
                f"spectral parameter has {len(self.coordinates)} coordinates, "
                f"{rs.label or 'root system'} needs {rs.dimension}"
            )
        return [rs.pair(self.coordinates, root).real for root in rs.positive_roots]

    @classmethod
    def along(cls, rs: RootSystem, coefficient: float) -> "SpectralParameter":
        return cls(rs.along(coefficient))


@dataclass(frozen=True)
class ModelParams:
    level: float = 0.0
    radius: float = math.inf

    def __post_init__(self) -> None:
        if not self.level >= 0:
            raise InvalidArgumentError(f"level must be nonnegative, got {self.level}")
        if not self.radius > 0:
            raise InvalidArgumentError(f"radius must be positive, got {self.radius}")

    @property
    def a(self) -> float:
        return 2 / (2 + self.level)

    @property
    def finite_radius(self) -> bool:
        return math.isfinite(self.radius)

    def scale(self, rs: RootSystem) -> float:
        """pi / (2 (g + l)), the factor in front of every pairing."""
        if not math.isfinite(self.level):
            raise InvalidArgumentError("the affine c-function needs a finite level")
        return math.pi / (2 * (rs.dual_coxeter + self.level))


@dataclass(frozen=True)
class Comparison:
    """A quadrature against the closed form it should reproduce."""

    quadrature: float
    closed_form: float
    error_estimate: float = 0.0
    printed: float | None = None

    @property
    def relative_error(self) -> float:
        return abs(self.quadrature - self.closed_form) / max(abs(self.closed_form), 1e-300)


def _check_radius(params: ModelParams, tp: ThetaParams) -> None:
    if not params.finite_radius:
        raise InvalidArgumentError("the theta deformation needs a finite radius")
    if not math.isclose(params.radius, tp.R, rel_tol=1e-15):
        raise InvalidArgumentError(
            f"theta modulus {tp.R} does not match the model radius {params.radius}"
        )


def hc_c_function(rs: RootSystem, lam: SpectralParameter) -> complex:
    value = 1 + 0j
    for rho_alpha, lam_alpha in zip(rs.rho_pairings(), lam.pairings(rs)):
        value *= rho_alpha / complex(rho_alpha, -lam_alpha)
    return value


def affine_c_function(rs: RootSystem, params: ModelParams, lam: SpectralParameter) -> complex:
    s = params.scale(rs)
    value = 1 + 0j
    for rho_alpha, lam_alpha in zip(rs.rho_pairings(), lam.pairings(rs)):
        value *= math.sin(s * rho_alpha) / cmath.sin(s * complex(rho_alpha, -lam_alpha))
    return value


def hc_transform_gamma_form(
    rs: RootSystem, params: ModelParams, lam: SpectralParameter
) -> tuple[complex, complex]:
    """Sine form and Gamma product of the level-l transform.

    The sine side is normalised by c = s^#roots so both sides are 1 at lam = 0;
    the Gamma side runs over all roots with argument 1 + i<lam,alpha>/(2(g+l)).
    """
    s = params.scale(rs)
    pairings = lam.pairings(rs)

    lhs = 1 + 0j
    log_rhs = 0j
    for x in pairings:
        # <-i lam, alpha> / sin(s <-i lam, alpha>) = x / sinh(s x)
        lhs *= s * x / math.sinh(s * x) if x != 0.0 else 1.0
        y = s * x / math.pi
        log_rhs += special.loggamma(1 + 1j * y) + special.loggamma(1 - 1j * y)

    return lhs, cmath.exp(log_rhs)


def level_transform(level: float, lam0: float) -> float:
    """sin(pi/(2+l)) lam0 / sinh(pi lam0/(2+l)), the level-l transform for SU(2)."""
    k = math.pi / (2 + level)
    if lam0 == 0.0:
        return math.sin(k) / k
    return math.sin(k) * lam0 / math.sinh(k * lam0)


def _finite_R_factor(z: complex, s: float, tp: ThetaParams) -> complex:
    w = s * z
    return cmath.sinh(w / tp.R) / (z * theta1(w, tp))


def finite_R_transform(
    rs: RootSystem, params: ModelParams, lam: SpectralParameter, tp: ThetaParams
) -> complex:
    _check_radius(params, tp)
    s = params.scale(rs)

    value = 1 + 0j
    for rho_alpha, lam_alpha in zip(rs.rho_pairings(), lam.pairings(rs)):
        value *= _finite_R_factor(complex(rho_alpha, -lam_alpha), s, tp)
        value /= _finite_R_factor(complex(rho_alpha, 0.0), s, tp)
    return value


def theta_kernel(y: float, tp: ThetaParams) -> float:
    """sin(y/R) / T(y) where theta1(iy) = i T(y), continued across the common zeros."""
    R = tp.R
    if y * y / (math.pi * R) > LOG_UNDERFLOW:
        return 0.0

    m = round(y / (math.pi * R))
    if abs(y - m * math.pi * R) < 1e-7 * max(1.0, abs(y)):
        return tp.q ** (m * m / 2) / (R * theta1_prime0(tp))

    return math.sin(y / R) / theta1(1j * y, tp).imag


def theta_deformed_transform(
    rs: RootSystem, params: ModelParams, lam: SpectralParameter, tp: ThetaParams
) -> float:
    """Product over positive roots of the theta kernel at s <lam, alpha>, 1 at lam = 0."""
    _check_radius(params, tp)
    s = params.scale(rs)
    normalization = tp.R * theta1_prime0(tp)

    value = 1.0
    for x in lam.pairings(rs):
        value *= normalization * theta_kernel(s * x, tp)
    return value


def gram_matrix(
    rs: RootSystem,
    params: ModelParams,
    tp: ThetaParams,
    coefficients: Sequence[float],
) -> npt.NDArray[np.complex128]:
    """M_jk = F(lam_j - lam_k) for lam_j = c_j * highest root, F the finite-R transform."""
    size = len(coefficients)
    matrix = np.zeros((size, size), dtype=np.complex128)
    for j, cj in enumerate(coefficients):
        for k, ck in enumerate(coefficients):
            lam = SpectralParameter.along(rs, cj - ck)
            matrix[j, k] = finite_R_transform(rs, params, lam, tp)
    return matrix


def _gaussian_radius(R: float, spec: QuadratureSpec) -> float:
    # theta1 off the real axis grows like exp(y^2 / (pi R))
    if spec.truncation_radius is not None:
        return spec.truncation_radius
    return math.sqrt(math.pi * R * (10.0 - math.log(spec.abs_tol)))


def reciprocal_theta_fourier(
    x0: float, p: float, tp: ThetaParams, spec: QuadratureSpec
) -> Comparison:
    if not 0 < x0 < math.pi:
        raise InvalidArgumentError(f"x0 must lie in (0, pi), got {x0}")

    def integrand(y: float) -> float:
        if y * y / (math.pi * tp.R) > LOG_UNDERFLOW:
            return 0.0
        return (cmath.exp(1j * p * y) / theta1(complex(x0, y), tp)).real

    # 1/theta1(x0 + iy) is conjugate symmetric in y
    value, error = integrate_interval(integrand, 0.0, _gaussian_radius(tp.R, spec), spec)
    closed_form = theta4(math.pi * tp.R * p / 2, tp).real / (
        theta1_prime0(tp) * (math.exp(x0 * p) + math.exp((x0 - math.pi) * p))
    )
    return Comparison(value / math.pi, closed_form, error / math.pi)


def radial_kernel_fourier(p: float, tp: ThetaParams, spec: QuadratureSpec) -> Comparison:
    R = tp.R
    radius = _gaussian_radius(R, spec)
    zeros = [m * math.pi * R for m in range(1, math.ceil(radius / (math.pi * R)))]

    value, error = integrate_interval(
        lambda y: theta_kernel(y, tp) * math.cos(p * y), 0.0, radius, spec, zeros
    )
    closed_form = (
        R
        * math.sinh(math.pi / R)
        * theta3(math.pi * R * p / 2, tp).real
        / (
            4
            * theta1_prime0(tp)
            * (math.sinh(math.pi / (2 * R)) ** 2 + math.cosh(math.pi * p / 2) ** 2)
        )
    )
    return Comparison(R * value / math.pi, closed_form, R * error / math.pi)


def termwise_ft(
    x0: float, n: int, p: float, tp: ThetaParams, spec: QuadratureSpec
) -> Comparison:
    """Fourier transform of the n-th triple-product factor of 1/theta1.

    `closed_form` is the residue sum; `printed` is the form with sinh(pi n R)
    and e^(x0 p) + e^((x0 - pi) p), kept for comparison.
    """
    if not 0 < x0 < math.pi:
        raise InvalidArgumentError(f"x0 must lie in (0, pi), got {x0}")
    if n < 1:
        raise InvalidArgumentError(f"factor index must be positive, got {n}")

    qn = tp.q**n

    def integrand(y: float) -> float:
        w = complex(x0, y)
        denominator = 1 - 2 * cmath.cos(2 * w) * qn + qn * qn
        return (cmath.exp(1j * p * y) / denominator).real

    radius = spec.radius(2.0) + n * math.pi * tp.R
    value, error = integrate_interval(integrand, 0.0, radius, spec)

    shift = math.exp(x0 * p)
    if p == 0.0:
        closed_form = n * tp.R / -math.expm1(-4 * math.pi * n * tp.R)
    else:
        closed_form = math.sin(math.pi * n * tp.R * p) / (
            -math.expm1(-4 * math.pi * n * tp.R) * shift * -math.expm1(-math.pi * p)
        )
    printed = math.sin(math.pi * n * tp.R * p) / (
        math.sinh(math.pi * n * tp.R) * (shift + math.exp((x0 - math.pi) * p))
    )
    return Comparison(value / math.pi, closed_form, error / math.pi, printed)


def poisson_identity(
    alpha: float, tol: float = 1e-13, max_terms: int = 10_000
) -> tuple[float, float]:
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")

    lhs = sum_series(lambda n: 1 / (alpha**2 + n**2), tol, max_terms)
    w = math.pi * alpha
    rhs = math.pi**2 / 2 * coth_remainder(w)
    return lhs, rhs


@dataclass(frozen=True)
class QuasiPeriodReport:
    residuals: dict[str, float]
    resolved: str
    zero_lattice_max: float


def quasi_period_check(tp: ThetaParams, x: complex = 0.3) -> QuasiPeriodReport:
    residuals = quasi_period_residuals(x, tp)
    resolved = min(residuals, key=residuals.__getitem__)
    zero_lattice_max = max(
        abs(theta1_product(n * math.pi + 1j * m * math.pi * tp.R, tp))
        for n in range(-2, 3)
        for m in range(-2, 3)
    )
    LOGGER.info("theta1 quasi-period at R=%s resolves to %s", tp.R, resolved)
    return QuasiPeriodReport(residuals, resolved, zero_lattice_max)
