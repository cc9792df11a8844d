"""Radial calculus for orthogonally invariant metrics on p = R^3.

A metric profile a(z) acts on p through ad(x); its volume factor is
rho = |a(r) a(-r)|^(1/2), the radial density is delta = rho r^(n-1) and the
radial operator is -delta^(-1/2) D alpha D delta^(1/2) + gamma with gamma
fixed by annihilating constants.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import mpmath
import numpy as np
import numpy.typing as npt
from scipy import linalg

from .errors import InvalidArgumentError
from .numerics import MPMATH_LOCK, derivative

PRECISION = 30

type Profile = Callable[[Any], Any]


@dataclass(frozen=True)
class MetricProfile:
    label: str
    profile: Profile
    ambient_dim: int = 3
    eigenvalue_map: Callable[[Any], Any] = field(default=lambda r: r)

    def __post_init__(self) -> None:
        if self.ambient_dim < 2:
            raise InvalidArgumentError(f"ambient dimension must be >= 2, got {self.ambient_dim}")
        with MPMATH_LOCK, mpmath.workdps(PRECISION):
            at_zero = self.profile(mpmath.mpf(0))
        if abs(at_zero - 1) > 1e-12:
            raise InvalidArgumentError(f"profile {self.label} has a(0)={at_zero}, expected 1")

    def value(self, z: float) -> float:
        with MPMATH_LOCK, mpmath.workdps(PRECISION):
            return float(mpmath.re(self.profile(mpmath.mpf(z))))


def _identity(z: Any) -> Any:
    return mpmath.mpf(1)


def _harish_chandra(z: Any) -> Any:
    if z == 0:
        return mpmath.mpf(1)
    return (-mpmath.expm1(-z) / z) ** 2


def _stenzel(z: Any) -> Any:
    if z == 0:
        return mpmath.mpf(1)
    return mpmath.tanh(z / 2) / (z / 2)


IDENTITY = MetricProfile("identity", _identity)
HARISH_CHANDRA = MetricProfile("harish-chandra", _harish_chandra)
STENZEL = MetricProfile("stenzel", _stenzel)

PROFILES = {profile.label: profile for profile in (IDENTITY, HARISH_CHANDRA, STENZEL)}


def _ad_matrix(r: float) -> npt.NDArray[np.float64]:
    x = np.array([r / 2, 0.0, 0.0])
    cross = np.array(
        [
            [0.0, -x[2], x[1]],
            [x[2], 0.0, -x[0]],
            [-x[1], x[0], 0.0],
        ]
    )
    zero = np.zeros((3, 3))
    return np.block([[zero, -2 * cross], [2 * cross, zero]])


@dataclass(frozen=True)
class MatrixRealization:
    alpha: float
    rho: float


def matrix_realization(metric: MetricProfile, r: float) -> MatrixRealization:
    """alpha = <A^-1 e, e> for the radial unit vector e, and rho from det A on the nonzero modes."""
    eigenvalues, vectors = linalg.eigh(_ad_matrix(metric.eigenvalue_map(r)))
    radial = np.zeros(6)
    radial[0] = 1.0

    weights = (vectors.T @ radial) ** 2
    values = [metric.value(float(ev)) for ev in eigenvalues]
    alpha = float(sum(w / v for w, v in zip(weights, values)))

    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    nonzero = [v for ev, v in zip(eigenvalues, values) if abs(ev) > 1e-9 * scale]
    rho = abs(math.prod(nonzero)) ** 0.25 if nonzero else 1.0
    return MatrixRealization(alpha, rho)


@dataclass(frozen=True)
class RadialGeometry:
    metric: MetricProfile

    def _rho_mp(self, r: Any) -> Any:
        zeta = self.metric.eigenvalue_map(r)
        return mpmath.sqrt(abs(self.metric.profile(zeta) * self.metric.profile(-zeta)))

    def _delta_mp(self, r: Any) -> Any:
        return self._rho_mp(r) * r ** (self.metric.ambient_dim - 1)

    def _sqrt_delta_mp(self, r: Any) -> Any:
        return mpmath.sqrt(self._delta_mp(r))

    def rho(self, r: float) -> float:
        with MPMATH_LOCK, mpmath.workdps(PRECISION):
            return float(self._rho_mp(mpmath.mpf(r)))

    def delta(self, r: float) -> float:
        with MPMATH_LOCK, mpmath.workdps(PRECISION):
            return float(self._delta_mp(mpmath.mpf(r)))

    def alpha(self, r: float) -> float:
        return matrix_realization(self.metric, r).alpha

    def gamma(self, r: float) -> float:
        """D(alpha D delta^(1/2)) / delta^(1/2) with alpha constant in r."""
        alpha = self.alpha(r)
        with MPMATH_LOCK, mpmath.workdps(PRECISION):
            point = mpmath.mpf(r)
            second = mpmath.diff(self._sqrt_delta_mp, point, 2)
            return float(alpha * second / self._sqrt_delta_mp(point))

    def gamma_printed(self, r: float) -> float:
        """(1/2) [(alpha delta')' / delta - (delta' / delta)^2]."""
        alpha = self.alpha(r)
        with MPMATH_LOCK, mpmath.workdps(PRECISION):
            point = mpmath.mpf(r)
            delta = self._delta_mp(point)
            first = mpmath.diff(self._delta_mp, point, 1)
            second = mpmath.diff(self._delta_mp, point, 2)
            return float((alpha * second / delta - (first / delta) ** 2) / 2)

    def gamma_discrepancy(self, r: float) -> float:
        """gamma_printed - gamma, which equals -(1/4)(delta'/delta)^2 when alpha = 1."""
        return self.gamma_printed(r) - self.gamma(r)

    def constant_residual(self, r: float) -> float:
        def sqrt_delta(t: float) -> float:
            return math.sqrt(self.delta(t))

        return -self.alpha(r) * derivative(sqrt_delta, r, 2) / sqrt_delta(r) + self.gamma(r)


def radial_geometry(metric: MetricProfile) -> RadialGeometry:
    return RadialGeometry(metric)


def gk_constant_shift(samples: Sequence[float] = (0.5, 1.0, 3.0)) -> float:
    """D^2(delta^(1/2)) / delta^(1/2) for delta = 4 sinh^2(r/2), averaged over samples."""
    geometry = radial_geometry(HARISH_CHANDRA)
    values = [geometry.gamma(r) for r in samples]
    return math.fsum(values) / len(values)


@dataclass(frozen=True)
class AlphaReport:
    label: str
    samples: tuple[float, ...]
    alphas: tuple[float, ...]

    @property
    def max_deviation(self) -> float:
        return max(abs(alpha - 1) for alpha in self.alphas)


def alpha_check(metric: MetricProfile, r_samples: Sequence[float]) -> AlphaReport:
    if not r_samples:
        raise InvalidArgumentError("alpha_check needs at least one sample")
    alphas = tuple(matrix_realization(metric, r).alpha for r in r_samples)
    return AlphaReport(metric.label, tuple(r_samples), alphas)


def stenzel_block_identity(z: float) -> tuple[float, float]:
    if z == 0.0:
        return 1.0, 1.0
    block = math.expm1(z) * -math.expm1(-z) / (z * math.sinh(z))
    return block, math.tanh(z / 2) / (z / 2)
