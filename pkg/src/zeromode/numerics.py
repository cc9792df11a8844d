import logging
import math
import sys
import threading
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import mpmath
import numpy as np
import numpy.typing as npt
from scipy import integrate, linalg

from .errors import ConvergenceError, InvalidArgumentError

LOGGER = logging.getLogger(__name__)

EPS = sys.float_info.epsilon

# series whose term ratio stays above this are handed to mpmath acceleration
SLOW_RATIO = 0.99
SLOW_PROBE = 64

# mpmath keeps its working precision in one process-wide context
MPMATH_LOCK = threading.RLock()

type RealFunction = Callable[[float], float]


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    truncation_radius: float | None = None
    max_subdivisions: int = 2048

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidArgumentError(
                f"quadrature tolerances must be positive, got {self.abs_tol}, {self.rel_tol}"
            )
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise InvalidArgumentError(
                f"truncation radius must be positive, got {self.truncation_radius}"
            )
        if self.max_subdivisions < 1:
            raise InvalidArgumentError(
                f"max_subdivisions must be positive, got {self.max_subdivisions}"
            )

    def radius(self, decay_rate: float) -> float:
        if self.truncation_radius is not None:
            return self.truncation_radius
        if not decay_rate > 0:
            raise InvalidArgumentError(f"decay rate must be positive, got {decay_rate}")
        return (5.0 - math.log(self.abs_tol)) / decay_rate


def integrate_interval(
    f: RealFunction,
    a: float,
    b: float,
    spec: QuadratureSpec,
    points: Sequence[float] = (),
) -> tuple[float, float]:
    inner = sorted(p for p in points if a < p < b)
    result: Any = integrate.quad(
        f,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        points=inner or None,
        full_output=1,
    )
    value, error = float(result[0]), float(result[1])
    if len(result) > 3:
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] did not converge: {result[3]}", partial=value
        )
    return value, error


def integrate_line(
    f: RealFunction,
    decay_rate_hint: float,
    spec: QuadratureSpec,
    points: Sequence[float] = (),
) -> tuple[float, float]:
    """Integral of f over the real line, truncated where exp(-rate |y|) is negligible."""
    radius = spec.radius(decay_rate_hint)
    LOGGER.debug("integrating over [-%s, %s]", radius, radius)

    left, left_error = integrate_interval(f, -radius, 0.0, spec, points)
    right, right_error = integrate_interval(f, 0.0, radius, spec, points)
    return left + right, left_error + right_error


def _accelerated_sum(term: Callable[[Any], Any], start: int) -> float:
    with MPMATH_LOCK, mpmath.workdps(30):
        value = mpmath.nsum(lambda n: term(n), [start, mpmath.inf])
    return float(mpmath.re(value))


def sum_series(
    term: Callable[[Any], Any], tol: float, max_terms: int, start: int = 1
) -> float:
    """Sum term(n) for n >= start until the tail bound drops below tol.

    Geometrically decaying terms are summed directly with the ratio tail
    bound. Slowly decaying or alternating terms are passed to mpmath's
    extrapolating summation, in which case `term` receives mpmath numbers.
    """
    partial = 0.0
    previous: float | None = None

    for n in range(start, start + max_terms):
        value = float(term(n))
        partial += value

        if previous is not None:
            if value == 0.0 and previous == 0.0:
                return partial
            if previous != 0.0:
                ratio = abs(value / previous)
                if ratio < 1 and abs(value) * ratio / (1 - ratio) < tol:
                    LOGGER.debug("series converged after %d terms", n - start + 1)
                    return partial
                if ratio > SLOW_RATIO and n - start >= SLOW_PROBE:
                    LOGGER.debug("slow series at n=%d, accelerating", n)
                    return _accelerated_sum(term, start)

        previous = value

    raise ConvergenceError(
        f"series did not reach tolerance {tol} within {max_terms} terms", partial=partial
    )


@dataclass(frozen=True)
class TridiagonalSystem:
    diagonal: npt.NDArray[np.float64]
    off_diagonal: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if len(self.diagonal) < 1:
            raise InvalidArgumentError("tridiagonal system needs at least one row")
        if len(self.off_diagonal) != len(self.diagonal) - 1:
            raise InvalidArgumentError(
                f"off-diagonal has length {len(self.off_diagonal)}, "
                f"expected {len(self.diagonal) - 1}"
            )

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros(self.size)
        radius[:-1] += np.abs(self.off_diagonal)
        radius[1:] += np.abs(self.off_diagonal)
        return float(np.min(self.diagonal - radius)), float(np.max(self.diagonal + radius))

    def dense(self) -> npt.NDArray[np.float64]:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )


def sturm_count(system: TridiagonalSystem, x: float) -> int:
    """Number of eigenvalues strictly below x."""
    count = 0
    previous = 1.0
    for i in range(system.size):
        pivot = system.diagonal[i] - x
        if i > 0:
            pivot -= system.off_diagonal[i - 1] ** 2 / previous
        if pivot == 0.0:
            pivot = -EPS * (abs(system.diagonal[i]) + abs(x) + 1)
        if pivot < 0:
            count += 1
        previous = pivot
    return count


def _select_range(system: TridiagonalSystem, interval: tuple[float, float]) -> tuple[float, float]:
    lower, upper = interval
    low, high = system.gershgorin()
    # stebz selects (lower, upper]; clip unbounded ends just outside the spectrum
    return max(lower, low - 1.0), min(upper, high + 1.0)


def eig_sym_tridiag(
    system: TridiagonalSystem, interval: tuple[float, float], tol: float = 1e-12
) -> npt.NDArray[np.float64]:
    """Ascending eigenvalues in (lower, upper] by Sturm-sequence bisection."""
    lower, upper = _select_range(system, interval)
    if not lower < upper:
        return np.empty(0)
    values = linalg.eigh_tridiagonal(
        system.diagonal,
        system.off_diagonal,
        eigvals_only=True,
        select="v",
        select_range=(lower, upper),
        lapack_driver="stebz",
        tol=tol,
    )
    return np.sort(np.asarray(values, dtype=np.float64))


def eig_sym_tridiag_vectors(
    system: TridiagonalSystem, interval: tuple[float, float], tol: float = 1e-12
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Eigenpairs in (lower, upper]; vectors by inverse iteration, one per column."""
    lower, upper = _select_range(system, interval)
    if not lower < upper:
        return np.empty(0), np.empty((system.size, 0))
    values, vectors = linalg.eigh_tridiagonal(
        system.diagonal,
        system.off_diagonal,
        eigvals_only=False,
        select="v",
        select_range=(lower, upper),
        lapack_driver="stebz",
        tol=tol,
    )
    order = np.argsort(values)
    return np.asarray(values)[order], np.asarray(vectors)[:, order]


def derivative(f: RealFunction, x: float, order: int = 1, h: float | None = None) -> float:
    if h is None:
        power = 1 / 5 if order == 1 else 1 / 6
        h = EPS**power * max(1.0, abs(x))

    match order:
        case 1:
            return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
        case 2:
            return (
                -f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)
            ) / (12 * h * h)
        case _:
            raise InvalidArgumentError(f"unsupported derivative order {order}")


def x_coth_x(x: float) -> float:
    if abs(x) < 1e-3:
        x2 = x * x
        return 1 + x2 / 3 - x2 * x2 / 45 + 2 * x2**3 / 945
    return x / math.tanh(x)


def coth_remainder(w: float) -> float:
    """(w coth w - 1) / w^2, finite at w = 0."""
    if abs(w) < 1e-2:
        w2 = w * w
        return 1 / 3 - w2 / 45 + 2 * w2 * w2 / 945 - w2**3 / 4725
    return (w / math.tanh(w) - 1) / (w * w)


def relative_error(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)
