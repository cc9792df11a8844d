"""Jacobi theta functions at purely imaginary modulus tau = iR.

The nome is q = exp(-2 pi R), so theta1 starts 2 q^(1/8) sin(x) and the
even functions are theta3/4(x) = 1 + 2 sum (+-1)^n q^(n^2/2) cos(2nx).
Series are truncated from an a-priori bound on the terms, so the number of
terms is known before summing and the summation order is always increasing n.
"""

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import ConvergenceError, InvalidArgumentError

LOGGER = logging.getLogger(__name__)

DEFAULT_TOL = 1e-17
DEFAULT_MAX_TERMS = 10_000


@dataclass(frozen=True)
class ThetaParams:
    R: float
    tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self) -> None:
        if not (math.isfinite(self.R) and self.R > 0):
            raise InvalidArgumentError(f"theta modulus R must be positive, got {self.R}")
        if not self.tol > 0:
            raise InvalidArgumentError(f"theta tolerance must be positive, got {self.tol}")
        if self.max_terms < 1:
            raise InvalidArgumentError(
                f"theta max_terms must be positive, got {self.max_terms}"
            )

    @property
    def q(self) -> float:
        return math.exp(-2 * math.pi * self.R)


def _series_length(a: float, b: float, params: ThetaParams, power: int = 0) -> int:
    # terms until exp(-a n^2 + b n) * n^power drops below tol * peak
    log_tol = -math.log(params.tol)
    peak = b * b / (4 * a) if b > 0 else 0.0

    n = 0.0
    for _ in range(2):
        budget = log_tol + peak + power * math.log(2 * n + 2)
        n = (b + math.sqrt(b * b + 4 * a * budget)) / (2 * a)

    count = math.ceil(n) + 1
    if count > params.max_terms:
        raise ConvergenceError(
            f"theta series at R={params.R} needs {count} terms, max_terms is {params.max_terms}"
        )
    return count


def _cos_sum(
    coeffs: npt.NDArray[np.float64],
    log_weights: npt.NDArray[np.float64],
    freqs: npt.NDArray[np.float64],
    x: complex,
    phase: float = 0.0,
) -> complex:
    # sum c_n exp(w_n) cos(k_n x + phase), exponentials combined before exp
    arg = 1j * (freqs * x + phase)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = coeffs * (np.exp(log_weights + arg) + np.exp(log_weights - arg)) / 2
    return complex(np.sum(terms))


def _odd_terms(x: complex, params: ThetaParams, power: int = 0) -> npt.NDArray[np.float64]:
    a = math.pi * params.R / 4
    top = _series_length(a, abs(complex(x).imag), params, power)
    return np.arange(1, top + 2, 2, dtype=np.float64)


def _even_terms(x: complex, params: ThetaParams, power: int = 0) -> npt.NDArray[np.float64]:
    a = math.pi * params.R
    top = _series_length(a, 2 * abs(complex(x).imag), params, power)
    return np.arange(1, top + 1, dtype=np.float64)


def theta1(x: complex, params: ThetaParams) -> complex:
    return theta1_derivative(x, params, 0)


def theta1_derivative(x: complex, params: ThetaParams, order: int) -> complex:
    k = _odd_terms(x, params, order)
    signs = np.where(np.arange(len(k)) % 2 == 0, 1.0, -1.0)
    coeffs = 2 * signs * k**order
    return _cos_sum(coeffs, -math.pi * params.R * k**2 / 4, k, x, (order - 1) * math.pi / 2)


def theta1_prime0(params: ThetaParams) -> float:
    # the alternating series cancels badly for small R, the product does not
    return theta1_prime0_product(params)


def _product_length(x: complex, params: ThetaParams) -> int:
    log_tol = -math.log(params.tol)
    count = math.ceil((2 * abs(complex(x).imag) + log_tol) / (2 * math.pi * params.R)) + 1
    if count > params.max_terms:
        raise ConvergenceError(
            f"theta product at R={params.R} needs {count} factors, max_terms is {params.max_terms}"
        )
    return count


def theta1_product(x: complex, params: ThetaParams) -> complex:
    """The triple product 2 q^(1/8) sin x prod (1-q^n)(1-q^n e^(2ix))(1-q^n e^(-2ix))."""
    x = complex(x)
    n = np.arange(1, _product_length(x, params) + 1, dtype=np.float64)
    log_qn = -2 * math.pi * params.R * n
    factors = (
        -np.expm1(log_qn)
        * (1 - np.exp(log_qn + 2j * x))
        * (1 - np.exp(log_qn - 2j * x))
    )
    return 2 * params.q ** (1 / 8) * cmath.sin(x) * complex(np.prod(factors))


def theta1_prime0_product(params: ThetaParams) -> float:
    n = np.arange(1, _product_length(0.0, params) + 1, dtype=np.float64)
    return float(2 * params.q ** (1 / 8) * np.prod(-np.expm1(-2 * math.pi * params.R * n)) ** 3)


def theta3(x: complex, params: ThetaParams) -> complex:
    return theta3_derivative(x, params, 0)


def theta4(x: complex, params: ThetaParams) -> complex:
    n = _even_terms(x, params)
    signs = np.where(n % 2 == 0, 1.0, -1.0)
    return 1 + _cos_sum(2 * signs, -math.pi * params.R * n**2, 2 * n, x)


def theta3_derivative(x: complex, params: ThetaParams, order: int) -> complex:
    """Term-wise derivative of the theta3 series in x (order 0 is theta3 itself)."""
    if order < 0:
        raise InvalidArgumentError(f"derivative order must be >= 0, got {order}")
    n = _even_terms(x, params, order)
    coeffs = 2 * (2 * n) ** order
    value = _cos_sum(coeffs, -math.pi * params.R * n**2, 2 * n, x, order * math.pi / 2)
    return value + 1 if order == 0 else value


def theta3_dz(x: complex, params: ThetaParams) -> complex:
    return theta3_derivative(x, params, 1)


def theta3_product(x: complex, params: ThetaParams) -> complex:
    """prod (1-q^n)(1 + q^(n-1/2) e^(2ix))(1 + q^(n-1/2) e^(-2ix))."""
    x = complex(x)
    n = np.arange(1, _product_length(x, params) + 1, dtype=np.float64)
    log_qn = -2 * math.pi * params.R * n
    log_half = log_qn + math.pi * params.R
    factors = (
        -np.expm1(log_qn)
        * (1 + np.exp(log_half + 2j * x))
        * (1 + np.exp(log_half - 2j * x))
    )
    return complex(np.prod(factors))


QUASI_PERIOD_CANDIDATES = {
    "tau, -q^(1/2)": (1.0, 0.5),
    "tau, -q^(-1/2)": (1.0, -0.5),
    "pi tau, -q^(1/2)": (math.pi, 0.5),
    "pi tau, -q^(-1/2)": (math.pi, -0.5),
}


def quasi_period_residuals(x: complex, params: ThetaParams) -> dict[str, float]:
    """Relative residual of theta1(x + s iR) = -q^e e^(-2ix) theta1(x) per candidate (s, e)."""
    value = theta1(x, params)
    residuals: dict[str, float] = {}

    for name, (shift, exponent) in QUASI_PERIOD_CANDIDATES.items():
        shifted = theta1(x + 1j * shift * params.R, params)
        expected = -(params.q**exponent) * cmath.exp(-2j * x) * value
        scale = max(abs(shifted), abs(expected), 1e-300)
        residuals[name] = abs(shifted - expected) / scale

    return residuals


def resolved_quasi_period(params: ThetaParams, x: complex = 0.3) -> str:
    residuals = quasi_period_residuals(x, params)
    name = min(residuals, key=residuals.__getitem__)
    LOGGER.debug("theta1 quasi-period residuals at R=%s: %s", params.R, residuals)
    return name
