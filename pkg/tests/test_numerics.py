import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zeromode.errors import ConvergenceError, InvalidArgumentError
from zeromode.numerics import (
    QuadratureSpec,
    TridiagonalSystem,
    coth_remainder,
    derivative,
    eig_sym_tridiag,
    eig_sym_tridiag_vectors,
    integrate_interval,
    integrate_line,
    relative_error,
    sturm_count,
    sum_series,
    x_coth_x,
)


def laplacian(size: int) -> TridiagonalSystem:
    return TridiagonalSystem(np.full(size, 2.0), np.full(size - 1, -1.0))


def laplacian_eigenvalues(size: int) -> list[float]:
    return [2 - 2 * math.cos(math.pi * k / (size + 1)) for k in range(1, size + 1)]


def test_integrate_interval() -> None:
    value, error = integrate_interval(math.sin, 0.0, math.pi, QuadratureSpec())
    assert math.isclose(value, 2.0, rel_tol=1e-12)
    assert error < 1e-10


def test_integrate_line_gaussian() -> None:
    value, _ = integrate_line(lambda y: math.exp(-y * y), 1.0, QuadratureSpec())
    assert math.isclose(value, math.sqrt(math.pi), rel_tol=1e-11)


def test_integrate_line_fourier() -> None:
    # the Fourier transform of sech is pi sech(pi p / 2)
    p = 0.8
    value, _ = integrate_line(lambda y: math.cos(p * y) / math.cosh(y), 1.0, QuadratureSpec())
    assert math.isclose(value, math.pi / math.cosh(math.pi * p / 2), rel_tol=1e-10)


def test_integrate_line_kink() -> None:
    value, _ = integrate_line(
        lambda y: math.cos(5 * y) * math.exp(-abs(y)), 1.0, QuadratureSpec()
    )
    assert abs(value - 1 / 13) < 1e-9


def test_quadrature_failure() -> None:
    spec = QuadratureSpec(max_subdivisions=1)
    with pytest.raises(ConvergenceError) as excinfo:
        integrate_interval(lambda y: math.sin(50 * y) ** 2, 0.0, 10.0, spec)
    assert excinfo.value.partial is not None


def test_truncation_radius() -> None:
    spec = QuadratureSpec(abs_tol=1e-13)
    assert math.exp(-2.0 * spec.radius(2.0)) < 1e-13
    assert QuadratureSpec(truncation_radius=7.0).radius(2.0) == 7.0


def test_truncation_radius_doubling() -> None:
    spec = QuadratureSpec()
    radius = spec.radius(2.0)

    def f(y: float) -> float:
        return math.exp(-2 * abs(y)) * math.cos(y)

    short, _ = integrate_line(f, 2.0, QuadratureSpec(truncation_radius=radius))
    long, _ = integrate_line(f, 2.0, QuadratureSpec(truncation_radius=2 * radius))
    assert abs(long - short) < spec.abs_tol
    assert math.isclose(long, 0.8, rel_tol=1e-10)


@pytest.mark.parametrize(
    "kwargs",
    [{"abs_tol": 0.0}, {"rel_tol": -1.0}, {"truncation_radius": 0.0}, {"max_subdivisions": 0}],
)
def test_invalid_quadrature_spec(kwargs: dict[str, float]) -> None:
    with pytest.raises(InvalidArgumentError):
        QuadratureSpec(**kwargs)  # pyright: ignore[reportArgumentType]


def test_geometric_series() -> None:
    value = sum_series(lambda n: 0.5**n, 1e-16, 1000)
    assert math.isclose(value, 1.0, rel_tol=1e-15)


def test_slow_series() -> None:
    value = sum_series(lambda n: 1 / (n * n), 1e-13, 10_000)
    assert math.isclose(value, math.pi**2 / 6, rel_tol=1e-12)


def test_alternating_series() -> None:
    value = sum_series(lambda n: (-1) ** int(n) / n, 1e-13, 10_000)
    assert math.isclose(value, -math.log(2), rel_tol=1e-12)


def test_coth_series() -> None:
    value = sum_series(lambda n: 1 / (1 + n * n), 1e-13, 10_000)
    expected = (math.pi / math.tanh(math.pi) - 1) / 2
    assert math.isclose(value, expected, rel_tol=1e-10)


def test_series_start() -> None:
    value = sum_series(lambda n: 0.5**n, 1e-16, 1000, start=0)
    assert math.isclose(value, 2.0, rel_tol=1e-15)


def test_series_budget() -> None:
    with pytest.raises(ConvergenceError) as excinfo:
        sum_series(lambda n: 0.9**n, 1e-16, 10)
    assert excinfo.value.partial is not None


def test_tridiagonal_eigenvalues() -> None:
    values = eig_sym_tridiag(laplacian(50), (-math.inf, 1.0))
    expected = [v for v in laplacian_eigenvalues(50) if v <= 1.0]
    assert len(values) == len(expected)
    assert np.allclose(values, expected, atol=1e-12)


def test_tridiagonal_vectors() -> None:
    system = laplacian(20)
    values, vectors = eig_sym_tridiag_vectors(system, (-math.inf, 0.5))
    dense = system.dense()
    for j, value in enumerate(values):
        assert np.allclose(dense @ vectors[:, j], value * vectors[:, j], atol=1e-10)


def test_two_by_two() -> None:
    system = TridiagonalSystem(np.zeros(2), np.ones(1))
    values = eig_sym_tridiag(system, (-math.inf, math.inf))
    assert np.allclose(values, [-1.0, 1.0], atol=1e-10)


def test_random_tridiagonal() -> None:
    rng = np.random.default_rng(8)
    system = TridiagonalSystem(rng.normal(size=8), rng.normal(size=7))
    values = eig_sym_tridiag(system, (-math.inf, math.inf))
    assert np.allclose(values, np.linalg.eigvalsh(system.dense()), atol=1e-10)


def test_empty_interval() -> None:
    assert len(eig_sym_tridiag(laplacian(10), (-math.inf, -1.0))) == 0


@given(st.floats(min_value=-0.5, max_value=4.5))
def test_sturm_count(x: float) -> None:
    expected = sum(1 for v in laplacian_eigenvalues(30) if v < x)
    # the count is exact away from the eigenvalues themselves
    if all(abs(v - x) > 1e-9 for v in laplacian_eigenvalues(30)):
        assert sturm_count(laplacian(30), x) == expected


def test_invalid_tridiagonal() -> None:
    with pytest.raises(InvalidArgumentError):
        TridiagonalSystem(np.ones(3), np.ones(3))


def test_gershgorin() -> None:
    assert laplacian(10).gershgorin() == (0.0, 4.0)


@pytest.mark.parametrize("x", [0.3, 1.0, 4.0])
def test_derivative(x: float) -> None:
    assert math.isclose(derivative(math.sin, x), math.cos(x), rel_tol=1e-9, abs_tol=1e-10)
    assert math.isclose(derivative(math.sin, x, 2), -math.sin(x), rel_tol=1e-6, abs_tol=1e-7)


def test_derivative_order() -> None:
    with pytest.raises(InvalidArgumentError):
        derivative(math.sin, 1.0, 3)


@pytest.mark.parametrize("w", [0.0, 5e-3, 0.02, 1.0, 10.0])
def test_coth_remainder(w: float) -> None:
    expected = 1 / 3 if w == 0.0 else (w / math.tanh(w) - 1) / w**2
    assert math.isclose(coth_remainder(w), expected, rel_tol=1e-9)


@pytest.mark.parametrize("x", [0.0, 1e-4, 0.5, 3.0])
def test_x_coth_x(x: float) -> None:
    expected = 1.0 if x == 0.0 else x / math.tanh(x)
    assert math.isclose(x_coth_x(x), expected, rel_tol=1e-14)


def test_relative_error() -> None:
    assert relative_error(1.1, 1.0) == pytest.approx(0.1)
    assert relative_error(0.0, 0.0) == 0.0
