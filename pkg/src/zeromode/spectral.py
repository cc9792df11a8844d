"""Bound states and scattering of -D^2 + q(r) on the half-line.

The operator is discretised with second-order central differences, odd
parity putting a Dirichlet node at r = 0 and even parity a cell-centred
grid with a reflected ghost node. Eigenvalues from grids of step h and h/2
are combined by Richardson extrapolation.
"""

import cmath
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import integrate

from . import config
from .densities import PotentialProfile, potential_finite_R, potential_level
from .errors import ConvergenceError, DomainError, InvalidArgumentError, NotApplicableError
from .numerics import (
    EPS,
    TridiagonalSystem,
    eig_sym_tridiag,
    eig_sym_tridiag_vectors,
    sturm_count,
)
from .theta import ThetaParams

LOGGER = logging.getLogger(__name__)

type Parity = Literal["odd", "even"]


@dataclass(frozen=True)
class SchrodingerProblem:
    potential: PotentialProfile
    parity: Parity = "odd"
    r_max: float = 30.0
    grid_points: int = 6000
    continuum_margin: float = 1e-3

    def __post_init__(self) -> None:
        if self.parity not in ("odd", "even"):
            raise InvalidArgumentError(f"parity must be odd or even, got {self.parity!r}")
        if not self.r_max > 0:
            raise InvalidArgumentError(f"r_max must be positive, got {self.r_max}")
        if self.grid_points < 100:
            raise InvalidArgumentError(f"grid_points must be at least 100, got {self.grid_points}")
        if not self.continuum_margin > 0:
            raise InvalidArgumentError(
                f"continuum_margin must be positive, got {self.continuum_margin}"
            )

        threshold = self.potential.continuum_threshold
        if threshold is not None:
            tail = abs(self.potential.evaluate(self.r_max) - threshold)
            if tail >= self.continuum_margin:
                raise InvalidArgumentError(
                    f"q(r_max) differs from the threshold by {tail:.3g}; increase r_max"
                )

    @classmethod
    def from_config(
        cls, potential: PotentialProfile, parity: Parity = "odd"
    ) -> "SchrodingerProblem":
        spectral = config.get_config().spectral
        return cls(
            potential,
            parity,
            spectral.r_max,
            spectral.grid_points,
            spectral.continuum_margin,
        )

    def threshold(self) -> tuple[float, bool]:
        """The continuum threshold and whether it is only the provisional q(r_max)."""
        if self.potential.continuum_threshold is not None:
            return self.potential.continuum_threshold, False
        return self.potential.evaluate(self.r_max), True

    def grid(self, refinement: int = 1) -> npt.NDArray[np.float64]:
        h = self.r_max / (self.grid_points * refinement)
        if self.parity == "odd":
            return h * np.arange(1, self.grid_points * refinement, dtype=np.float64)
        return h * (np.arange(1, self.grid_points * refinement + 1, dtype=np.float64) - 0.5)

    def system(self, refinement: int = 1) -> TridiagonalSystem:
        h = self.r_max / (self.grid_points * refinement)
        r = self.grid(refinement)
        diagonal = 2 / h**2 + np.array([self.potential.evaluate(float(x)) for x in r])
        if self.parity == "even":
            # ghost node u(-h/2) = u(h/2)
            diagonal[0] -= 1 / h**2
        off_diagonal = np.full(len(r) - 1, -1 / h**2)
        return TridiagonalSystem(diagonal, off_diagonal)


@dataclass(frozen=True)
class SpectrumResult:
    bound_eigenvalues: tuple[float, ...]
    continuum_threshold: float
    provisional: bool
    discretization_error_estimate: tuple[float, ...]
    near_threshold: tuple[float, ...]
    grid: npt.NDArray[np.float64]
    eigenfunctions: npt.NDArray[np.float64]

    @property
    def count(self) -> int:
        return len(self.bound_eigenvalues)

    def ground_state(self, r: float) -> float:
        if not self.count:
            raise NotApplicableError("no bound state below the continuum threshold")
        return float(np.interp(r, self.grid, self.eigenfunctions[:, 0]))


def bound_states(problem: SchrodingerProblem) -> SpectrumResult:
    threshold, provisional = problem.threshold()
    cutoff = threshold - problem.continuum_margin
    if provisional:
        LOGGER.warning("threshold unknown, using q(r_max)=%s as provisional", threshold)

    coarse = problem.system()
    fine = problem.system(refinement=2)
    LOGGER.debug("discretised on %d and %d points", coarse.size, fine.size)

    coarse_values, vectors = eig_sym_tridiag_vectors(coarse, (-math.inf, cutoff))
    fine_values = eig_sym_tridiag(fine, (-math.inf, cutoff))
    count = min(len(coarse_values), len(fine_values))

    extrapolated = (4 * fine_values[:count] - coarse_values[:count]) / 3
    errors = np.maximum(
        np.abs(fine_values[:count] - coarse_values[:count]) / 3,
        EPS * np.maximum(np.abs(extrapolated), 1.0),
    )
    near = eig_sym_tridiag(fine, (cutoff, threshold))

    # unit L2 norm on the coarse grid, positive near the origin
    h = problem.r_max / problem.grid_points
    vectors = vectors[:, :count] / math.sqrt(h)
    for j in range(count):
        if vectors[np.argmax(np.abs(vectors[:, j])), j] < 0:
            vectors[:, j] = -vectors[:, j]

    for value, error in zip(extrapolated, errors):
        LOGGER.debug("bound state %.12g +- %.2g", value, error)

    return SpectrumResult(
        bound_eigenvalues=tuple(float(v) for v in extrapolated),
        continuum_threshold=threshold,
        provisional=provisional,
        discretization_error_estimate=tuple(float(e) for e in errors),
        near_threshold=tuple(float(v) for v in near),
        grid=problem.grid(),
        eigenfunctions=vectors,
    )


def bound_state_count(problem: SchrodingerProblem) -> int:
    threshold, _ = problem.threshold()
    return sturm_count(problem.system(refinement=2), threshold - problem.continuum_margin)


def ground_state_overlap(
    problem: SchrodingerProblem,
    reference: Callable[[float], float],
    spectrum: SpectrumResult | None = None,
) -> float:
    """L2 distance between the normalized ground state and the normalized reference."""
    if spectrum is None:
        spectrum = bound_states(problem)
    if not spectrum.count:
        raise NotApplicableError("no bound state below the continuum threshold")

    h = problem.r_max / problem.grid_points
    state = spectrum.eigenfunctions[:, 0]
    samples = np.array([reference(float(r)) for r in spectrum.grid])
    norm = math.sqrt(h * float(np.dot(samples, samples)))
    if norm == 0.0:
        raise InvalidArgumentError("reference function vanishes on the grid")
    samples = samples / norm
    if np.dot(samples, state) < 0:
        samples = -samples

    difference = state - samples
    return math.sqrt(h * float(np.dot(difference, difference)))


@dataclass(frozen=True)
class GapResult:
    value: float
    provisional: bool
    has_bound_state: bool


def mass_gap(problem: SchrodingerProblem, spectrum: SpectrumResult | None = None) -> GapResult:
    if spectrum is None:
        spectrum = bound_states(problem)
    threshold = spectrum.continuum_threshold
    if not spectrum.count:
        return GapResult(threshold, spectrum.provisional, False)
    return GapResult(threshold - spectrum.bound_eigenvalues[0], spectrum.provisional, True)


def bound_state_count_vs_level(
    levels: Sequence[float],
    r_max: float | None = None,
    grid_points: int | None = None,
) -> list[int]:
    spectral = config.get_config().spectral
    counts: list[int] = []
    for level in levels:
        problem = SchrodingerProblem(
            potential_level(level),
            "odd",
            r_max if r_max is not None else spectral.level_r_max,
            grid_points if grid_points is not None else spectral.level_grid_points,
            spectral.continuum_margin,
        )
        counts.append(bound_states(problem).count)
        LOGGER.info("level %s: %d bound states", level, counts[-1])
    return counts


@dataclass(frozen=True)
class GrowthProbe:
    R: float
    samples: tuple[tuple[float, float], ...]
    power_exponent: float
    exponential_rate: float
    better_model: Literal["power", "exponential"]
    flags: tuple[str, ...] = ("open-question",)


def probe_qR_growth(
    R: float, r_samples: Sequence[float], tp: ThetaParams | None = None
) -> GrowthProbe:
    potential = potential_finite_R(R, tp)
    samples: list[tuple[float, float]] = []
    for r in r_samples:
        try:
            samples.append((r, potential.evaluate(r)))
        except DomainError as e:
            LOGGER.warning("skipping r=%s: %s", r, e)
            samples.append((r, math.nan))

    usable = [(r, q) for r, q in samples if math.isfinite(q) and q != 0.0 and r > 0]
    if len(usable) < 2:
        raise NotApplicableError("need at least two evaluable samples to fit growth")

    r = np.array([s[0] for s in usable])
    log_q = np.log(np.abs([s[1] for s in usable]))
    power_fit, power_residual = _linear_fit(np.log(r), log_q)
    rate_fit, rate_residual = _linear_fit(r, log_q)

    return GrowthProbe(
        R=R,
        samples=tuple(samples),
        power_exponent=power_fit,
        exponential_rate=rate_fit,
        better_model="power" if power_residual <= rate_residual else "exponential",
    )


def _linear_fit(x: npt.NDArray[np.float64], y: npt.NDArray[np.float64]) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    return float(slope), residual


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    well_depth: float
    reflection: float
    transmission: float
    unstable: bool

    @property
    def flux_error(self) -> float:
        return abs(self.reflection**2 + self.transmission**2 - 1)


def reflection_probe(k: float, well_depth: float, length: float = 20.0) -> ScatteringResult:
    """|R| for -u'' - V0 sech^2(r) u = k^2 u on the whole line, by backward integration."""
    if not k > 0:
        raise InvalidArgumentError(f"k must be positive, got {k}")

    def rhs(r: float, y: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        sech = 2 * math.exp(-abs(r)) / (1 + math.exp(-2 * abs(r)))
        return np.array([y[1], -(k * k + well_depth * sech * sech) * y[0]])

    start = cmath.exp(1j * k * length)
    solution = integrate.solve_ivp(
        rhs,
        (length, -length),
        np.array([start, 1j * k * start]),
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    if not solution.success:
        raise ConvergenceError(f"scattering integration failed: {solution.message}")

    u, du = solution.y[0, -1], solution.y[1, -1]
    phase = cmath.exp(-1j * k * length)
    incoming = (u + du / (1j * k)) / 2 * cmath.exp(1j * k * length)
    reflected = (u - du / (1j * k)) / 2 * phase

    result = ScatteringResult(
        k=k,
        well_depth=well_depth,
        reflection=abs(reflected / incoming),
        transmission=abs(1 / incoming),
        unstable=False,
    )
    if k < 1e-3 or result.flux_error > 1e-6:
        LOGGER.warning("scattering at k=%s is unstable (flux error %.2g)", k, result.flux_error)
        return ScatteringResult(k, well_depth, result.reflection, result.transmission, True)
    return result


def pt_reflection(k: float, well_depth: float) -> float:
    """|sin(pi s)| / sqrt(sinh^2(pi k) + sin^2(pi s)) for V0 = s(s+1)."""
    if not k > 0:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    if not well_depth >= 0:
        raise InvalidArgumentError(f"well depth must be nonnegative, got {well_depth}")
    s = (math.sqrt(1 + 4 * well_depth) - 1) / 2
    sin_s = math.sin(math.pi * s)
    return abs(sin_s) / math.sqrt(math.sinh(math.pi * k) ** 2 + sin_s**2)
