"""The acceptance suite: every identity the library rests on, checked numerically."""

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from typing import Literal, cast

import numpy as np

from . import cartan_geometry, config, densities, positivity, spectral, transforms
from .densities import PotentialProfile
from .numerics import relative_error
from .root_systems import build_type_A
from .theta import theta1, theta1_product

LOGGER = logging.getLogger(__name__)

type SuiteName = Literal[
    "theta", "lemmas", "transforms", "densities", "positivity", "geometry", "spectrum"
]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.error) and self.error <= self.tolerance


def _check(suite: str, name: str, error: float, tolerance: float, tol: float | None) -> Check:
    return Check(suite, name, float(error), tolerance if tol is None else tol)


def _invariant(suite: str, name: str, violation: float) -> Check:
    # sign and ordering checks pass only at zero violation, whatever --tol says
    return Check(suite, name, float(violation), 0.0)


def theta_suite(tol: float | None) -> Iterator[Check]:
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        R = float(math.exp(rng.uniform(math.log(0.05), math.log(10.0))))
        x = complex(rng.uniform(0.5, math.pi - 0.5), rng.uniform(-0.5, 0.5))
        tp = config.theta_params(R)
        worst = max(worst, relative_error(theta1(x, tp), theta1_product(x, tp)))
    yield _check("theta", "series-vs-product", worst, 1e-10, tol)

    report = transforms.quasi_period_check(config.theta_params(1.0))
    yield _check("theta", "quasi-period", report.residuals[report.resolved], 1e-9, tol)
    yield _check("theta", "zero-lattice", report.zero_lattice_max, 1e-9, tol)

    tp = config.theta_params(1.0)
    antiperiod = abs(theta1(0.3 + math.pi, tp) + theta1(0.3, tp))
    yield _check("theta", "pi-antiperiod", antiperiod, 1e-10, tol)


def lemmas_suite(tol: float | None) -> Iterator[Check]:
    spec = config.quadrature_spec()

    worst = 0.0
    for x0 in (0.5, math.pi / 2, 2.5):
        for R in (0.5, 1.0, 2.0):
            for p in (-1.0, 0.5, 2.0):
                result = transforms.reciprocal_theta_fourier(x0, p, config.theta_params(R), spec)
                worst = max(worst, result.relative_error)
    yield _check("lemmas", "reciprocal-theta-fourier", worst, 1e-8, tol)

    worst = 0.0
    for R in (0.5, 1.0, 2.0):
        for p in (0.0, 0.7, 1.5):
            result = transforms.radial_kernel_fourier(p, config.theta_params(R), spec)
            worst = max(worst, result.relative_error)
    yield _check("lemmas", "radial-kernel-fourier", worst, 1e-8, tol)

    worst = 0.0
    for x0, n, R, p in ((math.pi / 2, 1, 1.0, 0.5), (1.0, 2, 0.5, 1.2), (2.0, 1, 2.0, -0.7)):
        result = transforms.termwise_ft(x0, n, p, config.theta_params(R), spec)
        worst = max(worst, result.relative_error)
    yield _check("lemmas", "termwise-fourier", worst, 1e-8, tol)

    worst = max(abs(lhs - rhs) for lhs, rhs in map(transforms.poisson_identity, (0.3, 1.0, 3.0)))
    yield _check("lemmas", "poisson", worst, 1e-10, tol)
    _, limit = transforms.poisson_identity(1e-5)
    yield _check("lemmas", "poisson-zero-limit", abs(limit - math.pi**2 / 6), 1e-6, tol)


def transforms_suite(tol: float | None) -> Iterator[Check]:
    a1 = build_type_A(2)

    lam = transforms.SpectralParameter.along(a1, 1.0)
    classical = transforms.hc_c_function(a1, lam)
    affine = transforms.affine_c_function(a1, transforms.ModelParams(level=1e4), lam)
    yield _check("transforms", "classical-limit", relative_error(affine, classical), 1e-3, tol)

    worst = 0.0
    params = transforms.ModelParams(level=0.0, radius=50.0)
    for lam0 in (0.3, 0.8, 2.0):
        lam = transforms.SpectralParameter.along(a1, lam0)
        finite = transforms.finite_R_transform(a1, params, lam, config.theta_params(50.0))
        worst = max(worst, relative_error(finite, transforms.affine_c_function(a1, params, lam)))
    yield _check("transforms", "infinite-radius-limit", worst, 1e-3, tol)

    worst = 0.0
    for level in (0.0, 2.0):
        for lam0 in (0.7, 1.3):
            lam = transforms.SpectralParameter.along(a1, lam0)
            lhs, rhs = transforms.hc_transform_gamma_form(a1, transforms.ModelParams(level), lam)
            worst = max(worst, relative_error(lhs, rhs))
    yield _check("transforms", "gamma-form", worst, 1e-8, tol)

    gram = transforms.gram_matrix(
        a1,
        transforms.ModelParams(0.0, 1.0),
        config.theta_params(1.0),
        [0.0, 0.4, 0.9, 1.5, 2.2],
    )
    lowest = float(np.min(np.linalg.eigvalsh(gram)))
    yield _check("transforms", "positive-definite", max(0.0, -lowest), 1e-9, tol)


def _potential_identity_error(level: float) -> float:
    density = densities.delta_level(level)
    potential = densities.potential_level(level)
    grid = np.linspace(0.1, 10.0, 200)
    return max(
        abs(potential.evaluate(float(r)) - density.ground_state_potential(float(r))) for r in grid
    )


def densities_suite(tol: float | None) -> Iterator[Check]:
    worst = max(_potential_identity_error(level) for level in (0.0, 1.0, 2.0, 4.0))
    yield _check("densities", "level-potential-identity", worst, 1e-6, tol)

    potential = densities.potential_level(0.0)
    reduction = max(
        abs(potential.evaluate(float(r)) - (0.25 - 3.75 / math.cosh(r) ** 2))
        for r in np.linspace(0.0, 20.0, 201)
    )
    yield _check("densities", "poschl-teller-reduction", reduction, 1e-12, tol)

    lowest = math.inf
    for R in (0.05, 0.2, 1.0, 5.0):
        density = densities.delta_finite_R(R, config.theta_params(R))
        lowest = min(lowest, min(density.evaluate(float(r)) for r in np.linspace(0.0, 20.0, 1000)))
    yield _invariant("densities", "finite-radius-nonnegative", max(0.0, -lowest))

    infinite = densities.delta_infinity()
    finite = densities.delta_finite_R(50.0, config.theta_params(50.0))
    sup = max(
        abs(finite.normalized(float(r)) - infinite.normalized(float(r)))
        for r in np.linspace(0.1, 5.0, 200)
    )
    yield _check("densities", "finite-radius-limit", sup, 5e-4, tol)

    yield _check("densities", "inversion-infinite-radius", _inversion_error(math.inf), 1e-6, tol)
    yield _check("densities", "inversion-finite-radius", _inversion_error(1.0), 1e-5, tol)


def _inversion_error(R: float) -> float:
    if math.isinf(R):
        reference = lambda r: densities.phi_l_unnormalized(0.0, r / 2)  # noqa: E731
        extract = lambda result: result.phi  # noqa: E731
        tp = None
    else:
        tp = config.theta_params(R)
        density = densities.delta_finite_R(R, tp)
        reference = density.evaluate
        extract = lambda result: result.radial_density  # noqa: E731

    ratios = [
        extract(densities.invert_transform_rank1(0.0, R, r, tp)) / reference(r)
        for r in (1.0, 0.5, 2.0)
    ]
    return max(abs(ratio / ratios[0] - 1) for ratio in ratios[1:])


def positivity_suite(tol: float | None) -> Iterator[Check]:
    worst_margin = math.inf
    large_R_violation = 0.0
    for R in np.geomspace(0.05, 5.0, 50):
        R = float(R)
        report = positivity.positivity_check(R, 200, config.theta_params(R))
        worst_margin = min(worst_margin, report.worst_margin)
        if R >= 0.06:
            large_R_violation = max(
                large_R_violation, report.large_R_bound - report.slope_bound_minimum
            )
    yield _invariant("positivity", "slope-inequality", max(0.0, -worst_margin))
    yield _invariant("positivity", "large-R-bound", max(0.0, large_R_violation))

    small_R_violation = 0.0
    for R in (0.05, 0.08, 0.1):
        report = positivity.positivity_check(R, 20, config.theta_params(R))
        small_R_violation = max(small_R_violation, report.small_R_max - report.small_R_bound)
    yield _invariant("positivity", "small-R-bound", max(0.0, small_R_violation))


def geometry_suite(tol: float | None) -> Iterator[Check]:
    samples = np.linspace(0.01, 10.0, 50)

    harish_chandra = cartan_geometry.radial_geometry(cartan_geometry.HARISH_CHANDRA)
    error = max(
        relative_error(harish_chandra.rho(float(r)), (math.sinh(r / 2) / (r / 2)) ** 2)
        for r in samples
    )
    yield _check("geometry", "harish-chandra-rho", error, 1e-12, tol)

    stenzel = cartan_geometry.radial_geometry(cartan_geometry.STENZEL)
    error = max(
        relative_error(stenzel.rho(float(r)), 2 * math.tanh(r / 2) / r) for r in samples
    )
    yield _check("geometry", "stenzel-rho", error, 1e-12, tol)

    deviation = max(
        cartan_geometry.alpha_check(metric, [0.5, 1.0, 3.0, 7.0]).max_deviation
        for metric in (cartan_geometry.HARISH_CHANDRA, cartan_geometry.STENZEL)
    )
    yield _check("geometry", "alpha-is-one", deviation, 1e-10, tol)

    shift = cartan_geometry.gk_constant_shift()
    yield _check("geometry", "constant-shift", abs(shift - 0.25), 1e-12, tol)


def _poschl_teller() -> PotentialProfile:
    return densities.potential_level(0.0)


def spectrum_suite(tol: float | None) -> Iterator[Check]:
    odd = spectral.SchrodingerProblem.from_config(_poschl_teller(), "odd")
    odd_spectrum = spectral.bound_states(odd)
    yield _check(
        "spectrum", "odd-ground-state", abs(odd_spectrum.bound_eigenvalues[0]), 1e-5, tol
    )
    gap = spectral.mass_gap(odd, odd_spectrum)
    yield _check("spectrum", "mass-gap", abs(gap.value - 0.25), 1e-5, tol)

    vacuum = lambda r: math.sqrt(densities.delta_infinity().evaluate(r))  # noqa: E731
    distance = spectral.ground_state_overlap(odd, vacuum, odd_spectrum)
    yield _check("spectrum", "vacuum-overlap", distance, 1e-4, tol)

    even = spectral.SchrodingerProblem.from_config(_poschl_teller(), "even")
    even_ground = spectral.bound_states(even).bound_eigenvalues[0]
    yield _check("spectrum", "even-ground-state", abs(even_ground + 2), 1e-5, tol)

    counts = spectral.bound_state_count_vs_level([0.0, 4.0, 16.0])
    monotone = all(a <= b for a, b in zip(counts, counts[1:]))
    grows = counts[0] == 1 and counts[-1] > counts[0]
    error = 0.0 if monotone and grows else 1.0
    yield _invariant("spectrum", "bound-states-grow-with-level", error)


SUITES: dict[SuiteName, Callable[[float | None], Iterator[Check]]] = {
    "theta": theta_suite,
    "lemmas": lemmas_suite,
    "transforms": transforms_suite,
    "densities": densities_suite,
    "positivity": positivity_suite,
    "geometry": geometry_suite,
    "spectrum": spectrum_suite,
}


def run_suite(name: SuiteName | Literal["all"], tol: float | None = None) -> list[Check]:
    names = list(SUITES) if name == "all" else [cast(SuiteName, name)]
    checks: list[Check] = []
    for suite in names:
        LOGGER.info("running %s suite", suite)
        for check in SUITES[suite](tol):
            LOGGER.debug(
                "%s/%s: error %.3g (tolerance %.3g)",
                check.suite,
                check.name,
                check.error,
                check.tolerance,
            )
            checks.append(check)
    return checks
