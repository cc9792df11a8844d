import math

import pytest

from zeromode.densities import PotentialProfile, potential_finite_R, potential_level
from zeromode.errors import InvalidArgumentError, NotApplicableError
from zeromode.spectral import (
    SchrodingerProblem,
    bound_state_count,
    bound_state_count_vs_level,
    bound_states,
    ground_state_overlap,
    mass_gap,
    probe_qR_growth,
    pt_reflection,
    reflection_probe,
)

from .utils import sech

FREE = PotentialProfile("free", lambda r: 0.25, continuum_threshold=0.25)


@pytest.fixture(scope="module")
def odd() -> SchrodingerProblem:
    return SchrodingerProblem(potential_level(0.0), "odd")


@pytest.fixture(scope="module")
def even() -> SchrodingerProblem:
    return SchrodingerProblem(potential_level(0.0), "even")


def test_odd_sector(odd: SchrodingerProblem) -> None:
    spectrum = bound_states(odd)
    assert spectrum.count == 1
    assert abs(spectrum.bound_eigenvalues[0]) < 1e-5
    assert spectrum.continuum_threshold == 0.25
    assert not spectrum.provisional
    assert spectrum.discretization_error_estimate[0] > 0


def test_even_sector(even: SchrodingerProblem) -> None:
    spectrum = bound_states(even)
    assert spectrum.count == 1
    assert abs(spectrum.bound_eigenvalues[0] + 2) < 1e-5


def test_domain_restriction_raises_ground_energy(
    odd: SchrodingerProblem, even: SchrodingerProblem
) -> None:
    assert bound_states(odd).bound_eigenvalues[0] >= bound_states(even).bound_eigenvalues[0]


def test_free_potential() -> None:
    problem = SchrodingerProblem(FREE)
    assert bound_states(problem).count == 0
    gap = mass_gap(problem)
    assert gap.value == 0.25
    assert not gap.has_bound_state


def test_mass_gap(odd: SchrodingerProblem, even: SchrodingerProblem) -> None:
    assert abs(mass_gap(odd).value - 0.25) < 1e-5
    assert abs(mass_gap(even).value - 2.25) < 1e-5
    assert mass_gap(odd).has_bound_state


def test_ground_states(odd: SchrodingerProblem, even: SchrodingerProblem) -> None:
    assert ground_state_overlap(odd, lambda r: math.tanh(r) * math.sqrt(sech(r))) < 1e-4
    assert ground_state_overlap(even, lambda r: sech(r) ** 1.5) < 1e-4


def test_ground_state_self_overlap(odd: SchrodingerProblem) -> None:
    spectrum = bound_states(odd)
    assert ground_state_overlap(odd, spectrum.ground_state, spectrum) < 1e-12


def test_no_ground_state() -> None:
    with pytest.raises(NotApplicableError):
        ground_state_overlap(SchrodingerProblem(FREE), math.exp)


def test_sturm_count_matches(odd: SchrodingerProblem, even: SchrodingerProblem) -> None:
    for problem in (odd, even):
        assert bound_state_count(problem) == bound_states(problem).count


def test_discretization_convergence() -> None:
    coarse = bound_states(SchrodingerProblem(potential_level(0.0), "even", grid_points=3000))
    fine = bound_states(SchrodingerProblem(potential_level(0.0), "even", grid_points=6000))
    change = abs(coarse.bound_eigenvalues[0] - fine.bound_eigenvalues[0])
    assert change < 4 * coarse.discretization_error_estimate[0]


def test_interval_independence() -> None:
    short = bound_states(SchrodingerProblem(potential_level(0.0), "even", r_max=30.0))
    long = bound_states(
        SchrodingerProblem(potential_level(0.0), "even", r_max=40.0, grid_points=8000)
    )
    assert abs(short.bound_eigenvalues[0] - long.bound_eigenvalues[0]) < 1e-6


def test_counts_grow_with_level() -> None:
    counts = bound_state_count_vs_level([0.0, 4.0, 16.0])
    assert counts[0] == 1
    assert counts == sorted(counts)
    assert counts[2] > counts[0]


def test_provisional_threshold() -> None:
    problem = SchrodingerProblem(potential_finite_R(1.0), r_max=10.0, grid_points=200)
    threshold, provisional = problem.threshold()
    assert provisional
    assert threshold == problem.potential.evaluate(10.0)
    assert mass_gap(problem).provisional


@pytest.mark.parametrize(
    "kwargs",
    [{"r_max": 3.0}, {"grid_points": 50}, {"parity": "none"}, {"continuum_margin": 0.0}],
)
def test_invalid_problem(kwargs: dict[str, object]) -> None:
    with pytest.raises(InvalidArgumentError):
        SchrodingerProblem(potential_level(0.0), **kwargs)  # pyright: ignore[reportArgumentType]


def test_from_config() -> None:
    problem = SchrodingerProblem.from_config(potential_level(0.0), "even")
    assert problem.r_max == 30.0
    assert problem.grid_points == 6000


def test_growth_probe() -> None:
    probe = probe_qR_growth(1.0, [5.0, 10.0, 20.0, 40.0])
    assert [r for r, _ in probe.samples] == [5.0, 10.0, 20.0, 40.0]
    assert "open-question" in probe.flags
    assert probe.better_model in ("power", "exponential")


def test_growth_probe_infinite_radius() -> None:
    probe = probe_qR_growth(math.inf, [10.0, 15.0, 20.0, 30.0])
    assert abs(probe.power_exponent) < 1e-6


@pytest.mark.parametrize("well_depth", [2.0, 6.0])
def test_reflectionless(well_depth: float) -> None:
    result = reflection_probe(1.0, well_depth)
    assert result.reflection < 1e-6
    assert not result.unstable
    assert pt_reflection(1.0, well_depth) < 1e-12


def test_free_propagation() -> None:
    assert reflection_probe(1.0, 0.0).reflection < 1e-9
    assert pt_reflection(1.0, 0.0) == 0.0


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("well_depth", [1.0, 3.75])
def test_reflection_against_closed_form(k: float, well_depth: float) -> None:
    result = reflection_probe(k, well_depth)
    assert abs(result.reflection - pt_reflection(k, well_depth)) < 1e-7
    assert result.flux_error < 1e-8


def test_reflection_decreases_with_k() -> None:
    reflections = [reflection_probe(k, 3.75).reflection for k in (0.5, 1.0, 2.0)]
    assert reflections[0] > reflections[1] > reflections[2] > 0


def test_invalid_scattering() -> None:
    with pytest.raises(InvalidArgumentError):
        reflection_probe(0.0, 2.0)
    with pytest.raises(InvalidArgumentError):
        pt_reflection(1.0, -1.0)
