import logging
import math
import sys
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, TextIO

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from . import cartan_geometry, config, densities, positivity, spectral, transforms
from .config import OutputFormat
from .errors import InvalidArgumentError, InvariantViolationError, NotApplicableError
from .numerics import relative_error
from .report import Table, report_schema
from .root_systems import build_type_A
from .spectral import Parity
from .theta import (
    ThetaParams,
    quasi_period_residuals,
    theta1,
    theta1_prime0,
    theta1_product,
    theta3,
    theta4,
)
from .verify import SuiteName, run_suite

LOGGER = logging.getLogger(__name__)

type Subcommand = Literal[
    "theta",
    "cfun",
    "fourier-reciprocal",
    "fourier-kernel",
    "termwise",
    "poisson",
    "density",
    "potential",
    "invert",
    "positivity",
    "geometry",
    "spectrum",
    "probe-qr",
    "scatter",
    "verify",
    "schema",
]
type MetricName = Literal["identity", "harish-chandra", "stenzel"]

# smallest theta modulus the CLI accepts
MIN_RADIUS = 0.02


class Scan(BaseModel):
    """min:max:steps[:log], inclusive at both ends."""

    minimum: float
    maximum: float
    steps: PositiveInt
    log: bool = False

    @model_validator(mode="after")
    def check_range(self) -> "Scan":
        if not self.minimum < self.maximum:
            raise ValueError(f"scan needs min < max, got {self.minimum}:{self.maximum}")
        if self.log and self.minimum <= 0:
            raise ValueError("a logarithmic scan needs a positive minimum")
        return self

    @classmethod
    def parse(cls, text: str) -> "Scan":
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ValueError(f"expected min:max:steps[:log], got {text!r}")
        return cls(
            minimum=float(parts[0]),
            maximum=float(parts[1]),
            steps=int(parts[2]),
            log=len(parts) == 4,
        )

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.minimum]
        spacing = np.geomspace if self.log else np.linspace
        return [float(v) for v in spacing(self.minimum, self.maximum, self.steps)]


class Parameters(BaseModel):
    model_config = ConfigDict(extra="forbid")

    R: PositiveFloat | None = None
    R_scan: Scan | None = None
    level: NonNegativeFloat | None = None
    rank: PositiveInt | None = None
    lam: list[float] | None = None
    x: float | None = None
    x0: float | None = None
    p: float | None = None
    n: PositiveInt | None = None
    alpha: PositiveFloat | None = None
    r: list[float] | None = None
    r_max: PositiveFloat | None = None
    grid_points: PositiveInt | None = None
    tol: PositiveFloat | None = None
    max_terms: PositiveInt | None = None
    parity: Parity | None = None
    suite: SuiteName | Literal["all"] | None = None
    metric: MetricName | None = None
    k: list[PositiveFloat] | None = None
    depth: NonNegativeFloat | None = None

    @field_validator("R_scan", mode="before")
    @classmethod
    def parse_scan(cls, value: object) -> object:
        if isinstance(value, str):
            return Scan.parse(value)
        return value

    @model_validator(mode="after")
    def check_radius(self) -> "Parameters":
        smallest = self.R_scan.minimum if self.R_scan is not None else self.R
        if smallest is not None and smallest < MIN_RADIUS:
            raise ValueError(f"R must be at least {MIN_RADIUS}, got {smallest}")
        return self


@dataclass(frozen=True)
class Command:
    handler: Callable[[Parameters], Table]
    parameters: frozenset[str]
    help: str


class RunConfig(BaseModel):
    subcommand: Subcommand
    parameters: Parameters = Parameters()
    output_format: OutputFormat = "csv"
    output_path: Path | None = None

    @model_validator(mode="after")
    def check_parameters(self) -> "RunConfig":
        given = self.parameters.model_fields_set
        allowed = (
            COMMANDS[self.subcommand].parameters if self.subcommand != "schema" else frozenset()
        )
        unexpected = given - allowed
        if unexpected:
            raise ValueError(f"{self.subcommand} does not take {', '.join(sorted(unexpected))}")
        if {"R", "R_scan"} <= given:
            raise ValueError("R and R_scan are mutually exclusive")
        return self


def _radii(params: Parameters, default: float | None = None) -> list[float]:
    if params.R_scan is not None:
        return params.R_scan.values()
    if params.R is not None:
        return [params.R]
    if default is None:
        raise InvalidArgumentError("either --R or --R-scan is required")
    return [default]


def _scan(
    command: str,
    params: Parameters,
    evaluate: Callable[[float], Table],
    default: float | None = None,
) -> Table:
    """Evaluate every radius of the run on a worker pool, joined in scan order."""
    radii = _radii(params, default)
    workers = min(config.get_config().scan.workers, len(radii))
    LOGGER.debug("evaluating %d radii on %d workers", len(radii), workers)

    table = Table(command)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(evaluate, radii):
            table.extend(part)
    return table


def _theta_params(params: Parameters, R: float) -> ThetaParams:
    theta = config.get_config().theta
    return ThetaParams(
        R,
        params.tol if params.tol is not None else theta.tol,
        params.max_terms if params.max_terms is not None else theta.max_terms,
    )


def _samples(params: Parameters) -> list[float]:
    return params.r if params.r is not None else [0.5, 1.0, 2.0]


def _comparison(
    table: Table, quantity: str, result: transforms.Comparison, **inputs: float
) -> None:
    table.add(
        quantity,
        **inputs,
        quadrature=result.quadrature,
        closed_form=result.closed_form,
        relative_error=result.relative_error,
        error_estimate=result.error_estimate,
        printed=result.printed,
    )


def _complex(table: Table, quantity: str, value: complex, **inputs: float) -> None:
    table.add(quantity, **inputs, value=value.real, imaginary=value.imag)


def theta_command(params: Parameters) -> Table:
    x = params.x if params.x is not None else 0.5

    def at(R: float) -> Table:
        tp = _theta_params(params, R)
        table = Table("theta")
        table.add("theta1", R=R, x=x, value=theta1(x, tp).real)
        table.add("theta1-product", R=R, x=x, value=theta1_product(x, tp).real)
        table.add("theta3", R=R, x=x, value=theta3(x, tp).real)
        table.add("theta4", R=R, x=x, value=theta4(x, tp).real)
        table.add("theta1-prime0", R=R, x=x, value=theta1_prime0(tp))
        for candidate, residual in quasi_period_residuals(x, tp).items():
            table.add("quasi-period-residual", R=R, x=x, value=residual, candidate=candidate)
        return table

    return _scan("theta", params, at)


def cfun_command(params: Parameters) -> Table:
    rank = params.rank if params.rank is not None else 1
    rs = build_type_A(rank + 1)
    level = params.level if params.level is not None else 0.0

    def at(R: float) -> Table:
        model = transforms.ModelParams(level, R)
        table = Table("cfun")
        for lam0 in params.lam if params.lam is not None else [1.0]:
            lam = transforms.SpectralParameter.along(rs, lam0)
            inputs = {"rank": rank, "level": level, "R": R, "lambda": lam0}
            _complex(table, "hc-c-function", transforms.hc_c_function(rs, lam), **inputs)
            affine = transforms.affine_c_function(rs, model, lam)
            _complex(table, "affine-c-function", affine, **inputs)

            lhs, rhs = transforms.hc_transform_gamma_form(rs, model, lam)
            table.add(
                "gamma-form",
                **inputs,
                value=lhs.real,
                closed_form=rhs.real,
                relative_error=relative_error(lhs, rhs),
            )

            if rank == 1:
                closed = transforms.level_transform(level, lam0)
                table.add("level-transform", **inputs, value=closed)
            if model.finite_radius:
                tp = _theta_params(params, R)
                finite = transforms.finite_R_transform(rs, model, lam, tp)
                _complex(table, "finite-radius-transform", finite, **inputs)
                table.add(
                    "theta-deformed-transform",
                    **inputs,
                    value=transforms.theta_deformed_transform(rs, model, lam, tp),
                )
        return table

    return _scan("cfun", params, at, math.inf)


def fourier_reciprocal_command(params: Parameters) -> Table:
    x0 = params.x0 if params.x0 is not None else math.pi / 2
    p = params.p if params.p is not None else 0.5
    spec = config.quadrature_spec()

    def at(R: float) -> Table:
        result = transforms.reciprocal_theta_fourier(x0, p, _theta_params(params, R), spec)
        table = Table("fourier-reciprocal")
        _comparison(table, "reciprocal-theta-fourier", result, x0=x0, R=R, p=p)
        return table

    return _scan("fourier-reciprocal", params, at)


def fourier_kernel_command(params: Parameters) -> Table:
    p = params.p if params.p is not None else 0.7
    spec = config.quadrature_spec()

    def at(R: float) -> Table:
        result = transforms.radial_kernel_fourier(p, _theta_params(params, R), spec)
        table = Table("fourier-kernel")
        _comparison(table, "radial-kernel-fourier", result, R=R, p=p)
        return table

    return _scan("fourier-kernel", params, at)


def termwise_command(params: Parameters) -> Table:
    x0 = params.x0 if params.x0 is not None else math.pi / 2
    n = params.n if params.n is not None else 1
    p = params.p if params.p is not None else 0.5
    spec = config.quadrature_spec()

    def at(R: float) -> Table:
        result = transforms.termwise_ft(x0, n, p, _theta_params(params, R), spec)
        table = Table("termwise")
        _comparison(table, "termwise-fourier", result, x0=x0, n=n, R=R, p=p)
        return table

    return _scan("termwise", params, at)


def poisson_command(params: Parameters) -> Table:
    alpha = params.alpha if params.alpha is not None else 1.0
    tol = params.tol if params.tol is not None else 1e-13
    max_terms = params.max_terms if params.max_terms is not None else 10_000

    lhs, rhs = transforms.poisson_identity(alpha, tol, max_terms)
    table = Table("poisson")
    table.add("poisson", alpha=alpha, lhs=lhs, rhs=rhs, difference=abs(lhs - rhs))
    return table


def _level(params: Parameters, R: float) -> float:
    level = params.level if params.level is not None else 0.0
    if math.isfinite(R) and level != 0.0:
        raise NotApplicableError("finite-radius densities are only defined at level 0")
    return level


def density_command(params: Parameters) -> Table:
    def at(R: float) -> Table:
        level = _level(params, R)
        if math.isfinite(R):
            density = densities.delta_finite_R(R, _theta_params(params, R))
        else:
            density = densities.delta_level(level)

        table = Table("density")
        for r in _samples(params):
            table.add(
                density.label,
                level=level,
                R=R,
                r=r,
                value=density.evaluate(r),
                normalized=density.normalized(r),
            )
        return table

    return _scan("density", params, at, math.inf)


def potential_command(params: Parameters) -> Table:
    def at(R: float) -> Table:
        level = _level(params, R)
        if math.isfinite(R):
            potential = densities.potential_finite_R(R, _theta_params(params, R))
        else:
            potential = densities.potential_level(level)

        table = Table("potential")
        for r in _samples(params):
            table.add(
                potential.label,
                level=level,
                R=R,
                r=r,
                value=potential.evaluate(r),
                continuum_threshold=potential.continuum_threshold,
            )
        return table

    return _scan("potential", params, at, math.inf)


def invert_command(params: Parameters) -> Table:
    level = params.level if params.level is not None else 0.0

    def at(R: float) -> Table:
        tp = _theta_params(params, R) if math.isfinite(R) else None
        table = Table("invert")
        for r in _samples(params):
            result = densities.invert_transform_rank1(level, R, r, tp)
            table.add(
                "inverse-transform",
                level=level,
                R=R,
                r=r,
                phi=result.phi,
                radial_density=result.radial_density,
                error_estimate=result.error_estimate,
            )
        return table

    return _scan("invert", params, at, math.inf)


def positivity_command(params: Parameters) -> Table:
    grid_points = params.grid_points if params.grid_points is not None else 200

    def at(R: float) -> Table:
        report = positivity.positivity_check(R, grid_points, _theta_params(params, R))
        table = Table("positivity")
        table.add(
            "positivity",
            R=R,
            grid_points=grid_points,
            grid_passed=report.grid_passed,
            worst_margin=report.worst_margin,
            worst_z=report.worst_z,
            condition=report.condition,
            large_R_bound=report.large_R_bound,
            slope_bound_minimum=report.slope_bound_minimum,
            critical_angle=report.critical_angle,
            critical_angle_exceeds_2piR=report.critical_angle_exceeds_2piR,
            small_R_max=report.small_R_max,
            closed_majorant=report.closed_majorant,
            small_R_bound=report.small_R_bound,
        )
        if report.counterexample is not None:
            R_fail, z_fail = report.counterexample
            table.violation = InvariantViolationError(
                f"slope inequality fails at R={R_fail}, z={z_fail}",
                {"R": R_fail, "z": z_fail, "margin": report.worst_margin},
            )
        return table

    return _scan("positivity", params, at)


def geometry_command(params: Parameters) -> Table:
    metric = cartan_geometry.PROFILES[params.metric or "harish-chandra"]
    geometry = cartan_geometry.radial_geometry(metric)

    table = Table("geometry")
    for r in _samples(params):
        table.add(
            "radial-geometry",
            metric=metric.label,
            r=r,
            rho=geometry.rho(r),
            delta=geometry.delta(r),
            alpha=geometry.alpha(r),
            gamma=geometry.gamma(r),
            gamma_printed=geometry.gamma_printed(r),
            gamma_discrepancy=geometry.gamma_discrepancy(r),
            constant_residual=geometry.constant_residual(r),
        )
    if metric is cartan_geometry.HARISH_CHANDRA:
        table.add("constant-shift", metric=metric.label, gamma=cartan_geometry.gk_constant_shift())
    if metric is cartan_geometry.STENZEL:
        for r in _samples(params):
            block, profile = cartan_geometry.stenzel_block_identity(r)
            table.add("stenzel-block", metric=metric.label, r=r, value=block, closed_form=profile)
    return table


def spectrum_command(params: Parameters) -> Table:
    spectral_config = config.get_config().spectral
    parity: Parity = params.parity or "odd"

    def at(R: float) -> Table:
        level = _level(params, R)
        if math.isfinite(R):
            potential = densities.potential_finite_R(R, _theta_params(params, R))
        else:
            potential = densities.potential_level(level)

        problem = spectral.SchrodingerProblem(
            potential,
            parity,
            params.r_max if params.r_max is not None else spectral_config.r_max,
            params.grid_points if params.grid_points is not None else spectral_config.grid_points,
            spectral_config.continuum_margin,
        )
        result = spectral.bound_states(problem)

        table = Table("spectrum")
        inputs = {"level": level, "R": R, "parity": parity}
        for index, (value, error) in enumerate(
            zip(result.bound_eigenvalues, result.discretization_error_estimate)
        ):
            table.add("bound-state", **inputs, index=index, value=value, error_estimate=error)
        for value in result.near_threshold:
            table.add("near-threshold", **inputs, value=value)

        gap = spectral.mass_gap(problem, result)
        table.add(
            "mass-gap",
            **inputs,
            value=gap.value,
            provisional=gap.provisional,
            has_bound_state=gap.has_bound_state,
        )
        table.add(
            "continuum-threshold",
            **inputs,
            value=result.continuum_threshold,
            provisional=result.provisional,
        )
        return table

    return _scan("spectrum", params, at, math.inf)


def probe_qr_command(params: Parameters) -> Table:
    samples = params.r if params.r is not None else [1.0, 2.0, 4.0, 8.0]

    def at(R: float) -> Table:
        tp = _theta_params(params, R) if math.isfinite(R) else None
        probe = spectral.probe_qR_growth(R, samples, tp)

        table = Table("probe-qr")
        for r, value in probe.samples:
            table.add("finite-radius-potential", R=R, r=r, value=value)
        table.add(
            "growth-fit",
            R=R,
            power_exponent=probe.power_exponent,
            exponential_rate=probe.exponential_rate,
            better_model=probe.better_model,
            flags=",".join(probe.flags),
        )
        table.metadata["flags"] = ",".join(probe.flags)
        return table

    return _scan("probe-qr", params, at)


def scatter_command(params: Parameters) -> Table:
    depth = params.depth if params.depth is not None else 6.0

    table = Table("scatter")
    for k in params.k if params.k is not None else [0.5, 1.0, 2.0]:
        result = spectral.reflection_probe(k, depth)
        table.add(
            "reflection",
            k=k,
            well_depth=depth,
            reflection=result.reflection,
            transmission=result.transmission,
            flux_error=result.flux_error,
            unstable=result.unstable,
            closed_form=spectral.pt_reflection(k, depth),
        )
    return table


def verify_command(params: Parameters) -> Table:
    table = Table("verify")
    for check in run_suite(params.suite or "all", params.tol):
        table.add(
            "check",
            suite=check.suite,
            name=check.name,
            error=check.error,
            tolerance=check.tolerance,
            passed=check.passed,
        )
        if not check.passed and table.violation is None:
            table.violation = InvariantViolationError(
                f"{check.suite}/{check.name} failed: error {check.error:.3g} "
                f"exceeds {check.tolerance:.3g}",
                {"error": check.error, "tolerance": check.tolerance},
            )
    return table


# equation tag of each quantity, labels match on their leading words
EQUATIONS: dict[str, str] = {
    "theta1": "(4.1)",
    "theta1-product": "(4.2)",
    "theta1-prime0": "(4.12)",
    "quasi-period-residual": "(4.3)",
    "hc-c-function": "(2.14)",
    "affine-c-function": "(2.13)",
    "gamma-form": "(2.16)",
    "finite-radius-transform": "(4.6)",
    "theta-deformed-transform": "(4.7)",
    "reciprocal-theta-fourier": "(4.12)",
    "radial-kernel-fourier": "(4.22)",
    "termwise-fourier": "(4.19)",
    "poisson": "(4.36)",
    "delta-infinity": "(3.7)",
    "delta-level": "(3.16)",
    "potential-level": "(3.16)",
    "delta-finite-R": "(4.41)",
    "potential-finite-R": "(4.42)",
    "inverse-transform": "(4.20)",
    "positivity": "(4.28)",
    "radial-geometry": "(A.3)",
    "constant-shift": "(A.9)",
    "stenzel-block": "(A.14)",
    "bound-state": "(3.10)",
    "finite-radius-potential": "(4.42)",
}

_THETA = frozenset({"tol", "max_terms"})
_RADIUS = frozenset({"R", "R_scan"}) | _THETA

COMMANDS: dict[Subcommand, Command] = {
    "theta": Command(theta_command, _RADIUS | {"x"}, "theta functions at one point"),
    "cfun": Command(
        cfun_command,
        _RADIUS | {"level", "rank", "lam"},
        "c-functions and their deformations",
    ),
    "fourier-reciprocal": Command(
        fourier_reciprocal_command,
        _RADIUS | {"x0", "p"},
        "Fourier transform of 1/theta1 on a vertical line",
    ),
    "fourier-kernel": Command(
        fourier_kernel_command,
        _RADIUS | {"p"},
        "Fourier transform of the finite-radius kernel",
    ),
    "termwise": Command(
        termwise_command,
        _RADIUS | {"x0", "n", "p"},
        "Fourier transform of one product factor of 1/theta1",
    ),
    "poisson": Command(poisson_command, _THETA | {"alpha"}, "the Poisson summation identity"),
    "density": Command(density_command, _RADIUS | {"level", "r"}, "radial densities"),
    "potential": Command(potential_command, _RADIUS | {"level", "r"}, "radial potentials"),
    "invert": Command(invert_command, _RADIUS | {"level", "r"}, "rank-one inverse transform"),
    "positivity": Command(
        positivity_command,
        _RADIUS | {"grid_points"},
        "positivity of the finite-radius density",
    ),
    "geometry": Command(
        geometry_command, frozenset({"metric", "r"}), "radial geometry of a metric profile"
    ),
    "spectrum": Command(
        spectrum_command,
        _RADIUS | {"level", "parity", "r_max", "grid_points"},
        "bound states and mass gap",
    ),
    "probe-qr": Command(probe_qr_command, _RADIUS | {"r"}, "growth of the finite-radius potential"),
    "scatter": Command(scatter_command, frozenset({"k", "depth"}), "reflection off a sech^2 well"),
    "verify": Command(verify_command, frozenset({"suite", "tol"}), "run the acceptance suite"),
}


@contextmanager
def _open_output(run_config: RunConfig, stream: TextIO | None) -> Iterator[TextIO]:
    if run_config.output_path is None:
        yield stream if stream is not None else sys.stdout
    else:
        with run_config.output_path.open("w", newline="") as f:
            yield f


def run(run_config: RunConfig, stream: TextIO | None = None) -> int:
    if run_config.subcommand == "schema":
        with _open_output(run_config, stream) as out:
            out.write(report_schema())
            out.write("\n")
        return 0

    LOGGER.info("running %s", run_config.subcommand)
    table = COMMANDS[run_config.subcommand].handler(run_config.parameters)
    table.tag(EQUATIONS)
    table.metadata.update(
        (name, str(value))
        for name, value in run_config.parameters.model_dump(exclude_unset=True).items()
    )

    with _open_output(run_config, stream) as out:
        table.write(out, run_config.output_format)

    if table.violation is not None:
        raise table.violation
    return 0
