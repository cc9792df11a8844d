import os
import tomllib
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, PositiveFloat, PositiveInt, model_validator

from .numerics import QuadratureSpec
from .theta import DEFAULT_MAX_TERMS, DEFAULT_TOL, ThetaParams

type OutputFormat = Literal["csv", "json"]


class ThetaConfig(BaseModel):
    tol: PositiveFloat = DEFAULT_TOL
    max_terms: PositiveInt = DEFAULT_MAX_TERMS

    def params(self, R: float) -> ThetaParams:
        return ThetaParams(R, self.tol, self.max_terms)


class QuadratureConfig(BaseModel):
    abs_tol: PositiveFloat = 1e-13
    rel_tol: PositiveFloat = 1e-11
    max_subdivisions: PositiveInt = 2048

    def spec(self) -> QuadratureSpec:
        return QuadratureSpec(
            abs_tol=self.abs_tol,
            rel_tol=self.rel_tol,
            max_subdivisions=self.max_subdivisions,
        )


class SpectralConfig(BaseModel):
    r_max: PositiveFloat = 30.0
    grid_points: PositiveInt = 6000
    continuum_margin: PositiveFloat = 1e-3
    # level-l wells widen with l, so level scans use a longer interval
    level_r_max: PositiveFloat = 60.0
    level_grid_points: PositiveInt = 3000

    @model_validator(mode="after")
    def check_grids(self) -> "SpectralConfig":
        for name in ("grid_points", "level_grid_points"):
            if getattr(self, name) < 100:
                raise ValueError(f"{name} must be at least 100")
        return self


class ScanConfig(BaseModel):
    workers: PositiveInt = 4


class OutputConfig(BaseModel):
    format: OutputFormat = "csv"


class Config(BaseModel):
    theta: ThetaConfig = ThetaConfig()
    quadrature: QuadratureConfig = QuadratureConfig()
    spectral: SpectralConfig = SpectralConfig()
    scan: ScanConfig = ScanConfig()
    output: OutputConfig = OutputConfig()


def get_config_path() -> Path:
    try:
        xdg_config_home = Path(os.environ["XDG_CONFIG_HOME"])
    except KeyError:
        xdg_config_home = Path.home() / ".config"
    return xdg_config_home / "zeromode" / "config.toml"


@lru_cache(1)
def get_config() -> Config:
    config_path = get_config_path()
    try:
        with config_path.open("rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError:
        return Config()
    else:
        return Config.model_validate(data)


def theta_params(R: float) -> ThetaParams:
    return get_config().theta.params(R)


def quadrature_spec() -> QuadratureSpec:
    return get_config().quadrature.spec()
