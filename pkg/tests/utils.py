import math
from collections.abc import Callable
from pathlib import Path

import mpmath

type ConfigFactory = Callable[[str], Path]


def write_config(root: Path, text: str) -> None:
    config_path = root / "zeromode" / "config.toml"
    config_path.parent.mkdir(exist_ok=True, parents=True)
    config_path.write_text(text)


def jtheta(n: int, x: complex, R: float, derivative: int = 0) -> complex:
    """theta_n(x | iR) from mpmath, whose nome is exp(i pi tau) = sqrt(q)."""
    with mpmath.workdps(30):
        nome = mpmath.exp(-mpmath.pi * R)
        return complex(mpmath.jtheta(n, mpmath.mpc(x), nome, derivative))


def second_difference(f: Callable[[float], float], x: float, h: float = 1e-3) -> float:
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def sech(r: float) -> float:
    return 1 / math.cosh(r)
