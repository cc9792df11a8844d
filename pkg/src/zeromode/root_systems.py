import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InvalidArgumentError

type Vector = tuple[float, ...]


@dataclass(frozen=True)
class RootSystem:
    """Positive roots in an ambient coordinate space.

    The pairing is the Euclidean form multiplied by `scale`, chosen so that
    long roots have squared length 2.
    """

    rank: int
    positive_roots: tuple[Vector, ...]
    rho: Vector
    dual_coxeter: int
    scale: float = 1.0
    label: str = field(default="", compare=False)

    @property
    def dimension(self) -> int:
        return len(self.rho)

    def pair(self, u: Sequence[complex], v: Sequence[complex]) -> complex:
        if len(u) != len(v):
            raise InvalidArgumentError(
                f"cannot pair vectors of length {len(u)} and {len(v)}"
            )
        return self.scale * sum(a * b for a, b in zip(u, v))

    @cached_property
    def highest_root(self) -> Vector:
        # simply laced: the highest root has the largest height <rho, alpha>
        return max(self.positive_roots, key=lambda root: self.pair(self.rho, root).real)

    def rho_pairings(self) -> tuple[float, ...]:
        return tuple(self.pair(self.rho, root).real for root in self.positive_roots)

    def along(self, coefficient: float, root: Vector | None = None) -> Vector:
        """The spectral parameter `coefficient * root` (highest root by default)."""
        if root is None:
            root = self.highest_root
        return tuple(coefficient * c for c in root)


def build_type_A(n: int) -> RootSystem:
    """The A_{n-1} roots e_i - e_j (i < j) in n coordinates."""
    if n < 2:
        raise InvalidArgumentError(f"type A needs n >= 2, got {n}")

    roots: list[Vector] = []
    for i in range(n):
        for j in range(i + 1, n):
            root = [0.0] * n
            root[i] = 1.0
            root[j] = -1.0
            roots.append(tuple(root))

    rho = tuple(sum(root[k] for root in roots) for k in range(n))
    # <e_i - e_j, e_i - e_j> = 2 already under the Euclidean form
    scale = 1.0
    highest = tuple(1.0 if k == 0 else -1.0 if k == n - 1 else 0.0 for k in range(n))
    height = scale * sum(a * b for a, b in zip(rho, highest))
    dual_coxeter = 1 + round(height) // 2

    return RootSystem(
        rank=n - 1,
        positive_roots=tuple(roots),
        rho=rho,
        dual_coxeter=dual_coxeter,
        scale=scale,
        label=f"A{n - 1}",
    )


def check_invariants(rs: RootSystem) -> list[str]:
    failures: list[str] = []

    lengths = [rs.pair(root, root).real for root in rs.positive_roots]
    if not math.isclose(max(lengths), 2.0, abs_tol=1e-12):
        failures.append("long-root-norm")

    summed = tuple(sum(root[k] for root in rs.positive_roots) for k in range(rs.dimension))
    if any(not math.isclose(a, b, abs_tol=1e-12) for a, b in zip(summed, rs.rho)):
        failures.append("rho-sum")

    height = rs.pair(rs.rho, rs.highest_root).real
    if not math.isclose(1 + height / 2, rs.dual_coxeter, abs_tol=1e-12):
        failures.append("dual-coxeter")

    pairings = rs.rho_pairings()
    if any(p <= 0 or p > height + 1e-12 for p in pairings):
        failures.append("rho-pairing")

    return failures


def haar_density(rs: RootSystem, h: Sequence[float]) -> float:
    """prod over positive roots of |sinh alpha(h) / alpha(h)|^2."""
    density = 1.0
    for root in rs.positive_roots:
        value = rs.pair(root, h).real
        if value == 0.0:
            continue
        density *= (math.sinh(value) / value) ** 2
    return density
