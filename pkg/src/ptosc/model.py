"""Parameter algebra and the closed-form spectrum of the PT-symmetric oscillator.

The Hamiltonian is ``-d^2/dx^2 + x^2 - 2icx + G/(x - ic)^2`` with coupling
``G = alpha**2 - 1/4``.  Bound states are labelled by a quasi-parity
``q = +1/-1`` and an integer ``n >= 0``; their energies are
``E = 4n + 2 - 2 q alpha``.  The branch ``q = +1`` carries the prefactor
``(x - ic)**(-alpha + 1/2)`` and becomes the even parity sector in the
Hermitian limit ``alpha = 1/2, c = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError

__all__ = [
    "ModelParams",
    "LevelIndex",
    "EnergyLevel",
    "Crossing",
    "alpha_from_coupling",
    "coupling_from_alpha",
    "exact_energy",
    "spectrum",
    "crossings",
    "hermitian_limit_node_count",
]


def alpha_from_coupling(G: float) -> float:
    """Return ``alpha = sqrt(G + 1/4)``.

    Raises
    ------
    DomainError
        If ``G <= -1/4`` (supercritical attraction).
    """
    G = float(G)
    if not G > -0.25:
        raise DomainError(f"supercritical attraction: G = {G!r} <= -1/4")
    return math.sqrt(G + 0.25)


def coupling_from_alpha(alpha: float) -> float:
    """Return ``G = alpha**2 - 1/4`` for ``alpha > 0``."""
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    return alpha * alpha - 0.25


@dataclass(frozen=True)
class ModelParams:
    """Potential parameters: core exponent ``alpha`` and contour shift ``c``.

    The coupling ``G`` is derived on access and never stored.
    """

    alpha: float
    c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "c", float(self.c))
        if not self.alpha > 0 or not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha!r}")
        if not self.c >= 0 or not math.isfinite(self.c):
            raise DomainError(f"c must be non-negative and finite, got {self.c!r}")

    @classmethod
    def from_coupling(cls, G: float, c: float = 0.0) -> "ModelParams":
        return cls(alpha_from_coupling(G), c)

    @property
    def G(self) -> float:
        return coupling_from_alpha(self.alpha)

    @property
    def has_core(self) -> bool:
        """True when the centrifugal term is present (``G != 0``)."""
        return self.G != 0.0

    def require_contour(self) -> None:
        """Raise unless the pole at ``x = ic`` is off the real line or absent."""
        if self.has_core and self.c <= 0:
            raise DomainError(
                f"G = {self.G!r} != 0 requires c > 0 (pole at x = ic on the real axis)"
            )


@dataclass(frozen=True, order=True)
class LevelIndex:
    """Quasi-parity ``q`` in {+1, -1} and radial-like index ``n >= 0``."""

    q: int
    n: int

    def __post_init__(self):
        if self.q not in (1, -1) or isinstance(self.q, bool):
            raise DomainError(f"quasi-parity must be +1 or -1, got {self.q!r}")
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "n", int(self.n))

    @property
    def sign(self) -> str:
        return "+" if self.q > 0 else "-"

    def __str__(self) -> str:
        return f"({self.sign},{self.n})"


@dataclass(frozen=True)
class EnergyLevel:
    level: LevelIndex
    E: float


class Crossing(NamedTuple):
    """Integer ``alpha`` at which the listed ``(+, n+k)``/``(-, n)`` pairs meet."""

    alpha: int
    pairs: list


def exact_energy(level: LevelIndex, alpha: float) -> float:
    """Closed-form energy ``4n + 2 - 2 q alpha``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    return 4.0 * level.n + 2.0 - 2.0 * level.q * alpha


def spectrum(alpha: float, k: int) -> list[EnergyLevel]:
    """The ``k`` lowest levels over both quasi-parities, ascending in energy.

    Ties (exact crossings at integer ``alpha``) list ``q = -1`` first.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    # E_{+0} = 2 - 2 alpha is unbounded below, so enumerate generously.
    n_top = k + math.ceil(alpha / 2) + 2
    levels = [
        EnergyLevel(lvl, exact_energy(lvl, alpha))
        for q in (-1, 1)
        for lvl in (LevelIndex(q, n) for n in range(n_top + 1))
    ]
    levels.sort(key=lambda lv: (lv.E, lv.level.q, lv.level.n))
    return levels[:k]


def crossings(alpha_max: float, n_max: int = 3) -> list[Crossing]:
    """Exact level crossings for integer ``alpha = 1 .. floor(alpha_max)``.

    At ``alpha = k`` each ``(+, n + k)`` meets ``(-, n)`` for
    ``n = 0 .. n_max``.
    """
    if not alpha_max > 0:
        raise DomainError(f"alpha_max must be positive, got {alpha_max!r}")
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max!r}")
    out = []
    for k in range(1, math.floor(alpha_max) + 1):
        pairs = []
        for n in range(n_max + 1):
            up, down = LevelIndex(1, n + k), LevelIndex(-1, n)
            assert exact_energy(up, k) == exact_energy(down, k)
            pairs.append((up, down))
        out.append(Crossing(k, pairs))
    return out


def hermitian_limit_node_count(level: LevelIndex) -> int:
    """Real nodes of the ``alpha = 1/2, c = 0`` state: ``2n + (1 - q)/2``."""
    return 2 * level.n + (1 - level.q) // 2
