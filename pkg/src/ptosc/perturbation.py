"""Weak-core perturbation theory around the shifted harmonic oscillator.

The core ``G/(x - ic)^2`` is treated as ``G * W(x)`` on top of the
``alpha = 1/2`` problem.  Matrix elements use the unconjugated c-product
along the shifted contour, where the ``1/r^2`` integrals are finite.
First- and second-order Rayleigh-Schroedinger coefficients are compared
with Taylor coefficients of the exact ``4n + 2 - 2q sqrt(G + 1/4)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CancellationError, DomainError
from .model import LevelIndex, ModelParams, alpha_from_coupling, exact_energy
from .special import QuadratureSpec, WaveFunctionSpec, _raw_eval

__all__ = [
    "CoreDecomposition",
    "RSResult",
    "PerturbativeComparison",
    "w_components",
    "reparameterize",
    "unperturbed_level",
    "unperturbed_energy",
    "rs_first_order",
    "rs_second_order",
    "exact_vs_perturbative",
    "first_order_oracle",
    "second_order_oracle",
]


def _check_c(c):
    if not c > 0:
        raise DomainError(f"screening c must be positive, got {c!r}")


def w_components(x, c: float):
    """The three pieces of ``1/(x - ic)^2``: even real ``1/(x^2+c^2)``,
    odd imaginary ``2icx/(x^2+c^2)^2`` and even real ``-2c^2/(x^2+c^2)^2``.
    """
    _check_c(c)
    x = np.asarray(x, dtype=float)
    d = x * x + c * c
    w1 = 1.0 / d + 0j
    w2 = 2j * c * x / (d * d)
    w3 = -2.0 * c * c / (d * d) + 0j
    if w1.ndim == 0:
        return complex(w1), complex(w2), complex(w3)
    return w1, w2, w3


@dataclass(frozen=True)
class CoreDecomposition:
    """``mu = g = 1/c^2`` and ``lambda = -1/c^4`` for the rational form of the even part."""

    c: float
    mu: float
    g: float
    lam: float

    def w1(self, x):
        """``mu + lambda x^2 / (1 + g x^2)``, identical to ``1/(x^2 + c^2)``."""
        x = np.asarray(x, dtype=float)
        return self.mu + self.lam * x * x / (1.0 + self.g * x * x)


def reparameterize(c: float) -> CoreDecomposition:
    _check_c(c)
    inv = 1.0 / (c * c)
    return CoreDecomposition(c=float(c), mu=inv, g=inv, lam=-inv * inv)


def unperturbed_level(m: int) -> LevelIndex:
    """``m``-th state of the ``alpha = 1/2`` ladder: parities interleave ``+,-,+,-``."""
    n, odd = divmod(m, 2)
    return LevelIndex(-1 if odd else 1, n)


def unperturbed_energy(level: LevelIndex) -> float:
    return exact_energy(level, 0.5)


def _ladder_position(level: LevelIndex) -> int:
    return 2 * level.n + (1 - level.q) // 2


def first_order_oracle(level: LevelIndex) -> float:
    """``dE/dG`` at ``G = 0``: ``-q / alpha`` with ``alpha = 1/2``."""
    return -2.0 * level.q


def second_order_oracle(level: LevelIndex) -> float:
    """``(1/2) d^2E/dG^2`` at ``G = 0``."""
    return 2.0 * level.q


def _default_quad(max_index: int) -> QuadratureSpec:
    # wide enough that the highest ladder state has decayed past double precision
    L = max(12.0, math.sqrt(2 * max_index + 1) + 6.0)
    return QuadratureSpec(half_width=L, points=max(4000, math.ceil(4000 * L / 12.0)))


def _states(c, count, quad):
    params = ModelParams(0.5, c)
    x, w = quad.nodes_weights()
    phi = np.array(
        [_raw_eval(WaveFunctionSpec(unperturbed_level(m), params), x, True) for m in range(count)]
    )
    return x, w, phi


# |<phi,phi>| / <phi,phi>_c beyond this leaves fewer than ~6 digits
MAX_CANCELLATION = 1e10


def _check_cancellation(p, cnorm, w, c):
    ratio = float(np.dot(w, np.abs(p) ** 2)) / abs(cnorm)
    if ratio > MAX_CANCELLATION:
        raise CancellationError(
            f"basis too large for c = {c}: the highest state loses a factor {ratio:.1e} "
            "to cancellation; reduce basis_size or c"
        )


def rs_first_order(level: LevelIndex, c: float, quad: QuadratureSpec | None = None) -> float:
    """First-order coefficient ``<phi, W phi>_c / <phi, phi>_c`` per unit ``G``."""
    _check_c(c)
    quad = quad or QuadratureSpec()
    m = _ladder_position(level)
    x, w, phi = _states(c, m + 1, quad)
    p = phi[m]
    W = 1.0 / (x - 1j * c) ** 2
    num = quad.integrate(p * W * p, x, w)
    den = quad.integrate(p * p, x, w)
    _check_cancellation(p, den, w, c)
    return float((num / den).real)


@dataclass(frozen=True)
class RSResult:
    """One Rayleigh-Schroedinger coefficient.

    For second order, ``value`` is the sum over the lowest ``basis_size``
    ladder states, ``delta`` its change from ``basis_size // 2``, and
    ``extrapolated`` an Aitken estimate of the infinite-basis limit from
    partial sums at roughly a quarter, half and all of the basis (``None`` when the partial
    sums do not contract).
    """

    level: LevelIndex
    order: int
    value: float
    basis_size: int | None
    quadrature: QuadratureSpec
    delta: float | None = None
    extrapolated: float | None = None
    partial_sums: tuple = ()


def _aitken(s0, s1, s2):
    d1, d2 = s1 - s0, s2 - s1
    if d2 == 0:
        return s2
    ratio = d1 / d2
    if not ratio > 1:
        return None
    return s2 + d2 / (ratio - 1)


def rs_second_order(
    level: LevelIndex,
    c: float,
    basis_size: int = 40,
    quad: QuadratureSpec | None = None,
) -> RSResult:
    """Second-order coefficient per unit ``G**2`` over a truncated ladder basis."""
    _check_c(c)
    if basis_size < 10:
        raise DomainError(f"basis_size must be at least 10, got {basis_size}")
    me = _ladder_position(level)
    if me >= basis_size:
        raise DomainError(f"level {level} is not inside a basis of {basis_size} states")
    quad = quad or _default_quad(basis_size - 1)
    x, w, phi = _states(c, basis_size, quad)
    W = 1.0 / (x - 1j * c) ** 2
    ref = phi[me]
    norms = np.array([quad.integrate(p * p, x, w) for p in phi])
    _check_cancellation(phi[-1], norms[-1], w, c)
    elems = np.array([quad.integrate(p * W * ref, x, w) for p in phi])
    E0 = np.array([unperturbed_energy(unperturbed_level(m)) for m in range(basis_size)])
    terms = np.zeros(basis_size, dtype=complex)
    for m in range(basis_size):
        if m == me:
            continue
        gap = E0[me] - E0[m]
        if gap == 0:
            raise DomainError(f"degenerate unperturbed pair {level} / {unperturbed_level(m)}")
        terms[m] = elems[m] ** 2 / (gap * norms[m] * norms[me])

    def partial(M):
        return float(terms[:M].sum().real)

    # even sizes keep both quasi-parities equally represented in every partial sum
    top = basis_size - basis_size % 2
    sizes = (2 * (top // 8), 2 * (top // 4), basis_size)
    sums = tuple(partial(M) for M in sizes)
    extrap = _aitken(sums[0], sums[1], partial(top)) if sizes[0] > me else None
    return RSResult(
        level=level,
        order=2,
        value=sums[2],
        basis_size=basis_size,
        quadrature=quad,
        delta=sums[2] - partial(basis_size // 2),
        extrapolated=extrap,
        partial_sums=tuple(zip(sizes, sums)),
    )


@dataclass(frozen=True)
class PerturbativeComparison:
    level: LevelIndex
    G: float
    E_exact: float
    E_series: float
    residual: float
    e1: float
    e2: float


def exact_vs_perturbative(
    level: LevelIndex,
    G: float,
    c: float = 1.0,
    basis_size: int = 40,
    extrapolate: bool = True,
) -> PerturbativeComparison:
    """Compare the exact energy with ``E0 + G e1 + G^2 e2``.

    ``extrapolate`` selects the Aitken-corrected second-order coefficient
    when available, otherwise the raw truncated sum.
    """
    if abs(G) > 0.1:
        raise DomainError(f"|G| = {abs(G)} outside the perturbative regime |G| <= 0.1")
    e1 = rs_first_order(level, c)
    r2 = rs_second_order(level, c, basis_size)
    e2 = r2.extrapolated if extrapolate and r2.extrapolated is not None else r2.value
    E0 = unperturbed_energy(level)
    E_exact = exact_energy(level, alpha_from_coupling(G))
    series = E0 + G * e1 + G * G * e2
    return PerturbativeComparison(level, float(G), E_exact, series, abs(E_exact - series), e1, e2)
