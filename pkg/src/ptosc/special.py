"""Complex-argument special functions and the analytic eigenfunctions.

All functions accept NumPy arrays for the spatial/complex argument and
return arrays of the same shape (or a Python complex for scalar input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BranchPointError,
    DomainError,
    NonConvergenceError,
    NormalizationError,
    PoleError,
    TruncationError,
)
from .model import LevelIndex, ModelParams

__all__ = [
    "QuadratureSpec",
    "WaveFunctionSpec",
    "RootSet",
    "laguerre_eval",
    "laguerre_coefficients",
    "laguerre_factorization_residual",
    "kummer_series",
    "wavefunction_eval",
    "normalization_constant",
    "c_product",
    "laguerre_roots",
    "nodal_zeros",
]

_INT_TOL = 1e-12
KUMMER_MAX_TERMS = 10_000


def _as_output(value, scalar_input):
    return complex(value) if scalar_input else value


def laguerre_eval(n: int, beta: float, z):
    """Generalized Laguerre polynomial ``L_n^{(beta)}(z)``, standard normalization.

    Uses the three-term recurrence, which is polynomial in ``beta`` and so
    stays valid for ``beta <= -1`` (including negative integers).
    """
    if int(n) != n or n < 0:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {n!r}")
    n = int(n)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    prev = np.ones_like(z)
    if n == 0:
        return _as_output(prev, scalar)
    cur = beta + 1.0 - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + beta - z) * cur - (k + beta) * prev) / (k + 1)
    return _as_output(cur, scalar)


def laguerre_coefficients(n: int, beta: float) -> np.ndarray:
    """Power-series coefficients ``a_0 .. a_n`` of ``L_n^{(beta)}(z)``.

    Built downward from ``a_n = (-1)^n / n!`` using
    ``a_{k-1} = -k (beta + k) a_k / (n - k + 1)``.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {n!r}")
    n = int(n)
    a = np.zeros(n + 1)
    a[n] = (-1.0) ** n / math.factorial(n)
    for k in range(n, 0, -1):
        a[k - 1] = -k * (beta + k) * a[k] / (n - k + 1)
    return a


def laguerre_factorization_residual(n: int, z) -> float:
    """``|L_{n+1}^{(-1)}(z) + z L_n^{(1)}(z) / (n + 1)|``, zero in exact arithmetic."""
    lhs = laguerre_eval(n + 1, -1.0, z)
    rhs = z * laguerre_eval(n, 1.0, z) / (n + 1)
    return float(np.max(np.abs(np.asarray(lhs + rhs))))


def _nonpositive_integer(v) -> int | None:
    """Return ``-m`` if ``v`` is within tolerance of a nonpositive integer."""
    v = complex(v)
    if abs(v.imag) > _INT_TOL:
        return None
    r = round(v.real)
    if r <= 0 and abs(v.real - r) <= _INT_TOL:
        return int(r)
    return None


def kummer_series(a, b, z, tol: float = 1e-14) -> complex:
    """Confluent hypergeometric ``1F1(a; b; z)`` by direct summation.

    Terminates exactly when ``a`` is a nonpositive integer; otherwise stops
    after three consecutive terms below ``tol * |sum|``.

    Raises
    ------
    PoleError
        If ``b`` is a nonpositive integer.
    NonConvergenceError
        If 10 000 terms do not reach the tolerance.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if _nonpositive_integer(b) is not None:
        raise PoleError(f"1F1 undefined: b = {b!r} is a nonpositive integer")
    a, b, z = complex(a), complex(b), complex(z)
    stop = _nonpositive_integer(a)
    term = 1.0 + 0j
    total = term
    small = 0
    for k in range(KUMMER_MAX_TERMS):
        if stop is not None and k == -stop:
            return total
        term = term * (a + k) * z / ((b + k) * (k + 1))
        total += term
        if abs(term) < tol * abs(total):
            small += 1
            if small == 3:
                return total
        else:
            small = 0
    raise NonConvergenceError(
        f"1F1({a}, {b}; {z}) did not converge in {KUMMER_MAX_TERMS} terms"
    )


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration window ``[-half_width, half_width]`` and rule."""

    half_width: float = 12.0
    points: int = 4000
    rule: str = "trapezoid"

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError(f"half_width must be positive, got {self.half_width!r}")
        if self.points < 64:
            raise DomainError(f"need at least 64 quadrature points, got {self.points}")
        if self.rule not in ("trapezoid", "gauss-legendre"):
            raise DomainError(f"unknown quadrature rule {self.rule!r}")

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        L, N = self.half_width, self.points
        if self.rule == "trapezoid":
            x = np.linspace(-L, L, N)
            w = np.full(N, x[1] - x[0])
            w[0] = w[-1] = 0.5 * (x[1] - x[0])
        else:
            t, w = np.polynomial.legendre.leggauss(N)
            x, w = L * t, L * w
        return x, w

    def integrate(self, f_values: np.ndarray, x: np.ndarray, w: np.ndarray) -> complex:
        """Weighted sum after checking the integrand has decayed at both edges."""
        mag = np.abs(f_values)
        peak = mag.max()
        edge = max(mag[0], mag[-1])
        if peak == 0 or edge > 1e-16 * peak:
            raise TruncationError(
                f"integrand not decayed at |x| = {self.half_width}: "
                f"edge/peak = {edge / peak if peak else float('nan'):.3e}"
            )
        return complex(np.dot(w, f_values))


@dataclass(frozen=True)
class WaveFunctionSpec:
    """One analytic eigenfunction: level, parameters and normalization mode."""

    level: LevelIndex
    params: ModelParams
    normalization: str = "raw"
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.normalization not in ("raw", "c-normalized"):
            raise DomainError(f"unknown normalization {self.normalization!r}")
        self.params.require_contour()

    @property
    def exponent(self) -> float:
        """Power of ``(x - ic)`` in front of the Gaussian."""
        return -self.level.q * self.params.alpha + 0.5

    @property
    def laguerre_index(self) -> float:
        return -self.level.q * self.params.alpha

    def raw(self) -> "WaveFunctionSpec":
        if self.normalization == "raw":
            return self
        return WaveFunctionSpec(self.level, self.params, "raw", self.quadrature)


def _power(r: np.ndarray, s: float) -> np.ndarray:
    si = round(s)
    if abs(s - si) < 1e-14:
        return r ** int(si)
    # principal branch: r stays in the open lower half-plane for c > 0
    return np.power(r, s)


def _raw_eval(spec: WaveFunctionSpec, x: np.ndarray, envelope: bool) -> np.ndarray:
    c = spec.params.c
    r = x - 1j * c
    s = spec.exponent
    if (s < 0 or abs(s - round(s)) > 1e-14) and np.any(r == 0):
        raise BranchPointError("wavefunction evaluated at the branch point x = ic")
    # exp(-r^2/2) = exp(-(x^2 - c^2)/2) * exp(icx)
    gauss = np.exp(1j * c * x)
    if envelope:
        gauss = gauss * np.exp(-(x * x - c * c) / 2)
    poly = laguerre_eval(spec.level.n, spec.laguerre_index, r * r)
    return _power(r, s) * gauss * poly


def wavefunction_eval(spec: WaveFunctionSpec, x, envelope: bool = True):
    """Evaluate ``(x - ic)^(1/2 - q alpha) exp(-(x - ic)^2/2) L_n^{(-q alpha)}((x - ic)^2)``.

    ``envelope=False`` drops the real factor ``exp(-(x^2 - c^2)/2)`` so that
    large ``|x|`` can be probed without underflow.  ``c-normalized`` specs
    are scaled by :func:`normalization_constant`.
    """
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    val = _raw_eval(spec, xa, envelope)
    if spec.normalization == "c-normalized":
        val = val * normalization_constant(spec)
    return _as_output(val, scalar)


def c_product(f: WaveFunctionSpec, g: WaveFunctionSpec, quad: QuadratureSpec | None = None) -> complex:
    """Unconjugated bilinear form ``int f(x) g(x) dx`` along the real line."""
    if f.params.c != g.params.c:
        raise DomainError("c-product needs both states on the same contour (equal c)")
    quad = quad or f.quadrature
    x, w = quad.nodes_weights()
    fv = wavefunction_eval(f, x)
    gv = fv if g == f else wavefunction_eval(g, x)
    return quad.integrate(fv * gv, x, w)


def normalization_constant(spec: WaveFunctionSpec) -> complex:
    """Constant making the c-norm one, with positive real part times the leading coefficient.

    Raises
    ------
    NormalizationError
        When the c-norm nearly vanishes (self-orthogonal state at a crossing).
    """
    raw = spec.raw()
    quad = spec.quadrature
    x, w = quad.nodes_weights()
    v = _raw_eval(raw, x, envelope=True)
    norm = quad.integrate(v * v, x, w)
    l2 = float(np.dot(w, np.abs(v) ** 2))
    if abs(norm) < 1e-10 * l2:
        raise NormalizationError(
            f"c-norm of {spec.level} at alpha={spec.params.alpha} nearly vanishes: "
            f"|<phi,phi>_c| = {abs(norm):.3e}, <phi,phi> = {l2:.3e}"
        )
    const = 1.0 / np.sqrt(norm)
    lead = (-1.0) ** spec.level.n / math.factorial(spec.level.n)
    p = const * lead
    if p.real < 0 or (abs(p.real) <= 1e-14 * abs(p) and p.imag < 0):
        const = -const
    return complex(const)


def _refine_root(n, beta, z0, steps=20):
    z = complex(z0)
    for _ in range(steps):
        f = laguerre_eval(n, beta, z)
        df = -laguerre_eval(n - 1, beta + 1.0, z)
        if df == 0:
            break
        dz = f / df
        z -= dz
        if abs(dz) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def laguerre_roots(n: int, beta: float) -> list[complex]:
    """All roots of ``L_n^{(beta)}`` from a balanced companion matrix plus Newton polishing."""
    if int(n) != n or n < 0:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return []
    coef = laguerre_coefficients(n, beta)
    monic = coef[:-1] / coef[-1]
    comp = np.zeros((n, n))
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic
    balanced, _ = scipy.linalg.matrix_balance(comp)
    roots = [_refine_root(n, beta, z) for z in np.linalg.eigvals(balanced)]
    scale = np.max(np.abs(coef))
    for z in roots:
        if abs(laguerre_eval(n, beta, z)) > 1e-10 * scale * max(1.0, abs(z)) ** n:
            raise NonConvergenceError(f"root refinement failed for L_{n}^({beta}) near {z}")
    return sorted(roots, key=lambda z: (round(z.real, 12), z.imag))


@dataclass(frozen=True)
class RootSet:
    """Zeros of one eigenfunction in the ``z = (x - ic)^2`` and ``x`` planes."""

    poly_roots: list
    x_zeros: list
    prefactor_zero: complex | None = None

    @property
    def all_x_zeros(self) -> list:
        extra = [] if self.prefactor_zero is None else [self.prefactor_zero]
        return list(self.x_zeros) + extra


def nodal_zeros(spec: WaveFunctionSpec) -> RootSet:
    """Map the Laguerre roots to ``x = ic +/- sqrt(z)``; mark ``x = ic`` when ``q = -1``."""
    c = spec.params.c
    zr = laguerre_roots(spec.level.n, spec.laguerre_index)
    xz = []
    for z in zr:
        s = np.sqrt(complex(z))
        xz.extend([1j * c - s, 1j * c + s])
    xz.sort(key=lambda w: (round(w.real, 12), w.imag))
    pref = 1j * c if spec.level.q == -1 else None
    return RootSet(zr, xz, pref)
