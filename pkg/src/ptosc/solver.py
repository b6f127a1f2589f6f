"""Finite-difference route to the spectrum of the complex-shifted oscillator.

The Hamiltonian is discretized on ``N`` interior nodes of ``[-L, L]`` with
Dirichlet ends.  Eigenvalues come from a dense non-Hermitian solve; the
eigenvectors of the low-lying candidates are recovered by banded inverse
iteration, the eigenvalue is refined by a Rayleigh quotient, and the pair
is filtered on residual and boundary weight.
Accepted eigenvalues approximate ``E + c**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError, InsufficientResolutionError, SingularityError
from .model import LevelIndex, ModelParams, spectrum

__all__ = [
    "Discretization",
    "EigenSolveResult",
    "MatchReport",
    "ConvergenceReport",
    "potential_eval",
    "build_hamiltonian",
    "solve_spectrum",
    "match_exact",
    "richardson_order",
    "convergence_order",
    "RESIDUAL_TOL",
    "BOUNDARY_TOL",
]

RESIDUAL_TOL = 1e-8
BOUNDARY_TOL = 1e-6

# (offset, coefficient) pairs of -d^2/dx^2 times h^2
_STENCILS = {
    "fd2": ((0, 2.0), (1, -1.0)),
    "fd4": ((0, 30.0 / 12), (1, -16.0 / 12), (2, 1.0 / 12)),
}


@dataclass(frozen=True)
class Discretization:
    half_width: float = 10.0
    points: int = 1500
    scheme: str = "fd4"

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError(f"half_width must be positive, got {self.half_width!r}")
        if self.points < 16:
            raise DomainError(f"need at least 16 grid points, got {self.points}")
        if self.scheme not in _STENCILS:
            raise DomainError(f"unknown scheme {self.scheme!r}; use fd2 or fd4")

    @classmethod
    def default_for(cls, params: ModelParams, **overrides) -> "Discretization":
        """Default grid; the window widens to 12 for ``alpha >= 3``."""
        kw = {"half_width": 12.0 if params.alpha >= 3 else 10.0}
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.step * np.arange(1, self.points + 1)


def potential_eval(params: ModelParams, x):
    """``x^2 - 2icx + G/(x - ic)^2``."""
    xa = np.asarray(x, dtype=float)
    r = xa - 1j * params.c
    G = params.G
    if G != 0 and np.any(r == 0):
        raise SingularityError("core term G/(x - ic)^2 evaluated at its pole")
    with np.errstate(divide="ignore", invalid="ignore"):
        core = G / (r * r) if G != 0 else np.zeros_like(r)
    v = xa * xa - 2j * params.c * xa + core
    return complex(v) if np.ndim(x) == 0 else v


def _bands(params: ModelParams, disc: Discretization) -> np.ndarray:
    """Hamiltonian in LAPACK banded storage with bandwidth 2 (rows: +2..-2)."""
    params.require_contour()
    N, h2 = disc.points, disc.step**2
    ab = np.zeros((5, N), dtype=complex)
    # stencils are truncated at the ends: nodes beyond the grid count as zero
    for off, coef in _STENCILS[disc.scheme]:
        if off == 0:
            ab[2] = coef / h2
        else:
            ab[2 - off, off:] = coef / h2
            ab[2 + off, :-off] = coef / h2
    ab[2] += potential_eval(params, disc.nodes)
    return ab


def _dense(ab: np.ndarray) -> np.ndarray:
    N = ab.shape[1]
    M = np.zeros((N, N), dtype=complex)
    for row in range(5):
        off = 2 - row
        if off >= 0:
            M[np.arange(N - off), np.arange(off, N)] = ab[row, off:]
        else:
            M[np.arange(-off, N), np.arange(N + off)] = ab[row, : N + off]
    return M


def build_hamiltonian(params: ModelParams, disc: Discretization) -> np.ndarray:
    """Dense complex-symmetric ``N x N`` matrix of the discretized Hamiltonian."""
    return _dense(_bands(params, disc))


@dataclass
class EigenSolveResult:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    boundary_weights: np.ndarray
    grid: Discretization
    params: ModelParams
    eigenvectors: np.ndarray = field(repr=False)
    rejected: list = field(default_factory=list, repr=False)

    @property
    def shifted(self) -> np.ndarray:
        """``Re(lambda) - c^2``, directly comparable to exact energies."""
        return self.eigenvalues.real - self.params.c**2


def _boundary_weight(v: np.ndarray, x: np.ndarray, L: float) -> float:
    p = np.abs(v) ** 2
    return float(p[np.abs(x) > 0.9 * L].sum() / p.sum())


def _inverse_iteration(ab, lam, rng_vec, iters=3):
    shift = lam + 1e-10 * (1.0 + abs(lam))
    shifted = ab.copy()
    shifted[2] -= shift
    v = rng_vec
    for _ in range(iters):
        v = scipy.linalg.solve_banded((2, 2), shifted, v, check_finite=False)
        v = v / np.linalg.norm(v)
    return v


def _banded_matvec(ab, v):
    N = v.size
    out = ab[2] * v
    for row, off in ((0, 2), (1, 1)):
        out[: N - off] += ab[row, off:] * v[off:]
    for row, off in ((3, 1), (4, 2)):
        out[off:] += ab[row, : N - off] * v[: N - off]
    return out


def solve_spectrum(params: ModelParams, disc: Discretization | None = None, k: int = 8) -> EigenSolveResult:
    """Return the ``k`` accepted eigenvalues of smallest real part.

    Raises
    ------
    InsufficientResolutionError
        If fewer than ``k`` candidates pass the residual and boundary filters.
    """
    disc = disc or Discretization.default_for(params)
    if k < 1 or k > disc.points // 4:
        raise DomainError(f"k = {k} outside 1..N/4 = {disc.points // 4}")
    ab = _bands(params, disc)
    lam = scipy.linalg.eigvals(_dense(ab), check_finite=False, overwrite_a=True)
    lam = lam[np.lexsort((lam.imag, lam.real))]
    x = disc.nodes
    start = np.random.default_rng(0).standard_normal(disc.points) + 0j
    accepted, rejected = [], []
    for cand in lam[: max(4 * k, k + 16)]:
        v = _inverse_iteration(ab, cand, start)
        hv = _banded_matvec(ab, v)
        # near-defective pairs (integer alpha) leave the dense eigenvalue off by ~sqrt(eps)
        cand = complex(np.vdot(v, hv))
        res = float(np.linalg.norm(hv - cand * v))
        bw = _boundary_weight(v, x, disc.half_width)
        info = {"lambda": complex(cand), "residual": res, "boundary_weight": bw}
        if res < RESIDUAL_TOL and bw < BOUNDARY_TOL:
            accepted.append((cand, res, bw, v))
            if len(accepted) == k:
                break
        else:
            rejected.append(info)
    if len(accepted) < k:
        raise InsufficientResolutionError(
            f"only {len(accepted)} of {k} eigenpairs passed the filters "
            f"(L={disc.half_width}, N={disc.points}, {disc.scheme})",
            [{"lambda": complex(a[0]), "residual": a[1], "boundary_weight": a[2]} for a in accepted]
            + rejected,
        )
    return EigenSolveResult(
        eigenvalues=np.array([a[0] for a in accepted]),
        residuals=np.array([a[1] for a in accepted]),
        boundary_weights=np.array([a[2] for a in accepted]),
        grid=disc,
        params=params,
        eigenvectors=np.column_stack([a[3] for a in accepted]),
        rejected=rejected,
    )


@dataclass
class MatchReport:
    """Pairing of numeric values with the closed-form levels.

    ``pairs`` holds ``(numeric_index, LevelIndex, E_exact, abs_error)``
    sorted by numeric index.
    """

    pairs: list
    max_error: float
    unmatched_numeric: list
    unmatched_exact: list
    ambiguous: bool

    def error_for(self, level: LevelIndex) -> float:
        for _, lv, _, err in self.pairs:
            if lv == level:
                return err
        raise KeyError(level)


def match_exact(result: EigenSolveResult | np.ndarray, params: ModelParams) -> MatchReport:
    """Greedy nearest-neighbour pairing of ``Re(lambda) - c^2`` with exact energies.

    ``result`` may also be a bare array of ``Re(lambda) - c^2`` values.
    """
    values = result.shifted if isinstance(result, EigenSolveResult) else np.asarray(result, float)
    if values.size == 0:
        raise DomainError("nothing to match")
    exact = spectrum(params.alpha, values.size)
    dist = np.abs(values[:, None] - np.array([lv.E for lv in exact])[None, :])
    order = sorted(
        ((dist[i, j], i, j) for i in range(values.size) for j in range(len(exact))),
    )
    used_i, used_j, pairs = set(), set(), []
    for d, i, j in order:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        pairs.append((i, exact[j].level, exact[j].E, float(d)))
    pairs.sort(key=lambda p: p[0])
    unmatched_numeric = [i for i in range(values.size) if i not in used_i]
    unmatched_exact = [exact[j].level for j in range(len(exact)) if j not in used_j]

    # Ambiguity: more numeric values share a nearest energy than that energy's multiplicity.
    energies = sorted({lv.E for lv in exact})
    mult = {E: sum(1 for lv in exact if lv.E == E) for E in energies}
    nearest = [min(energies, key=lambda E: abs(v - E)) for v in values]
    crowded = any(nearest.count(E) > mult[E] for E in energies)
    ambiguous = crowded and bool(set(energies) - set(nearest))
    return MatchReport(
        pairs=pairs,
        max_error=max(p[3] for p in pairs),
        unmatched_numeric=unmatched_numeric,
        unmatched_exact=unmatched_exact,
        ambiguous=ambiguous,
    )


def richardson_order(steps, errors) -> list[float]:
    """Observed orders ``log(e_i/e_{i+1}) / log(h_i/h_{i+1})`` for consecutive grids."""
    h = np.asarray(steps, float)
    e = np.abs(np.asarray(errors, float))
    return list(np.log(e[:-1] / e[1:]) / np.log(h[:-1] / h[1:]))


@dataclass
class ConvergenceReport:
    order: float | None
    per_level: dict
    errors: dict
    steps: list
    inconclusive: bool

    @property
    def summary(self) -> str:
        if self.inconclusive or self.order is None:
            return "inconclusive"
        return f"p = {self.order:.3f}"


def convergence_order(
    params: ModelParams,
    Ns,
    level_count: int = 4,
    scheme: str = "fd4",
    half_width: float | None = None,
) -> ConvergenceReport:
    """Estimate the discretization order from errors against the exact spectrum.

    Each level's order comes from the two finest grids; the reported order
    is the median over levels.  A non-monotone error sequence marks the
    report inconclusive instead of raising.
    """
    Ns = list(Ns)
    if len(Ns) < 3 or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise DomainError("need at least three ascending grid sizes")
    steps, errs = [], {}
    for N in Ns:
        disc = Discretization.default_for(params, points=N, scheme=scheme, half_width=half_width)
        res = solve_spectrum(params, disc, level_count)
        rep = match_exact(res, params)
        steps.append(disc.step)
        for _, lv, _, err in rep.pairs:
            errs.setdefault(lv, []).append(err)
    per_level, inconclusive = {}, False
    for lv, e in errs.items():
        if len(e) != len(Ns) or any(b >= a for a, b in zip(e, e[1:])) or min(e) == 0:
            per_level[lv] = None
            inconclusive = True
            continue
        per_level[lv] = richardson_order(steps, e)[-1]
    good = [p for p in per_level.values() if p is not None]
    order = float(np.median(good)) if good and not inconclusive else None
    return ConvergenceReport(order, per_level, errs, steps, inconclusive)
