"""Exactly solvable PT-symmetric oscillator with a complex-shifted centrifugal core."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .model import (  # noqa: E402
    Crossing,
    EnergyLevel,
    LevelIndex,
    ModelParams,
    alpha_from_coupling,
    coupling_from_alpha,
    crossings,
    exact_energy,
    hermitian_limit_node_count,
    spectrum,
)
from .special import (  # noqa: E402
    QuadratureSpec,
    RootSet,
    WaveFunctionSpec,
    c_product,
    kummer_series,
    laguerre_eval,
    laguerre_factorization_residual,
    laguerre_roots,
    nodal_zeros,
    wavefunction_eval,
)
from .solver import (  # noqa: E402
    Discretization,
    EigenSolveResult,
    build_hamiltonian,
    convergence_order,
    match_exact,
    potential_eval,
    solve_spectrum,
)
from .perturbation import (  # noqa: E402
    CoreDecomposition,
    RSResult,
    exact_vs_perturbative,
    reparameterize,
    rs_first_order,
    rs_second_order,
    w_components,
)
