"""Critical time steps for alpha-stabilized immersed spectral element grids.

The package computes the central-difference stability limit
dt_crit = 2 / sqrt(lambda_max(K, M)) for cut elements and assembled
Cartesian grids, reproduces the closed-form single-DOF results of the
corner-cut model problem, and verifies the modified CFL condition
dt <= alpha^(1/(d+2)) C_cfl h / c on a perforated plate.
"""

from .analytic import (
    SingleDofResult,
    asymptotic_dt_min,
    dlambda_dchi,
    lambda_constant,
    single_dof,
    stationary_chi,
    unstabilized_lambda,
)
from .assembly import (
    ElementMatrices,
    GlobalSystem,
    apply_dirichlet,
    assemble_global,
    element_matrices_cornercut,
    element_matrices_quadtree,
    full_element_matrices,
    lumped_mass,
    single_dof_dirichlet_set,
)
from .basis import NodalBasis1D, TensorBasis, gll_nodes, lagrange_all, tensor_eval
from .eigen import (
    DefinitenessError,
    EigenConvergenceError,
    SpectrumResult,
    critical_dt,
    max_eig_dense,
    max_eig_iterative,
)
from .geometry import (
    CornerCutDomain,
    ImplicitDomain,
    PerforatedPlate,
    fcm_scale,
    perforated_plate,
    volume_fraction,
)
from .quadrature import (
    CutCellRule,
    QuadratureRule,
    cut_cell_rule,
    gauss_legendre_1d,
    gll_rule_1d,
    tensorize,
)
from .studies import (
    AnalyticMap,
    CflEstimate,
    PlateRecord,
    SweepRecord,
    analytic_map,
    cfl_bound,
    cfl_estimate,
    element_sweep,
    full_element_dts,
    min_dt_ratio,
    modified_cfl_dt,
    plate_shift_grid,
    plate_study,
)

__version__ = "0.1.0"
