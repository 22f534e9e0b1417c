"""qcx: numerics for meromorphic maps with k-quasiconformal extension.

Solves the Beltrami-type integral equation for residue-1 maps with a pole
at p in [0, 1), reconstructs the map from its complex dilatation, extracts
Laurent coefficients, and verifies coefficient, deviation and distortion
bounds together with their extremal cases.
"""

from .grid import DiskGrid, GridFunction, build_grid, dump_csv, integrate, load_csv, norm
from .transforms import (
    TransformConfig,
    beurling_transform,
    beurling_transform_at,
    cauchy_transform,
    cauchy_transform_field,
    cauchy_transform_grid,
    operator_norm_bound,
)
from .neumann import (
    DilatationField,
    MaxTermsExceededError,
    NeumannSolution,
    NonContractiveError,
    PoleParam,
    contraction_factor,
    cpq_constant,
    solve_beltrami,
    source_term,
    term_norm_bound,
)
from .reconstruction import (
    AsymptoticBudget,
    ReconstructedMap,
    budget_c,
    deviation_bound,
    first_order_map,
    numerical_fprime,
    pointwise_extremal_dilatation,
    reconstruct_f,
    reconstruct_psi,
    tune_extremal_phase,
)
from .coefficients import (
    LaurentCoefficients,
    coeff_bound,
    coeff_error_constant,
    coeff_first_order,
    coeff_from_map,
    exterior_form_transfer_gap,
    extremal_dilatation_for_coeff,
    series_factor,
)
from .bounds import (
    BoundReport,
    ClosedFormMap,
    chichra_sum,
    classical_bound,
    distortion_bound_qc,
    distortion_check,
    extremal_distortion_map,
    krzyz_test,
    monomial_test_map,
    pole_condition_test,
    sigma_extremal_map,
)
from .synthetic import bump_field, random_dilatation, random_smooth_field

__version__ = "0.1.0"
