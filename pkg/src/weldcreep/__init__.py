"""Steady-state creep stress analysis of circumferentially welded
pressurized pipes.

The package provides the closed-form homogeneous-pipe solution, the
first-order correction for a piecewise-constant creep prefactor solved
either over a trigonometric series basis or by a separated semi-analytical
reduction, and a direct nonlinear solve used to measure the accuracy of the
first-order expansion.
"""

from .core import (
    MaterialLayup,
    NormalizedLayup,
    PipeConfig,
    StrainRateState,
    StressState,
    gauss_legendre_rule,
    normalize_layup,
    norton_strain_rate,
    norton_tangent,
    two_material_config,
    von_mises,
)
from .baseline import (
    BaselineCoefficients,
    ComplianceMatrix,
    baseline_coefficients,
    baseline_stress,
    compliance_at,
    displacement_jump,
    interface_constant,
    stress_jump,
    stress_jump_from_compliance,
)
from .stressfn import (
    BasisField,
    PotentialPair,
    QuadratureGrid,
    enumerate_basis,
    grid_for_basis,
    stress_from_potentials,
    tensor_grid,
)
from .ritz import (
    FieldSolution,
    LinearCorrectionProblem,
    assemble_gram,
    assemble_rhs,
    combine_interfaces,
    first_order_field,
    solve_correction,
    solve_linear_correction,
)
from .kantorovich import (
    KantorovichConstants,
    OdePiecewiseSolution,
    characteristic_roots,
    compute_constants,
    reconstruct_stress,
    sine_trial,
    solve_bvp,
)
from .nonlinear import (
    ErrorReport,
    NonlinearProblem,
    complementary_potential,
    perturbation_error,
    solve_nonlinear,
)

__version__ = "0.1.0"
