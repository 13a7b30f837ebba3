"""Steady states and photon statistics of a single-atom laser.

A two-level atom in a damped cavity, pumped incoherently: this package
solves the dimensionless master equation for the steady state on a
truncated Fock space, evaluates the closed-form moment relations and
approximations that exist for the same model, and cross-checks the two
against each other.  The `atomlaser` console script exposes the solver,
sweeps, distributions and the check suite.
"""

from .analytic import (OdeCoeffs, QuadraticRelation, boundary_p0, equal_rate_coeffs,
                       first_order_closed_form, fourth_moment_variants,
                       inversion_residual, moment_residuals, ode_coeffs, quad_coeffs,
                       quad_residual, second_order_closed_form, special_system_solve)
from .checks import CheckResult, run_checks
from .fock import (SpaceConfig, annihilation, atom_lowering, atom_operator,
                   basis_projector, field_operator, inversion_operator, tensor)
from .liouvillian import (DegenerateLiouvillianError, DensityMatrix, ModelParams,
                          StepSizeError, SteadyStateResult, TruncationError,
                          apply_rhs, basis_state, build_superoperator, evolve,
                          max_step, steady_state, steady_state_adaptive)
from .observables import (MomentSet, mandel_q, moments, photon_distribution,
                          total_variation)
from .strong_coupling import (ExactDistribution, direct_distribution,
                              exact_distribution, exact_q, norm_constant,
                              p_function, p_norm_constant, recurrence_variants)

__version__ = "0.1.0"

__all__ = [
    "OdeCoeffs", "QuadraticRelation", "boundary_p0", "equal_rate_coeffs",
    "first_order_closed_form", "fourth_moment_variants", "inversion_residual",
    "moment_residuals", "ode_coeffs", "quad_coeffs", "quad_residual",
    "second_order_closed_form", "special_system_solve",
    "CheckResult", "run_checks",
    "SpaceConfig", "annihilation", "atom_lowering", "atom_operator",
    "basis_projector", "field_operator", "inversion_operator", "tensor",
    "DegenerateLiouvillianError", "DensityMatrix", "ModelParams",
    "StepSizeError", "SteadyStateResult", "TruncationError",
    "apply_rhs", "basis_state", "build_superoperator", "evolve",
    "max_step", "steady_state", "steady_state_adaptive",
    "MomentSet", "mandel_q", "moments", "photon_distribution", "total_variation",
    "ExactDistribution", "direct_distribution", "exact_distribution", "exact_q",
    "norm_constant", "p_function", "p_norm_constant", "recurrence_variants",
    "__version__",
]
