from reduce.errors import FactorizationError, PromotionError, ReductionError, SymmetryError
from reduce.pipeline import (
    RHO, CHI, Factorization, ReductionResult, action_identity, action_rate_residual, build_herglotz_lagrangian,
    chi_equation, chi_residual, full_to_reduced_map, generalized_action, hamiltonian_reduction,
    herglotz_chi_residual, pullback_consistency, readouts, reduce_system, reduced_equations_of_motion,
    reparameterize_and_factor, to_chi, unscaled_residuals,
)
from reduce.promotion import promote_couplings, promote_energy, promoted_symmetry
from reduce.symmetry import (
    KAPPA, ScalingSymmetry, SymmetryVerdict, WeightSolution, lift_symmetry, solve_weights, verify_scaling_symmetry,
)
from reduce.symplectify import Symplectification, symplectic_row_checks, symplectify
