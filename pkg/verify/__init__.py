from verify.crosscheck import (
    check_energy_promotion, check_reduced_route, check_symplectification, cross_check_full_vs_reduced,
)
from verify.harness import DEFAULT_TOLERANCES, VerificationHarness, verify_model
from verify.identities import (
    check_contact_identity, check_energy_conservation, check_herglotz_condition, contact_divergence_law,
    contact_identity_residual, divergence_check, herglotz_rate_residual,
)
from verify.multiplier import MULTIPLIER, first_order_contact, multiplier_check, multiplier_rows
from verify.numeric import DEFAULT_SETTINGS, evaluate_along, full_flow, mapped_initial, reduced_flow, run
from verify.report import NUMERIC, SYMBOLIC, CheckResult, VerificationReport
from verify.symbolic import lapse_consistency, reference_suite, ricci_oracle, symbolic_residual_suite
