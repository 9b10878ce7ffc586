from fractions import Fraction

import pytest

from expr import ZERO, equivalent
from mech import JetChart, LagrangianSystem
from models import build_model
from reduce import (
    PromotionError, ReductionError, ScalingSymmetry, SymmetryError, action_identity, action_rate_residual,
    chi_residual, full_to_reduced_map, herglotz_chi_residual, lift_symmetry, promote_couplings, promote_energy,
    promoted_symmetry, pullback_consistency, readouts, reduce_system, solve_weights, symplectic_row_checks,
    symplectify, unscaled_residuals, verify_scaling_symmetry,
)


def _vanishes(expression):
    return equivalent(expression, ZERO).holds


# -- symmetries ---------------------------------------------------------------

def test_declared_symmetries_are_verified(pu, kepler, flrw):
    for model in (pu, kepler, flrw):
        verdict = verify_scaling_symmetry(model.system, model.symmetry)
        assert verdict, model.name
        assert verdict.degree == model.symmetry.degree


def test_wrong_degree_is_refuted(pu):
    verdict = verify_scaling_symmetry(pu.system, ScalingSymmetry("q", 1, 0, 3))
    assert not verdict
    assert verdict.witness


def test_lifted_weights_shift_with_time_scaling(kepler):
    chart = kepler.chart
    table = lift_symmetry(kepler.symmetry, chart)
    assert table[chart.jet("r")] == 2
    assert table[chart.jet("r", 1)] == -1
    assert table[chart.jet("th", 1)] == -3


@pytest.mark.parametrize("A, B, degree", [(0, 0, 2), (2, 3, 1), (1, 0, 0)])
def test_inconsistent_symmetries_are_rejected(A, B, degree):
    with pytest.raises(SymmetryError):
        ScalingSymmetry("q", A, B, degree)


def test_weight_balance_solves_the_kepler_scaling(kepler):
    solution = solve_weights(kepler.system, "r", A=2)
    assert solution.unique
    assert solution.particular["B"] == 3
    assert solution.particular["Lambda"] == -2
    sym = solution.symmetry("r", 2)
    assert (sym.A, sym.B, sym.degree) == (2, 3, -2)


def test_weight_balance_leaves_the_overall_scale_free(kepler):
    solution = solve_weights(kepler.system, "r")
    assert not solution.unique
    assert len(solution.nullspace) == 1


def test_weight_balance_without_solution():
    chart = JetChart({"q": 1}, name="mixed")
    system = LagrangianSystem(chart, "q'^2/2 - q^2/2 + q^3", name="mixed")
    with pytest.raises(SymmetryError):
        solve_weights(system, "q", A=1)


# -- Lagrangian and Hamiltonian routes ----------------------------------------

def test_pais_uhlenbeck_reduction(pu, assert_equal):
    result = pu.reduction
    chart = result.reduced_chart
    assert result.exponent == 1
    assert_equal(result.S_expr, "chi/4 + lam*chi*chi'/4 + lam*chi''/4", chart)
    assert_equal(result.herglotz_L, "(chi^2/4 - th'^2 - lam*(4*chi'^2 + 4*chi^2*chi' + chi^4)/16)/2 - chi*S", chart)
    expected_H = "-(pi0_th^2/2 + chi^2*pi0_chi/2 + 2*pi0_chi^2/lam + chi^2/8) + chi*S"
    assert_equal(result.contact_H, expected_H, chart)
    assert_equal(result.contact_H_lagrangian, expected_H, chart)


def test_kepler_reduction(kepler, assert_equal):
    result = kepler.reduction
    chart = result.reduced_chart
    assert chart.time_name == "tau"
    assert_equal(result.f, "2*rho'^2 + th'^2/2 + 1", result.rho_chart)
    assert_equal(result.herglotz_L, "2*chi^2 + th'^2/2 + 1 - chi*S", chart)
    assert_equal(result.contact_H, "S^2/8 + pi0_th^2/2 - 1", chart)


@pytest.mark.parametrize("name", ["pais-uhlenbeck", "kepler"])
def test_reduction_identities_vanish(name):
    result = build_model(name).reduction
    assert _vanishes(action_identity(result))
    assert _vanishes(chi_residual(result))
    assert _vanishes(herglotz_chi_residual(result))
    assert _vanishes(action_rate_residual(result))
    residuals = unscaled_residuals(result)
    assert set(residuals) == {"th"}
    assert all(_vanishes(r) for r in residuals.values())


def test_reduced_flow_is_the_image_of_the_full_flow(kepler):
    checks = pullback_consistency(kepler.reduction)
    assert checks
    failed = [name for name, outcome in checks.items() if not outcome.holds]
    assert not failed


def test_full_to_reduced_map_reads_chi_as_a_log_derivative(kepler, assert_equal):
    mapping, rho = full_to_reduced_map(kepler.reduction)
    chart = kepler.chart
    assert_equal(rho, "log(r)/2", chart)
    chi = next(value for symbol, value in mapping.items() if symbol.name == "chi")
    assert_equal(chi, "r^(1/2)*r'/2", chart)


def test_readouts_add_a_clock_only_when_time_is_rescaled(pu, kepler):
    assert [row.symbol.name for row in readouts(pu.reduction)] == ["rho"]
    assert [row.symbol.name for row in readouts(kepler.reduction)] == ["rho", "t"]


def test_symplectification_reproduces_the_contact_rows(pu):
    symplectic = symplectify(pu.reduction)
    assert symplectic.pairs_text()[0] == "y<->S"
    checks = symplectic_row_checks(pu.reduction, symplectic)
    assert all(outcome.holds for outcome in checks.values())


# -- refusals and promotions --------------------------------------------------

def test_contact_charts_are_not_reduced(damped_pu):
    with pytest.raises(ReductionError):
        reduce_system(damped_pu.system, ScalingSymmetry("q", 1, 0, 2))


def test_reserved_names_are_refused():
    chart = JetChart({"rho": 1}, name="reserved")
    system = LagrangianSystem(chart, "rho'^2/2", name="reserved")
    with pytest.raises(ReductionError):
        reduce_system(system, ScalingSymmetry("rho", 1, 0, 2))


def test_coupling_promotion_blocks_reduction():
    coupled = build_model("kepler-coupled")
    promoted = promote_couplings(coupled.system, ["C", "D"])
    assert set(promoted.chart.constant_velocity) == {"zC", "zD"}
    assert "C" not in promoted.chart.parameter_names
    with pytest.raises(ReductionError):
        reduce_system(promoted, ScalingSymmetry("r", 2, 3, -2))


def test_promoted_coupling_restores_the_kepler_scaling():
    promoted = promote_couplings(build_model("kepler-coupled").system, ["D"])
    sym, family = promoted_symmetry(promoted, "r", 2)
    assert family.unique
    assert (sym.B, sym.degree) == (3, -2)
    assert sym.weights == {"zD": -3}
    # D itself scales as kappa^-6
    assert lift_symmetry(sym, promoted.chart)[promoted.chart.jet("zD", 1)] == -6
    assert verify_scaling_symmetry(promoted, sym)


def test_promoting_both_couplings_leaves_a_family():
    promoted = promote_couplings(build_model("kepler-coupled").system, ["C", "D"])
    family = solve_weights(promoted, "r", A=2, unknown_coordinates=("zC", "zD"))
    assert len(family.nullspace) == 1
    member = family.member(B=3)
    assert member.unique
    assert member.particular["Lambda"] == -2
    assert (member.particular["w_zC"], member.particular["w_zD"]) == (3, -3)
    assert family.reparameterizing().particular == member.particular
    assert verify_scaling_symmetry(promoted, member.symmetry("r", 2))
    with pytest.raises(SymmetryError):
        family.member(w_zE=1)


def test_flrw_with_promoted_lam_has_a_symmetry_family(flrw):
    promoted = promote_couplings(flrw.system, ["lam"])
    family = solve_weights(promoted, "v", unknown_coordinates=("zlam",))
    assert len(family.nullspace) == 1
    sym = family.member(A=1).symmetry("v")
    assert (sym.A, sym.B, sym.degree) == (1, 0, 1)
    assert sym.weights == {"zlam": 0}
    assert verify_scaling_symmetry(promoted, sym)


def test_pinning_outside_the_family_is_refused():
    promoted = promote_couplings(build_model("kepler-coupled").system, ["D"])
    with pytest.raises(SymmetryError):
        solve_weights(promoted, "r", A=2, unknown_coordinates=("zD",)).member(B=1)


def test_unknown_couplings_are_not_promoted(kepler):
    with pytest.raises(PromotionError):
        promote_couplings(kepler.system, ["C"])


@pytest.mark.parametrize("sign", [1, -1])
def test_energy_promotion_balances_the_weight(kepler, sign, assert_equal):
    promoted, lam, carried = promote_energy(kepler.system, kepler.symmetry, sign=sign)
    assert lam == Fraction(2, 3)
    assert carried.weights == {"z": 0}
    chart = promoted.chart
    assert_equal(promoted.lagrangian, f"r'^2/2 + r^2*th'^2/2 + 1/r + ({sign})*z'^(2/3)", chart)
    assert verify_scaling_symmetry(promoted, carried)


def test_energy_promotion_needs_time_scaling(pu):
    with pytest.raises(PromotionError):
        promote_energy(pu.system, pu.symmetry)
