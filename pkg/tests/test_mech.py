import pytest

from expr import equivalent, mul, parse_expression
from mech import (
    JetChart, LagrangianSystem, MechanicsError, energy_function, euler_lagrange, hamilton_equations,
    herglotz_equations, jacobi_ostrogradsky_momenta, legendre_ostrogradsky, legendre_residual, regularity_check,
    total_derivative_DL, total_derivative_dT,
)


def _rows(rows):
    return {row.symbol.name: row.rhs for row in rows}


def test_total_derivative_shifts_each_jet(pu):
    chart = pu.chart
    f = chart.parse("q'*th + lam*q''^2")
    assert total_derivative_dT(f, chart) == chart.parse("q''*th + q'*th' + 2*lam*q''*q'''")


def test_total_derivative_of_explicit_time():
    chart = JetChart({"q": 1}, name="clock")
    assert total_derivative_dT(chart.parse("t*q"), chart) == chart.parse("q + t*q'")


def test_lagrangian_total_derivative_breaks_leibniz_by_the_action_term(damped_pu):
    chart = damped_pu.chart
    L = damped_pu.system.L
    f, g = chart.parse("q'"), chart.parse("th'")
    defect = total_derivative_DL(mul(f, g), L, chart) - f * total_derivative_DL(g, L, chart) \
        - g * total_derivative_DL(f, L, chart)
    assert equivalent(defect, chart.parse("-gam*q'*th'")).holds


def test_pais_uhlenbeck_momenta(pu, assert_equal):
    momenta = jacobi_ostrogradsky_momenta(pu.system)
    assert_equal(momenta[("q", 1)], "-lam*q''", pu.chart, proved=True)
    assert_equal(momenta[("q", 0)], "q' + lam*q'''", pu.chart, proved=True)
    assert_equal(momenta[("th", 0)], "-q^2*th'", pu.chart, proved=True)


def test_pais_uhlenbeck_energy(pu, assert_equal):
    assert_equal(energy_function(pu.system), "q'^2/2 + lam*q'*q''' - q^2*th'^2/2 - lam*q''^2/2", pu.chart,
                 proved=True)


def test_recursion_residuals_vanish(pu, kepler, flrw):
    for model in (pu, kepler, flrw):
        residuals = model.system.recursion_residuals()
        assert residuals
        assert all(r.is_zero for r in residuals.values()), model.name


def test_pais_uhlenbeck_equations_of_motion(pu, assert_equal):
    solved = {row.symbol.base: row for row in pu.system.solved()}
    assert solved["q"].symbol.name == "q[4]"
    assert [s.name for s in solved["q"].chain] == ["q", "q'", "q''", "q'''"]
    assert_equal(solved["q"].rhs, "-(q'' + q*th'^2)/lam", pu.chart)
    assert_equal(solved["th"].rhs, "-2*q'*th'/q", pu.chart)
    assert set(euler_lagrange(pu.system)) == {"q", "th"}


def test_regularity_determinant(pu, assert_equal):
    result = regularity_check(pu.system)
    assert result.verdict == "regular"
    assert_equal(result.determinant, "lam*q^2", pu.chart)
    assert not regularity_check(pu.system, at={"lam": 0.1, "q": 0.0}).regular


def test_singular_lagrangian_is_reported():
    chart = JetChart({"q": 1, "x": 1}, name="degenerate")
    system = LagrangianSystem(chart, "(q' + x')^2/2", name="degenerate")
    assert regularity_check(system).verdict == "singular"


def test_legendre_transform_pulls_back_to_the_energy(pu, kepler):
    for model in (pu, kepler):
        assert equivalent(legendre_residual(model.system), parse_expression("0")).holds


def test_oscillator_hamilton_equations(oscillator, assert_equal):
    h = legendre_ostrogradsky(oscillator)
    chart = oscillator.chart
    assert_equal(h.hamiltonian, "p0_q^2/2 + q^2/2", chart, proved=True)
    rows = _rows(hamilton_equations(h))
    assert_equal(rows["q"], "p0_q", chart, proved=True)
    assert_equal(rows["p0_q"], "-q", chart, proved=True)


def test_damped_contact_components(damped_pu, assert_equal):
    rows = _rows(legendre_ostrogradsky(damped_pu.system).contact_hamilton_equations())
    chart = damped_pu.chart
    assert_equal(rows["p0_th"], "-gam*p0_th", chart)
    assert_equal(rows["p1_q"], "q' - p0_q - gam*p1_q", chart)
    assert_equal(rows["z"], "(q'^2 - p0_th^2/q^2 - p1_q^2/lam)/2 - gam*z", chart)


def test_herglotz_equations_carry_the_action_row(rotor, assert_equal):
    residuals, action_row = herglotz_equations(rotor.system)
    assert action_row.symbol == rotor.chart.action
    assert_equal(action_row.rhs, "-th'^2/2 - gam*z", rotor.chart, proved=True)
    assert_equal(residuals["th"], "th'' + gam*th'", rotor.chart)


def test_herglotz_equations_need_a_contact_chart(pu):
    with pytest.raises(MechanicsError):
        herglotz_equations(pu.system)


def test_lagrangian_beyond_declared_order_is_rejected():
    chart = JetChart({"q": 1}, name="too-high")
    with pytest.raises(MechanicsError):
        LagrangianSystem(chart, "q''^2", name="too-high")


def test_algebraic_coordinates_are_eliminated(assert_equal):
    chart = JetChart({"q": 1, "u": 0}, name="auxiliary")
    system = LagrangianSystem(chart, "q'^2/2 - u^2/2 + u*q", name="auxiliary")
    assert_equal(system.L, "q'^2/2 + q^2/2", chart)


def test_zero_energy_solves_for_the_chosen_jet(kepler):
    values = kepler.initial_values()
    assert kepler.energy_at(values) == pytest.approx(0.0, abs=1e-12)
