import math

import numpy as np
import pandas as pd
import pytest

from integrate import (
    REPARAMETERIZED, CompileError, IntegrationError, Trajectory, compile_system, integrate_adaptive,
    integrate_fixed, reconstruct_time,
)
from mech import EquationRow, JetChart


@pytest.fixture
def oscillator_flow(oscillator):
    return compile_system(oscillator.solved(), chart=oscillator.chart)


def _final_error(system, dt):
    trajectory = integrate_fixed(system, system.initial_state({"q": 1.0, "q'": 0.0}), 0.0, 1.0, dt)
    return abs(trajectory.final_state[0] - math.cos(1.0))


def test_towers_flatten_into_states(oscillator_flow):
    assert oscillator_flow.columns == ["q", "q'"]
    assert oscillator_flow.rhs(0.0, np.array([2.0, 3.0])).tolist() == [3.0, -2.0]


def test_missing_initial_values_are_reported(oscillator_flow):
    with pytest.raises(CompileError):
        oscillator_flow.initial_state({"q": 1.0})


def test_unbound_parameters_are_reported():
    chart = JetChart({"q": 1}, parameters=("w",), name="driven")
    row = EquationRow(chart.jet("q", 2), chart.parse("-w^2*q"), (chart.jet("q"), chart.jet("q", 1)))
    with pytest.raises(CompileError):
        compile_system([row], chart=chart)
    flow = compile_system([row], binding={"w": 2.0}, chart=chart)
    assert flow.rhs(0.0, np.array([1.0, 0.0])).tolist() == [0.0, -4.0]


def test_rk4_converges_at_fourth_order(oscillator_flow):
    coarse = _final_error(oscillator_flow, 0.1)
    fine = _final_error(oscillator_flow, 0.05)
    assert math.log2(coarse / fine) == pytest.approx(4.0, abs=0.3)


def test_rk4_samples_every_step_and_lands_on_the_end(oscillator_flow):
    y0 = oscillator_flow.initial_state({"q": 1.0, "q'": 0.0})
    trajectory = integrate_fixed(oscillator_flow, y0, 0.0, 1.05, 0.1)
    assert len(trajectory) == 12
    assert trajectory.times[-1] == pytest.approx(1.05)
    assert trajectory.metadata["method"] == "rk4"


def test_dormand_prince_tracks_the_exact_solution(oscillator_flow):
    y0 = oscillator_flow.initial_state({"q": 1.0, "q'": 0.0})
    trajectory = integrate_adaptive(oscillator_flow, y0, 0.0, 10.0, rel_tol=1e-10, abs_tol=1e-12)
    assert trajectory.final_state[0] == pytest.approx(math.cos(10.0), abs=1e-8)
    assert trajectory.final_state[1] == pytest.approx(-math.sin(10.0), abs=1e-8)
    assert trajectory.metadata["accepted_steps"] > 0


def test_dormand_prince_interpolates_requested_times(oscillator_flow):
    y0 = oscillator_flow.initial_state({"q": 1.0, "q'": 0.0})
    grid = np.linspace(0.0, 3.0, 7)
    trajectory = integrate_adaptive(oscillator_flow, y0, 0.0, 3.0, rel_tol=1e-10, abs_tol=1e-12, t_eval=grid)
    assert trajectory.times.tolist() == grid.tolist()
    np.testing.assert_allclose(trajectory.column("q"), np.cos(grid), atol=1e-6)


def test_empty_interval_gives_the_initial_state(oscillator_flow):
    y0 = oscillator_flow.initial_state({"q": 1.0, "q'": 0.5})
    for trajectory in (integrate_fixed(oscillator_flow, y0, 2.0, 2.0, 0.1),
                       integrate_adaptive(oscillator_flow, y0, 2.0, 2.0, rel_tol=1e-8, abs_tol=1e-10)):
        assert len(trajectory) == 1
        assert trajectory.final_state.tolist() == [1.0, 0.5]


def test_backward_integration_is_refused(oscillator_flow):
    y0 = oscillator_flow.initial_state({"q": 1.0, "q'": 0.0})
    with pytest.raises(IntegrationError):
        integrate_fixed(oscillator_flow, y0, 1.0, 0.0, 0.1)


def test_leaving_the_real_domain_stops_the_run():
    chart = JetChart({"q": 1, "w": 1}, name="draining")
    rows = [EquationRow(chart.jet("q"), chart.parse("-1")), EquationRow(chart.jet("w"), chart.parse("sqrt(q)"))]
    flow = compile_system(rows, chart=chart)
    y0 = flow.initial_state({"q": 1.0, "w": 0.0})
    with pytest.raises(IntegrationError) as raised:
        integrate_fixed(flow, y0, 0.0, 2.0, 0.01)
    assert raised.value.t is not None and raised.value.t <= 1.0
    assert raised.value.state is not None


def test_time_reconstruction_integrates_the_rho_readout():
    tau = np.linspace(0.0, 1.0, 101)
    trajectory = Trajectory(tau, np.column_stack([np.full_like(tau, math.log(2.0))]), ["rho"],
                            {"parameterization": REPARAMETERIZED, "time_label": "tau"})
    out = reconstruct_time(trajectory, degree=-1)
    # dt/dtau = exp(2*rho) = 4
    np.testing.assert_allclose(out.column("t"), 4.0 * tau)
    assert out.metadata["physical_time_column"] == "t"


def test_time_reconstruction_prefers_a_cointegrated_clock():
    tau = np.array([0.0, 0.5, 1.0])
    states = np.column_stack([np.zeros(3), [3.0, 3.5, 5.0]])
    trajectory = Trajectory(tau, states, ["rho", "t"], {"parameterization": REPARAMETERIZED})
    out = reconstruct_time(trajectory, degree=-2)
    assert out.column("t_physical").tolist() == [0.0, 0.5, 2.0]


def test_csv_puts_time_first(oscillator_flow, tmp_path):
    y0 = oscillator_flow.initial_state({"q": 1.0, "q'": 0.0})
    trajectory = integrate_fixed(oscillator_flow, y0, 0.0, 0.5, 0.1)
    path = tmp_path / "oscillator.csv"
    trajectory.to_csv(path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["t", "q", "q'"]
    assert len(frame) == 6
    assert frame["q"].iloc[-1] == pytest.approx(trajectory.final_state[0], rel=1e-15)


def test_non_finite_trajectories_are_rejected():
    with pytest.raises(IntegrationError):
        Trajectory(np.array([0.0, 1.0]), np.array([[1.0], [np.nan]]), ["q"])


def _pendulum():
    chart = JetChart({"q": 1}, name="pendulum")
    row = EquationRow(chart.jet("q", 2), chart.parse("-sin(q)"), (chart.jet("q"), chart.jet("q", 1)))
    system = compile_system([row], chart=chart)
    return system, system.initial_state({"q": 2.0, "q'": 0.0})


def test_repeated_runs_are_bit_identical():
    system, y0 = _pendulum()
    first = integrate_adaptive(system, y0, 0.0, 5.0, rel_tol=1e-8, abs_tol=1e-10)
    second = integrate_adaptive(system, y0, 0.0, 5.0, rel_tol=1e-8, abs_tol=1e-10)
    assert first.times.tolist() == second.times.tolist()
    assert first.states.tolist() == second.states.tolist()
    assert first.to_json() == second.to_json()


@pytest.mark.slow
def test_adaptive_meets_its_tolerance_against_a_fine_fixed_step():
    system, y0 = _pendulum()
    rel_tol, abs_tol = 1e-6, 1e-9
    adaptive = integrate_adaptive(system, y0, 0.0, 1.0, rel_tol=rel_tol, abs_tol=abs_tol)
    reference = integrate_fixed(system, y0, 0.0, 1.0, 1e-5)
    error = np.abs(adaptive.final_state - reference.final_state)
    assert np.all(error <= 100 * (abs_tol + rel_tol * np.abs(reference.final_state)))
