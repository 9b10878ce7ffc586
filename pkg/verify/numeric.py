"""
Numeric plumbing shared by the checks: compiled flows of a model, initial data
mapped between descriptions, and expressions evaluated along trajectories.
"""

import logging

import numpy as np

from expr import evaluate, substitute
from integrate import (
    PHYSICAL_TIME, RADICAND_FLOOR, REPARAMETERIZED, Tape, compile_system, integrate_adaptive, integrate_fixed,
)
from mech import legendre_ostrogradsky
from reduce import full_to_reduced_map, readouts, reduced_equations_of_motion

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS = {
    "method": "dopri5",
    "rel_tol": 1e-10,
    "abs_tol": 1e-12,
    "dt": 1e-3,
    "samples": 200,
    "control": None,
    "radicand_floor": RADICAND_FLOOR,
}


def merged_settings(settings=None):
    out = dict(DEFAULT_SETTINGS)
    out.update({k: v for k, v in dict(settings or {}).items() if v is not None})
    return out


def sample_grid(t0, t1, samples):
    if t1 <= t0:
        return np.array([t0])
    return np.linspace(t0, t1, int(samples) + 1)


def run(system, y0, t0, t1, settings=None, t_eval=None, every_step=False):
    """
    Integrate with the configured method.  ``t_eval`` defaults to the uniform
    sample grid; ``every_step`` keeps the step points instead (no interpolation).
    """
    settings = merged_settings(settings)
    if every_step:
        t_eval = None
    elif t_eval is None:
        t_eval = sample_grid(t0, t1, settings["samples"])
    if settings["method"] == "rk4":
        return integrate_fixed(system, y0, t0, t1, settings["dt"], t_eval=t_eval)
    return integrate_adaptive(system, y0, t0, t1, settings["rel_tol"], settings["abs_tol"], t_eval=t_eval,
                              control=settings["control"])


def _env(chart, binding, values, t0):
    env = dict(binding)
    env.update(values)
    env[chart.time.name] = t0
    return env


def _value(expression, chart, env):
    lapse = chart.lapse_jets()
    if lapse:
        expression = substitute(expression, lapse)
    return evaluate(expression, env)


# -- full description --------------------------------------------------------

def full_flow(model, binding=None, settings=None):
    """Solved Euler-Lagrange (or Herglotz) rows of the model on its own jet chart."""
    settings = merged_settings(settings)
    chart = model.chart
    return compile_system(
        model.system.solved(), binding=model.parameter_binding(binding), chart=chart,
        metadata={"model": model.name, "flow": "full", "parameterization": PHYSICAL_TIME,
                  "time_label": chart.time_name},
        radicand_floor=settings["radicand_floor"],
    )


def hamiltonian_flow(model, binding=None, settings=None):
    """Hamilton (or contact Hamilton) equations of the Legendre-Ostrogradsky image."""
    settings = merged_settings(settings)
    h = legendre_ostrogradsky(model.system)
    return compile_system(
        h.equations(), binding=model.parameter_binding(binding), chart=model.chart,
        metadata={"model": model.name, "flow": "hamiltonian", "parameterization": PHYSICAL_TIME,
                  "time_label": model.chart.time_name},
        radicand_floor=settings["radicand_floor"],
    ), h


def hamiltonian_initial(model, h, values, binding=None, t0=0.0):
    """Positions copied from the jets, momenta evaluated from their jet expressions."""
    chart = model.chart
    env = _env(chart, model.parameter_binding(binding), values, t0)
    momenta = model.system.momenta()
    out = {}
    for q, p in h.pairs:
        out[q.name] = float(values[q.name])
        out[p.name] = _value(momenta[(p.base, p.order)], chart, env)
    if h.action is not None:
        out[h.action.name] = float(values[h.action.name])
    return out


# -- reduced description -----------------------------------------------------

def reduced_flow(model, binding=None, settings=None, co_integrate_time=True):
    """Contact Hamilton equations of the reduced system plus the rho (and clock) readouts."""
    settings = merged_settings(settings)
    result = model.reduction
    chart = result.reduced_chart
    extra = readouts(result)
    if not co_integrate_time:
        extra = [row for row in extra if row.symbol.name != "t"]
    parameterization = REPARAMETERIZED if result.symmetry.reparameterizes else PHYSICAL_TIME
    return compile_system(
        reduced_equations_of_motion(result), binding=model.parameter_binding(binding), chart=chart,
        readouts=extra,
        metadata={"model": model.name, "flow": "reduced", "parameterization": parameterization,
                  "time_label": chart.time_name, "degree": float(result.symmetry.degree)},
        radicand_floor=settings["radicand_floor"],
    )


def mapped_initial(model, values, binding=None, t0=0.0):
    """Reduced initial data (chi jets, unscaled jets, S, pi, rho, clock) from full jets."""
    result = model.reduction
    chart = model.chart
    env = _env(chart, model.parameter_binding(binding), values, t0)
    mapping, rho_value = full_to_reduced_map(result)
    out = {symbol.name: _value(expression, chart, env) for symbol, expression in mapping.items()}
    out["rho"] = _value(rho_value, chart, env)
    if result.symmetry.reparameterizes:
        out["t"] = t0
    logger.debug(f"{model.name}: mapped initial data {out}")
    return out


# -- evaluation along trajectories --------------------------------------------

def _tape(expressions, system, binding, chart):
    lapse = chart.lapse_jets() if chart is not None else {}
    expressions = [substitute(e, lapse) if lapse else e for e in expressions]
    by_name = dict(binding or {})
    states = set(system.states)
    constants = {}
    for e in expressions:
        for s in e.free_symbols:
            if s not in states and s.name in by_name:
                constants[s] = float(by_name[s.name])
    return Tape(expressions, system.states, time=system.time, constants=constants)


def evaluate_at(expressions, system, t, y, binding=None, chart=None):
    return _tape(expressions, system, binding, chart)(t, np.asarray(y, dtype=float))


def evaluate_along(expressions, trajectory, system, binding=None, chart=None):
    """Rows of expression values, one per sample; inputs are the states of the compiled ``system``."""
    tape = _tape(expressions, system, binding, chart)
    if not len(trajectory):
        return np.zeros((0, len(expressions)))
    return np.array([tape(t, y) for t, y in zip(trajectory.times, trajectory.states)])


def divergence(system, t, y, step=1e-6):
    """Central-difference divergence of the vector field at (t, y); step is step*(1 + |y_i|)."""
    y = np.asarray(y, dtype=float)
    total = 0.0
    for i in range(y.size):
        h = step * (1.0 + abs(y[i]))
        up, down = y.copy(), y.copy()
        up[i] += h
        down[i] -= h
        total += (system.rhs(t, up)[i] - system.rhs(t, down)[i]) / (2 * h)
    return total
