"""
Trajectory-level comparisons between descriptions of the same dynamics:
full versus reduced, the two reduction routes, energy promotion and
symplectification.
"""

import logging
import math

import numpy as np

from integrate import compile_system
from reduce import (
    CHI, RHO, full_to_reduced_map, reduced_equations_of_motion, solve_weights, symplectic_row_checks, symplectify,
)
from verify.numeric import evaluate_along, full_flow, mapped_initial, reduced_flow, run, sample_grid
from verify.report import SYMBOLIC, CheckResult

logger = logging.getLogger(__name__)


def _scaled(tolerance, reference):
    reference = np.asarray(reference, dtype=float)
    return tolerance * max(1.0, float(np.max(np.abs(reference)))) if reference.size else tolerance


def _compare(prefix, observed, expected, tolerance, anchor):
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return CheckResult.numeric(prefix, observed - expected, _scaled(tolerance, expected), reference=expected,
                               anchor=anchor)


def cross_check_full_vs_reduced(model, values=None, binding=None, horizon=None, settings=None, tolerance=1e-6,
                                t0=0.0):
    """
    Integrate the full and the reduced system from mapped initial data and
    compare every reduced column with its expression in the full jets.
    Reparameterized models run the reduced side first (in tau, with the
    co-integrated clock) and sample the full run at the clock values.
    """
    settings = dict(settings or {})
    binding = model.parameter_binding(binding)
    values = model.initial_values() if values is None else values
    horizon = model.horizon if horizon is None else horizon
    result = model.reduction

    full = full_flow(model, binding, settings)
    reduced = reduced_flow(model, binding, settings)
    y_full = full.initial_state(values)
    y_reduced = reduced.initial_state(mapped_initial(model, values, binding, t0))

    if result.symmetry.reparameterizes:
        reduced_run = run(reduced, y_reduced, t0, t0 + horizon, settings)
        clock = t0 + reduced_run.column("t") - reduced_run.column("t")[0]
        full_run = run(full, y_full, t0, float(clock[-1]), settings, t_eval=clock)
    else:
        grid = sample_grid(t0, t0 + horizon, settings.get("samples", 200))
        reduced_run = run(reduced, y_reduced, t0, t0 + horizon, settings, grid)
        full_run = run(full, y_full, t0, t0 + horizon, settings, grid)

    mapping, rho_value = full_to_reduced_map(result)
    names, expressions = [], []
    for symbol in reduced.states:
        if symbol in mapping:
            names.append(symbol.name)
            expressions.append(mapping[symbol])
        elif symbol.name == RHO:
            names.append(symbol.name)
            expressions.append(rho_value)
    mapped = evaluate_along(expressions, full_run, full, binding, model.chart)

    checks = []
    for i, name in enumerate(names):
        checks.append(_compare(f"cross-check:{name}", reduced_run.column(name), mapped[:, i], tolerance,
                               "reduced dynamics reproduce the unscaled dynamics"))
    logger.info(f"{model.name}: cross-checked {len(names)} reduced columns on {len(full_run)} samples")
    return checks


def check_reduced_route(model, values=None, binding=None, horizon=None, settings=None, tolerance=1e-6, t0=0.0):
    """Euler-Lagrange flow of L_hat in the log coordinate against the Herglotz flow of L^H, both in tau."""
    binding = model.parameter_binding(binding)
    values = model.initial_values() if values is None else values
    horizon = model.horizon if horizon is None else horizon
    result = model.reduction
    reduced_chart = result.reduced_chart

    rho_flow = compile_system(result.rho_system.solved(), binding=binding, chart=result.rho_chart,
                              metadata={"model": model.name, "flow": "rho"})
    herglotz_flow = compile_system(result.herglotz_system.solved(), binding=binding, chart=reduced_chart,
                                   metadata={"model": model.name, "flow": "herglotz"})

    start = mapped_initial(model, values, binding, t0)
    rho_start = {}
    for s in rho_flow.states:
        if s.base == RHO:
            rho_start[s.name] = start[RHO] if s.order == 0 else start[reduced_chart.jet(CHI, s.order - 1).name]
        else:
            rho_start[s.name] = start[s.name]

    grid = sample_grid(t0, t0 + horizon, (settings or {}).get("samples", 200))
    rho_run = run(rho_flow, rho_flow.initial_state(rho_start), t0, t0 + horizon, settings, grid)
    herglotz_run = run(herglotz_flow, herglotz_flow.initial_state(start), t0, t0 + horizon, settings, grid)

    checks = []
    anchor = "Lagrangian and Herglotz routes agree"
    for s in herglotz_flow.states:
        if s == reduced_chart.action:
            expected = evaluate_along([result.S_rho], rho_run, rho_flow, binding, result.rho_chart)[:, 0]
        elif s.base == CHI:
            expected = rho_run.column(result.rho_chart.jet(RHO, s.order + 1).name)
        else:
            expected = rho_run.column(s.name)
        checks.append(_compare(f"reduced-route:{s.name}", herglotz_run.column(s.name), expected, tolerance, anchor))
    return checks


def check_energy_promotion(model, base_model, binding=None, horizon=None, settings=None, tolerances=None, t0=0.0):
    """
    The promoted exponent from the weight balance of the base system, the
    conservation of the promoted velocity, and the orbit of the promoted
    reduced run (after time reconstruction) against the base system at the
    matching energy.
    """
    tolerances = {"velocity": 1e-8, "orbit": 1e-4, **dict(tolerances or {})}
    horizon = model.horizon if horizon is None else horizon
    binding = model.parameter_binding(binding)
    sym = model.symmetry
    checks = []

    solution = solve_weights(base_model.system, sym.coordinate, A=sym.A)
    base_sym = solution.symmetry(sym.coordinate, sym.A)
    exponent = base_sym.degree / -base_sym.B
    declared = model.metadata.get("energy_exponent")
    exact = declared is not None and exponent == declared
    checks.append(CheckResult("energy-promotion:exponent", SYMBOLIC, 0.0 if exact else math.inf,
                              0.0 if exact else math.inf, 0.0, exact, "energy exponent from the weight balance",
                              f"lambda_E = {exponent}, declared {declared}"))

    velocity = [name for name in model.chart.orders if name not in base_model.chart.orders]
    values = model.initial_values()
    full = full_flow(model, binding, settings)
    full_run = run(full, full.initial_state(values), t0, t0 + horizon, settings, every_step=True)
    for name in velocity:
        column = full_run.column(f"{name}'")
        checks.append(CheckResult.numeric(f"energy-promotion:{name}'-conserved", column - column[0],
                                          tolerances["velocity"], anchor="promoted velocity is conserved"))

    reduced = reduced_flow(model, binding, settings)
    reduced_run = run(reduced, reduced.initial_state(mapped_initial(model, values, binding, t0)), t0,
                      t0 + horizon, settings)
    clock = t0 + reduced_run.column("t") - reduced_run.column("t")[0]
    base_values = base_model.initial_values(
        enforce_zero_energy=False,
        overrides={k: v for k, v in values.items() if k in {s.name for s in _jets(base_model.chart)}},
    )
    base_flow = full_flow(base_model, base_model.parameter_binding(), settings)
    base_run = run(base_flow, base_flow.initial_state(base_values), t0, float(clock[-1]), settings, t_eval=clock)

    scaled = np.exp(float(sym.c) * reduced_run.column(RHO))
    checks.append(_compare(f"energy-promotion:orbit-{sym.coordinate}", scaled, base_run.column(sym.coordinate),
                           tolerances["orbit"], "promoted orbit matches the base orbit"))
    for name in base_model.chart.coordinates:
        if name != sym.coordinate and name in reduced.columns:
            checks.append(_compare(f"energy-promotion:orbit-{name}", reduced_run.column(name), base_run.column(name),
                                   tolerances["orbit"], "promoted orbit matches the base orbit"))
    return checks


def _jets(chart):
    for base in chart.coordinates:
        yield from chart.jets(base)


def check_symplectification(model, values=None, binding=None, horizon=1.0, settings=None, tolerance=1e-9, t0=0.0):
    """
    Hamilton rows of y*H^c restricted to the contact variables equal the
    contact rows, symbolically and along fixed-step runs with identical settings.
    """
    binding = model.parameter_binding(binding)
    values = model.initial_values() if values is None else values
    result = model.reduction
    symplectic = symplectify(result)
    checks = [
        CheckResult.symbolic(f"symplectification:row:{name}", outcome,
                             anchor="symplectified rows restrict to contact rows")
        for name, outcome in sorted(symplectic_row_checks(result, symplectic).items())
    ]

    fixed = dict(settings or {})
    fixed["method"] = "rk4"
    chart = result.reduced_chart
    contact_flow = compile_system(reduced_equations_of_motion(result), binding=binding, chart=chart,
                                  metadata={"model": model.name, "flow": "contact"})
    symplectic_flow = compile_system(symplectic.system.hamilton_equations(), binding=binding, chart=chart,
                                     metadata={"model": model.name, "flow": "symplectic"})
    start = mapped_initial(model, values, binding, t0)
    lifted = {name: value for name, value in start.items()}
    lifted[symplectic.y.name] = 1.0
    for p, P in symplectic.momentum_map.items():
        lifted[P.name] = start[p.name]

    grid = sample_grid(t0, t0 + horizon, fixed.get("samples", 200))
    contact_run = run(contact_flow, contact_flow.initial_state(start), t0, t0 + horizon, fixed, grid)
    symplectic_run = run(symplectic_flow, symplectic_flow.initial_state(lifted), t0, t0 + horizon, fixed, grid)
    y = symplectic_run.column(symplectic.y.name)
    for s in contact_flow.states:
        if s in symplectic.momentum_map:
            restricted = symplectic_run.column(symplectic.momentum_map[s].name) / y
        else:
            restricted = symplectic_run.column(s.name)
        checks.append(_compare(f"symplectification:flow:{s.name}", restricted, contact_run.column(s.name), tolerance,
                               "symplectic flow restricts to the contact flow"))
    return checks
