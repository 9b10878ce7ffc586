"""
Multiplier formulation of a first-order Herglotz system.

The action constraint dS/dt = L is imposed with a multiplier mu, so the
Euler-Lagrange equations carry the weight (1 + mu):

    d/dt[(1 + mu) dL/dq'] = (1 + mu) dL/dq,    dmu/dt = -(1 + mu) dL/dS,    dS/dt = L

with mu(0) = 0.  Its (q, q', S) flow must coincide with the D_L-form
Herglotz equations.
"""

import logging

from expr import ONE, add, differentiate, mul
from integrate import compile_system
from mech import total_derivative_dT
from mech.inversion import linear_split, solve_linear
from mech.lagrangian import EquationRow
from mech.errors import SingularSystemError
from models.errors import ModelError
from verify.numeric import mapped_initial, run, sample_grid
from verify.report import CheckResult

logger = logging.getLogger(__name__)

MULTIPLIER = "mult"


def multiplier_rows(system, name=MULTIPLIER):
    chart = system.chart
    if not chart.contact:
        raise ModelError(f"'{system.name}' is not a contact system")
    bases = list(chart.varied)
    if any(chart.order(b) != 1 for b in bases):
        raise ModelError(f"'{system.name}' is not first order")
    mu = chart.auxiliary(name)
    S = chart.action
    L = system.L
    weight = add(ONE, mu)
    mu_rate = mul(-1, weight, differentiate(L, S))

    residuals = []
    for base in bases:
        partials = system.partials(base)
        P = partials[1]
        along = add(total_derivative_dT(P, chart), mul(differentiate(P, S), L))
        residuals.append(add(mul(mu_rate, P), mul(weight, along), mul(-1, weight, partials[0])))

    tops = [chart.jet(b, 2) for b in bases]
    matrix, rhs = [], []
    for residual in residuals:
        split = linear_split(residual, tops)
        if split is None:
            raise SingularSystemError("Multiplier equations are not linear in the accelerations")
        coefficients, remainder = split
        matrix.append(coefficients)
        rhs.append(mul(-1, remainder))
    solution = solve_linear(matrix, rhs)

    rows = [EquationRow(top, value, (chart.jet(b, 0), chart.jet(b, 1))) for b, top, value in zip(bases, tops, solution)]
    rows.append(EquationRow(S, L))
    rows.append(EquationRow(mu, mu_rate))
    return rows


def first_order_contact(model, values=None, binding=None, t0=0.0):
    """(system, initial values) of the first-order Herglotz description of a model."""
    values = model.initial_values() if values is None else values
    chart = model.chart
    if chart.contact and all(chart.order(b) == 1 for b in chart.varied):
        return model.system, dict(values)
    if model.reducible:
        herglotz = model.reduction.herglotz_system
        if all(herglotz.chart.order(b) == 1 for b in herglotz.chart.varied):
            return herglotz, mapped_initial(model, values, binding, t0)
    raise ModelError(f"Model '{model.name}' has no first-order contact description")


def multiplier_check(model, values=None, binding=None, horizon=10.0, settings=None, tolerance=1e-6, t0=0.0):
    """
    Integrate the multiplier system and the D_L Herglotz system from the same
    data and compare (q, q', S) on a shared grid.
    """
    binding = model.parameter_binding(binding)
    system, initial = first_order_contact(model, values, binding, t0)
    chart = system.chart
    herglotz = compile_system(system.solved(), binding=binding, chart=chart,
                              metadata={"model": model.name, "flow": "herglotz"})
    weighted = compile_system(multiplier_rows(system), binding=binding, chart=chart,
                              metadata={"model": model.name, "flow": "multiplier"})

    grid = sample_grid(t0, t0 + horizon, (settings or {}).get("samples", 200))
    reference = run(herglotz, herglotz.initial_state(initial), t0, t0 + horizon, settings, grid)
    start = dict(initial)
    start[MULTIPLIER] = 0.0
    trial = run(weighted, weighted.initial_state(start), t0, t0 + horizon, settings, grid)

    checks = []
    for column in reference.columns:
        deviation = reference.column(column) - trial.column(column)
        checks.append(CheckResult.numeric(f"multiplier:{column}", deviation, tolerance,
                                          reference=reference.column(column),
                                          anchor="multiplier and D_L formulations agree"))
    logger.info(f"{model.name}: multiplier oracle compared {len(checks)} columns over {horizon}")
    return checks
