"""
Identities that hold along any numerically integrated flow: the Herglotz
condition, the contact decay law of H, symplectic energy conservation and the
phase-space divergence of the vector field.
"""

import logging

from expr import add, differentiate, mul, substitute
from integrate import compile_system
from reduce import reduced_equations_of_motion
from verify.numeric import (
    divergence, evaluate_at, evaluate_along, hamiltonian_flow, hamiltonian_initial, mapped_initial,
)
from verify.report import CheckResult

logger = logging.getLogger(__name__)


def herglotz_rate_residual(h, lagrangian_system):
    """
    dS/dt from the contact rows minus L^H, with each top velocity of L^H
    replaced by the row that moves the jet below it.  Returns (residual, rate).
    """
    chart = lagrangian_system.chart
    rates = {row.symbol: row.rhs for row in h.contact_hamilton_equations()}
    velocities = {}
    for base in chart.varied:
        k = chart.order(base)
        velocities[chart.jet(base, k)] = rates[chart.jet(base, k - 1)]
    L = substitute(lagrangian_system.L, velocities)
    rate = rates[h.action]
    return add(rate, mul(-1, L)), rate


def check_herglotz_condition(h, lagrangian_system, trajectory, system, binding=None, tolerance=1e-9,
                             name="herglotz-condition"):
    """|dS/dtau - L^H| along a contact trajectory."""
    residual, rate = herglotz_rate_residual(h, lagrangian_system)
    values = evaluate_along([residual, rate], trajectory, system, binding, lagrangian_system.chart)
    return CheckResult.numeric(name, values[:, 0], tolerance, reference=values[:, 1],
                               anchor="action rate equals the Herglotz Lagrangian")


def contact_identity_residual(h):
    """dH/dtau along the contact flow plus H * dH/dS; explicit time dependence excluded."""
    H = h.hamiltonian
    terms = [mul(differentiate(H, row.symbol), row.rhs) for row in h.contact_hamilton_equations()]
    return add(*terms, mul(H, differentiate(H, h.action)))


def check_contact_identity(h, trajectory, system, binding=None, chart=None, tolerance=1e-8,
                           surface_tolerance=1e-7, name="contact-identity"):
    """
    The decay law dH/dtau = -H dH/dS along the trajectory and, when the run
    starts on H = 0, the sup of |H| (the zero surface is invariant).
    """
    values = evaluate_along([contact_identity_residual(h), h.hamiltonian], trajectory, system, binding, chart)
    checks = [CheckResult.numeric(name, values[:, 0], tolerance, anchor="contact Hamiltonian decay law")]
    if len(values) and abs(values[0, 1]) <= surface_tolerance:
        checks.append(CheckResult.numeric(f"{name}:zero-surface", values[:, 1], surface_tolerance,
                                          anchor="H = 0 is preserved"))
    return checks


def check_energy_conservation(model, trajectory, system, binding=None, tolerance=1e-8, name="energy-conservation"):
    """|E_L(t) - E_L(0)| on a symplectic run."""
    values = evaluate_along([model.system.energy()], trajectory, system, binding, model.chart)[:, 0]
    drift = values - values[0] if len(values) else values
    return CheckResult.numeric(name, drift, tolerance, anchor="energy of a time-independent Lagrangian",
                               detail=f"E(0) = {values[0]:.17g}" if len(values) else "")


def contact_divergence_law(h):
    """The divergence of the contact vector field: -(n + 1) dH/dS for n canonical pairs."""
    return mul(-(len(h.pairs) + 1), differentiate(h.hamiltonian, h.action))


def divergence_check(model, values=None, binding=None, settings=None, step=1e-6, tolerance=1e-6, t0=0.0):
    """
    Central-difference divergence at the initial data: zero for the symplectic
    image, and -(n + 1) dH/dS for contact systems (reported alongside).
    """
    checks = []
    values = model.initial_values() if values is None else values
    binding = model.parameter_binding(binding)

    if not model.chart.constant_velocity:
        system, h = hamiltonian_flow(model, binding, settings)
        y0 = system.initial_state(hamiltonian_initial(model, h, values, binding, t0))
        measured = divergence(system, t0, y0, step)
        if h.is_contact:
            expected = float(evaluate_at([contact_divergence_law(h)], system, t0, y0, binding, model.chart)[0])
            checks.append(CheckResult.numeric(
                "divergence:contact-law", [measured - expected], tolerance, anchor="phase volume contracts",
                detail=f"div = {measured:.6g}, -(n+1) dH/dS = {expected:.6g}"))
        else:
            checks.append(CheckResult.numeric("divergence:symplectic", [measured], tolerance,
                                              anchor="phase volume is preserved", detail=f"div = {measured:.6g}"))

    if model.reducible:
        result = model.reduction
        h = result.reduced_hamiltonian
        system = compile_system(reduced_equations_of_motion(result), binding=binding, chart=result.reduced_chart)
        y0 = system.initial_state(mapped_initial(model, values, binding, t0))
        measured = divergence(system, t0, y0, step)
        expected = float(evaluate_at([contact_divergence_law(h)], system, t0, y0, binding, result.reduced_chart)[0])
        checks.append(CheckResult.numeric(
            "divergence:reduced-contact-law", [measured - expected], tolerance, anchor="phase volume contracts",
            detail=f"div = {measured:.6g}, -(n+1) dH/dS = {expected:.6g}"))
    logger.info(f"{model.name}: divergence checks {[c.detail for c in checks]}")
    return checks
