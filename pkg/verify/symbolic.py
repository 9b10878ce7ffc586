"""
Symbolic identity suite: every check is an equivalence between two
expressions (or of a residual with zero) decided by ``expr.equivalent``.
"""

import logging

from expr import ZERO, ExpressionError, add, equivalent, mul, substitute
from mech import LagrangianSystem, MechanicsError, legendre_residual
from reduce import (
    ReductionError, action_identity, action_rate_residual, chi_equation, chi_residual, herglotz_chi_residual,
    pullback_consistency, unscaled_residuals, verify_scaling_symmetry,
)
from verify.report import SYMBOLIC, CheckResult

logger = logging.getLogger(__name__)

# scalar curvature of flat FLRW in the volume variable at unit lapse
RICCI = "2*(v''/v - v'^2/(3*v^2))"


def _zero(name, residual, anchor, settings):
    return CheckResult.symbolic(name, equivalent(residual, ZERO, **settings), anchor=anchor)


def _guarded(name, anchor, build):
    try:
        return build()
    except (ExpressionError, MechanicsError, ReductionError) as e:
        logger.error(f"Check {name} could not be built: {e}")
        return [CheckResult.failure(name, SYMBOLIC, e, anchor)]


def reference_suite(model, settings=None):
    """Every catalogued reference expression against its derived object."""
    settings = dict(settings or {})
    checks = []
    seen = {}
    for ref, outcome in model.reference_checks(**settings):
        name = f"reference:{ref.target}"
        seen[name] = seen.get(name, 0) + 1
        if seen[name] > 1:
            name = f"{name}#{seen[name]}"
        checks.append(CheckResult.symbolic(name, outcome, anchor=ref.anchor))
    return checks


def reduction_identities(model, settings=None):
    settings = dict(settings or {})
    result = model.reduction
    checks = [
        _zero("symbolic:action-identity", action_identity(result), "S equals the scaled rho momentum", settings),
        _zero("symbolic:chi-equation", chi_residual(result), "rho equation is the action condition", settings),
        _zero("symbolic:herglotz-chi", herglotz_chi_residual(result), "chi equation of L^H defines S", settings),
        _zero("symbolic:action-rate", action_rate_residual(result), "contact S row equals L^H", settings),
    ]
    for base, residual in sorted(unscaled_residuals(result).items()):
        checks.append(_zero(f"symbolic:unscaled:{base}", residual, "unscaled equations are preserved", settings))
    if result.contact_H_lagrangian is not None:
        checks.append(CheckResult.symbolic(
            "symbolic:route-agreement", equivalent(result.contact_H, result.contact_H_lagrangian, **settings),
            anchor="Lagrangian and Hamiltonian routes give the same H^c"))
    for name, outcome in sorted(pullback_consistency(result, **settings).items()):
        checks.append(CheckResult.symbolic(f"symbolic:pullback:{name}", outcome,
                                           anchor="reduced rows are the pushed-forward full flow"))
    return checks


def lapse_consistency(lapse_model, proper_model, settings=None):
    """
    At N = 1 the lapse model reduces to the proper-time one: identical chi
    equations, and actions that differ by lam*chi^3/(9*pi*G).
    """
    settings = dict(settings or {})
    lapse_result = lapse_model.reduction
    proper_result = proper_model.reduction
    jets = lapse_result.reduced_chart.lapse_jets()
    chi_lapse = substitute(chi_equation(lapse_result).rhs, jets)
    chi_proper = chi_equation(proper_result).rhs
    shift = proper_result.reduced_chart.parse("lam*chi^3/(9*pi*G)")
    action_gap = add(substitute(lapse_result.S_expr, jets), mul(-1, proper_result.S_expr), shift)
    return [
        CheckResult.symbolic("lapse:chi-equation", equivalent(chi_lapse, chi_proper, **settings),
                             anchor="unit lapse reproduces the proper-time chi equation"),
        _zero("lapse:action-shift", action_gap, "unit-lapse action differs by a total derivative", settings),
    ]


def ricci_oracle(model, settings=None):
    """
    The FLRW Lagrangian equals v*(R - lam*R^2)/(16*pi*G) plus the scalar
    sector up to a total derivative: the difference has vanishing
    Euler-Lagrange expressions.
    """
    settings = dict(settings or {})
    chart = model.chart
    potential = model.metadata.get("potential", "phi^2/2")
    curvature = chart.parse(f"v*(({RICCI}) - lam*({RICCI})^2)/(16*pi*G)")
    scalar = chart.parse(f"v*(phi''^2/2 + phi'^2/2 - ({potential}))")
    difference = LagrangianSystem(chart, add(curvature, scalar, mul(-1, model.system.lagrangian)),
                                  name=f"{model.name}-ricci-difference")
    return [
        _zero(f"ricci:{base}", residual, "curvature form differs by a total derivative", settings)
        for base, residual in sorted(difference.euler_lagrange().items())
    ]


def symbolic_residual_suite(model, settings=None, companions=None):
    """
    Every symbolic identity that applies to the model.  ``companions`` maps
    role -> ModelDescriptor for checks that relate two models: "proper-time"
    enables the lapse consistency check, run on "unit-lapse" when given.
    """
    settings = dict(settings or {})
    companions = dict(companions or {})
    system = model.system
    checks = []
    for (base, level), residual in sorted(system.recursion_residuals().items()):
        checks.append(_zero(f"symbolic:recursion:{base}:{level}", residual, "momenta satisfy the recursion", settings))
    if not model.chart.constant_velocity:
        checks.extend(_guarded("symbolic:legendre", "Hamiltonian pulls back to the energy", lambda: [
            _zero("symbolic:legendre", legendre_residual(system), "Hamiltonian pulls back to the energy", settings)
        ]))
    checks.extend(_guarded("reference", "catalogued expressions", lambda: reference_suite(model, settings)))
    if model.symmetry is not None:
        checks.extend(_guarded("symbolic:symmetry", "declared scaling symmetry", lambda: [CheckResult.symbolic(
            "symbolic:symmetry", verify_scaling_symmetry(system, model.symmetry, **settings).equivalence,
            anchor="declared scaling symmetry")]))
    if model.reducible:
        checks.extend(_guarded("symbolic:reduction", "reduction identities",
                               lambda: reduction_identities(model, settings)))
    if "proper-time" in companions:
        unit = companions.get("unit-lapse", model)
        checks.extend(_guarded("lapse", "unit lapse consistency",
                               lambda: lapse_consistency(unit, companions["proper-time"], settings)))
    if model.metadata.get("ricci_oracle"):
        checks.extend(_guarded("ricci", "curvature form", lambda: ricci_oracle(model, settings)))
    logger.info(f"{model.name}: {len(checks)} symbolic checks, {len([c for c in checks if not c.passed])} failing")
    return checks
