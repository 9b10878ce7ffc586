import logging

from expr import add, mul, power, substitute
from mech import LagrangianSystem
from reduce.errors import PromotionError, SymmetryError
from reduce.symmetry import ScalingSymmetry, solve_weights, verify_scaling_symmetry

logger = logging.getLogger(__name__)


def _fresh_name(chart, preferred, fallback):
    taken = set(chart.orders) | set(chart.parameter_names) | {chart.time_name}
    if chart.contact:
        taken.add(chart.action_name)
    for name in (preferred, fallback):
        if name not in taken:
            return name
    raise PromotionError(f"No free coordinate name among '{preferred}', '{fallback}'")


def promote_couplings(system, params):
    """Replace each coupling constant c by the velocity of a new constant-velocity coordinate z_c."""
    chart = system.chart
    params = list(params)
    if not params:
        raise PromotionError("No couplings to promote")
    missing = [p for p in params if p not in chart.parameters or chart.parameters[p] not in system.lagrangian.free_symbols]
    if missing:
        raise PromotionError(f"Couplings {missing} do not appear in the Lagrangian of '{system.name}'")

    coordinates = dict(chart.orders)
    names = {}
    for p in params:
        names[p] = _fresh_name(chart, f"z{p}", f"z_{p}")
        coordinates[names[p]] = 1
    new_chart = chart.replace(
        coordinates=coordinates,
        parameters=tuple(n for n in chart.parameter_names if n not in params),
        constant_velocity=tuple(chart.constant_velocity) + tuple(names.values()),
        name=f"{chart.name}-promoted",
    )
    rules = {chart.parameters[p]: new_chart.jet(names[p], 1) for p in params}
    promoted = LagrangianSystem(new_chart, substitute(system.lagrangian, rules), name=f"{system.name}-promoted")
    logger.info(f"Promoted couplings {params} of '{system.name}' to velocities {list(names.values())}")
    return promoted


def promote_energy(system, sym, sign=1):
    """
    Add sign * z'^lam to L with z unscaled, so weight(z') = -B.  The balance
    lam * weight(z') = Lambda has the single solution lam = Lambda / -B; the
    promoted Lagrangian is then re-solved for its weights and must give back
    the same B and Lambda.  Returns the promoted system, lam and the symmetry
    carried over to the extended chart.
    """
    if not sym.reparameterizes:
        raise PromotionError("Energy promotion needs a symmetry that rescales time (B != 0)")
    velocity_weight = -sym.B
    lam = sym.degree / velocity_weight
    if lam == 0:
        raise PromotionError("No exponent balances the energy term")
    chart = system.chart
    name = _fresh_name(chart, "z", "zE")
    coordinates = dict(chart.orders)
    coordinates[name] = 1
    new_chart = chart.replace(coordinates=coordinates, name=f"{chart.name}-energy")
    term = mul(1 if sign >= 0 else -1, power(new_chart.jet(name, 1), lam))
    promoted = LagrangianSystem(new_chart, add(system.lagrangian, term), name=f"{system.name}-energy")
    try:
        balanced = solve_weights(promoted, sym.coordinate, A=sym.A, fixed=sym.weights).member(B=sym.B)
    except SymmetryError as e:
        raise PromotionError(f"The energy term {term} breaks the weight balance: {e}") from e
    if balanced.particular["Lambda"] != sym.degree:
        raise PromotionError(f"The energy term {term} changes the degree to {balanced.particular['Lambda']}")
    weights = dict(sym.weights)
    weights[name] = 0
    carried = ScalingSymmetry(sym.coordinate, sym.A, sym.B, sym.degree, weights)
    logger.info(f"Promoted the energy of '{system.name}' to {term} (exponent {lam})")
    return promoted, lam, carried


def promoted_symmetry(system, coordinate, A, B=None):
    """
    Re-solve the weight balance of a coupling-promoted system with the weights
    of the promoted coordinates left free.  The result is a family; the member
    with the given B is taken, or the time-rescaling one (B + Lambda = 1) when
    B is None.  Returns (symmetry, family).
    """
    promoted = tuple(sorted(system.chart.constant_velocity))
    if not promoted:
        raise PromotionError(f"'{system.name}' has no promoted couplings")
    family = solve_weights(system, coordinate, A=A, unknown_coordinates=promoted)
    member = family.member(B=B) if B is not None else family.reparameterizing()
    sym = member.symmetry(coordinate, A)
    verdict = verify_scaling_symmetry(system, sym)
    if not verdict:
        raise SymmetryError(f"Solved scaling of '{system.name}' does not hold: {verdict.equivalence.verdict.value}")
    logger.info(f"Promoted '{system.name}': {len(family.nullspace)}-parameter family, picked B={sym.B}, "
                f"Lambda={sym.degree}, weights {dict(sym.weights)}")
    return sym, family
