"""
Contact reduction of a higher-order Lagrangian system along a scaling symmetry.

Lagrangian side: write Q = exp(c*rho), reparameterize time when the symmetry
scales it, factor L_hat = exp(rho) * f(no rho), form the generalized action S
and the Herglotz Lagrangian f - chi*S on the reduced contact chart.
Hamiltonian side: Legendre-transform L_hat and divide by exp(rho) after
rescaling the momenta.  Both routes must give the same contact Hamiltonian.
"""

import logging
from dataclasses import dataclass, field

from expr import (
    ZERO, add, differentiate, make_exp, make_log, mul, power, simplify, substitute,
)
from mech import HamiltonianSystem, JetChart, LagrangianSystem, legendre_ostrogradsky, total_derivative_dT
from mech.errors import MechanicsError
from mech.inversion import invert
from mech.lagrangian import EquationRow
from reduce.errors import FactorizationError, ReductionError

logger = logging.getLogger(__name__)

RHO = "rho"
CHI = "chi"


@dataclass
class Factorization:
    rho_chart: JetChart
    rho_system: LagrangianSystem
    L_hat: object
    f: object
    substitution: dict


@dataclass
class ReductionResult:
    system: LagrangianSystem
    symmetry: object
    rho_chart: JetChart
    rho_system: LagrangianSystem
    L_hat: object
    f: object
    S_rho: object
    reduced_chart: JetChart
    to_chi: dict
    f_chi: object
    S_expr: object
    herglotz_L: object
    herglotz_system: LagrangianSystem
    contact_H: object
    contact_H_lagrangian: object
    reduced_hamiltonian: HamiltonianSystem
    momentum_rules: dict
    reduced_to_full: dict = field(default_factory=dict)

    @property
    def exponent(self):
        return self.symmetry.exponent

    @property
    def order(self):
        return self.system.chart.order(self.symmetry.coordinate)

    @property
    def action(self):
        return self.reduced_chart.action

    def chi(self, a=0):
        return self.reduced_chart.jet(CHI, a)

    def reduced_equations(self):
        return reduced_equations_of_motion(self)


def _rho_chart(system, sym):
    chart = system.chart
    if chart.contact:
        raise ReductionError("Reduction starts from a symplectic (action-free) Lagrangian")
    if chart.constant_velocity:
        raise ReductionError(
            f"Coupling-promoted coordinates {sorted(chart.constant_velocity)} carry weight; reduce before promoting"
        )
    if sym.coordinate not in chart.orders:
        raise ReductionError(f"'{sym.coordinate}' is not a coordinate of '{system.name}'")
    if sym.reparameterizes and chart.lapse_name is not None:
        raise ReductionError("A prescribed lapse cannot be combined with a time-scaling symmetry")
    for base, weight in sym.weights.items():
        if weight != 0:
            raise ReductionError(f"Only the scaled coordinate may carry weight, '{base}' has {weight}")
    if RHO in chart.orders or CHI in chart.orders:
        raise ReductionError(f"Coordinate names '{RHO}' and '{CHI}' are reserved for the reduction")
    coordinates = {}
    for base, k in chart.orders.items():
        coordinates[RHO if base == sym.coordinate else base] = k
    lapse = (chart.lapse_name, str(chart.lapse_expression)) if chart.lapse_name else None
    return JetChart(
        coordinates, parameters=chart.parameter_names, time="tau" if sym.reparameterizes else chart.time_name,
        lapse=lapse, name=f"{chart.name}-rho",
    )


def reparameterize_and_factor(system, sym):
    """Rewrite L dt as L_hat dtau in the log coordinate and split off exp(rho)."""
    chart = system.chart
    rho_chart = _rho_chart(system, sym)
    rho = rho_chart.jet(RHO)
    slow = make_exp(mul(-sym.b, rho))
    k_q = chart.order(sym.coordinate)

    rules = {}
    value = make_exp(mul(sym.c, rho))
    for a in range(k_q + 1):
        rules[chart.jet(sym.coordinate, a)] = value
        value = mul(slow, total_derivative_dT(value, rho_chart))
    if sym.reparameterizes:
        for base in chart.coordinates:
            if base == sym.coordinate:
                continue
            value = rho_chart.jet(base)
            for a in range(chart.order(base) + 1):
                rules[chart.jet(base, a)] = value
                value = mul(slow, total_derivative_dT(value, rho_chart))

    L_hat = mul(substitute(system.L, rules), make_exp(mul(sym.b, rho)))
    f = simplify(mul(L_hat, make_exp(mul(-1, rho))))
    if rho in f.free_symbols:
        raise FactorizationError(f)
    L_hat = mul(make_exp(rho), f)
    rho_system = LagrangianSystem(rho_chart, L_hat, name=f"{system.name}-rho")
    logger.info(f"Factored '{system.name}': f = {f}")
    return Factorization(rho_chart, rho_system, L_hat, f, rules)


def generalized_action(f, rho_chart, k):
    """S = sum over a < k of (-1)^a (rho' + d)^a df/drho^(a+1), in rho variables."""
    rho_dot = rho_chart.jet(RHO, 1)

    def shifted(g):
        return add(mul(rho_dot, g), total_derivative_dT(g, rho_chart))

    terms = []
    for a in range(k):
        g = differentiate(f, rho_chart.jet(RHO, a + 1))
        for _ in range(a):
            g = shifted(g)
        terms.append(mul((-1) ** a, g))
    return add(*terms) if terms else ZERO


def _reduced_chart(system, sym, rho_chart):
    k = system.chart.order(sym.coordinate)
    coordinates = {CHI: k - 1}
    for base, order in system.chart.orders.items():
        if base != sym.coordinate:
            coordinates[base] = order
    lapse = (rho_chart.lapse_name, str(rho_chart.lapse_expression)) if rho_chart.lapse_name else None
    return JetChart(
        coordinates, parameters=rho_chart.parameter_names, contact=True, action="S", momentum_prefix="pi",
        time=rho_chart.time_name, lapse=lapse, name=f"{system.chart.name}-reduced",
        capacities={CHI: 2 * k + 1},
    )


def _to_chi_rules(rho_chart, reduced_chart):
    rules = {}
    for rho_jet in rho_chart.jets(RHO)[1:]:
        if rho_jet.order - 1 <= reduced_chart.capacity(CHI):
            rules[rho_jet] = reduced_chart.jet(CHI, rho_jet.order - 1)
    return rules


def to_chi(expression, result_or_rules):
    rules = result_or_rules.to_chi if isinstance(result_or_rules, ReductionResult) else result_or_rules
    return substitute(expression, rules)


def build_herglotz_lagrangian(f, S_rho, rho_chart, reduced_chart):
    """L^H = f - chi*S on the reduced contact chart; returns (rules, f_chi, S_expr, L^H)."""
    rules = _to_chi_rules(rho_chart, reduced_chart)
    f_chi = substitute(f, rules)
    S_expr = substitute(S_rho, rules)
    herglotz_L = add(f_chi, mul(-1, reduced_chart.jet(CHI), reduced_chart.action))
    return rules, f_chi, S_expr, herglotz_L


def hamiltonian_reduction(rho_system, reduced_chart, to_chi_rules):
    """Contact Hamiltonian H/exp(rho) with p0_rho = exp(rho) S, p_rho^(a+1) = exp(rho) pi^a_chi, p_i = exp(rho) pi_i."""
    rho_chart = rho_system.chart
    H = legendre_ostrogradsky(rho_system).hamiltonian
    scale = make_exp(rho_chart.jet(RHO))
    rules = dict(to_chi_rules)
    for base in rho_chart.varied:
        for a in range(rho_chart.order(base)):
            p = rho_chart.momentum(base, a)
            if base == RHO:
                target = reduced_chart.action if a == 0 else reduced_chart.momentum(CHI, a - 1)
            else:
                target = reduced_chart.momentum(base, a)
            rules[p] = mul(scale, target)
    contact_H = simplify(mul(substitute(H, rules), power(scale, -1)))
    if rho_chart.jet(RHO) in contact_H.free_symbols:
        raise ReductionError(f"rho does not cancel from the contact Hamiltonian: {contact_H}")
    return contact_H, rules


def _contact_pairs(chart):
    pairs = []
    for base in chart.varied:
        for a in range(chart.order(base)):
            pairs.append((chart.jet(base, a), chart.momentum(base, a)))
    return pairs


def reduce_system(system, sym):
    """Run both reduction routes and collect every derived object."""
    fact = reparameterize_and_factor(system, sym)
    k = system.chart.order(sym.coordinate)
    S_rho = generalized_action(fact.f, fact.rho_chart, k)
    reduced_chart = _reduced_chart(system, sym, fact.rho_chart)
    rules, f_chi, S_expr, herglotz_L = build_herglotz_lagrangian(fact.f, S_rho, fact.rho_chart, reduced_chart)
    herglotz_system = LagrangianSystem(reduced_chart, herglotz_L, name=f"{system.name}-herglotz")

    contact_H, momentum_rules = hamiltonian_reduction(fact.rho_system, reduced_chart, rules)
    try:
        contact_H_lagrangian = legendre_ostrogradsky(herglotz_system).hamiltonian
    except MechanicsError as e:
        logger.warning(f"Lagrangian-side contact Hamiltonian unavailable for '{system.name}': {e}")
        contact_H_lagrangian = None

    reduced_hamiltonian = HamiltonianSystem(
        _contact_pairs(reduced_chart), contact_H, action=reduced_chart.action, chart=reduced_chart,
        name=f"{system.name}-contact",
    )
    inverse = {}
    for symbol, value in fact.substitution.items():
        inverse[symbol] = substitute(value, rules)

    logger.info(f"Reduced '{system.name}': H^c = {contact_H}")
    return ReductionResult(
        system=system, symmetry=sym, rho_chart=fact.rho_chart, rho_system=fact.rho_system, L_hat=fact.L_hat,
        f=fact.f, S_rho=S_rho, reduced_chart=reduced_chart, to_chi=rules, f_chi=f_chi, S_expr=S_expr,
        herglotz_L=herglotz_L, herglotz_system=herglotz_system, contact_H=contact_H,
        contact_H_lagrangian=contact_H_lagrangian, reduced_hamiltonian=reduced_hamiltonian,
        momentum_rules=momentum_rules, reduced_to_full=inverse,
    )


def reduced_equations_of_motion(result):
    return result.reduced_hamiltonian.contact_hamilton_equations()


def chi_equation(result):
    """Solve dS/dtau = f - chi*S, with S given by its definition, for the highest chi derivative."""
    chart = result.reduced_chart
    condition = add(
        total_derivative_dT(result.S_expr, chart),
        mul(-1, result.f_chi),
        mul(result.chi(), result.S_expr),
    )
    top_order = 2 * result.order - 1
    top = chart.jet(CHI, top_order)
    rhs = invert(condition, top, ZERO)
    chain = tuple(chart.jet(CHI, a) for a in range(top_order))
    return EquationRow(top, rhs, chain)


# ---------------------------------------------------------------------------
# maps between the full and reduced descriptions


def full_to_reduced_map(result):
    """Every reduced variable (plus the rho and time readouts) as an expression in the full jets."""
    sym = result.symmetry
    full = result.system.chart
    reduced = result.reduced_chart
    Q = full.jet(sym.coordinate)
    slow = power(Q, sym.b / sym.c)

    mapping = {}
    rho_value = mul(make_log(Q), 1 / sym.c)
    rho_jets = [rho_value]
    k = result.order
    for _ in range(2 * k - 1):
        rho_jets.append(mul(slow, total_derivative_dT(rho_jets[-1], full)))
    for a in range(1, len(rho_jets)):
        if a - 1 <= reduced.capacity(CHI):
            mapping[reduced.jet(CHI, a - 1)] = rho_jets[a]

    for base in full.coordinates:
        if base == sym.coordinate:
            continue
        value = full.jet(base)
        for a in range(2 * full.order(base)):
            mapping[reduced.jet(base, a)] = value
            value = mul(slow, total_derivative_dT(value, full))

    mapping[reduced.action] = substitute(result.S_expr, mapping)
    momenta = result.herglotz_system.momenta()
    for base in reduced.varied:
        for a in range(reduced.order(base)):
            mapping[reduced.momentum(base, a)] = substitute(momenta[(base, a)], mapping)
    return mapping, rho_value


def pullback_consistency(result, **settings):
    """
    Differentiate every mapped reduced variable along the full Euler-Lagrange
    flow, rescale to the reduced time and compare with the reduced contact rhs.
    Returns {variable name: Equivalence}.
    """
    from expr import equivalent

    full = result.system
    mapping, _ = full_to_reduced_map(result)
    slow = power(full.chart.jet(result.symmetry.coordinate), result.symmetry.b / result.symmetry.c)
    tops = {row.symbol: row.rhs for row in full.solved()}
    checks = {}
    for row in reduced_equations_of_motion(result):
        if row.symbol not in mapping:
            continue
        along_flow = substitute(total_derivative_dT(mapping[row.symbol], full.chart), tops)
        lhs = mul(slow, along_flow)
        rhs = substitute(row.rhs, mapping)
        checks[row.symbol.name] = equivalent(lhs, rhs, **settings)
    return checks


# ---------------------------------------------------------------------------
# symbolic identities of the reduction


def action_identity(result):
    """S_expr - exp(-rho) * p0_rho, in chi variables; vanishes identically."""
    p0 = result.rho_system.momenta()[(RHO, 0)]
    scaled = simplify(mul(p0, make_exp(mul(-1, result.rho_chart.jet(RHO)))))
    return add(result.S_expr, mul(-1, to_chi(scaled, result)))


def unscaled_residuals(result):
    """Per unscaled coordinate: exp(-rho)*EL_i(L_hat) minus the Herglotz residual with S replaced by its definition."""
    rho = result.rho_chart.jet(RHO)
    full_residuals = result.rho_system.euler_lagrange()
    herglotz_residuals = result.herglotz_system.euler_lagrange()
    S = result.action
    out = {}
    for base, value in full_residuals.items():
        if base == RHO:
            continue
        lhs = to_chi(simplify(mul(make_exp(mul(-1, rho)), value)), result)
        rhs = substitute(herglotz_residuals[base], {S: result.S_expr})
        out[base] = add(lhs, mul(-1, rhs))
    return out


def chi_residual(result):
    """exp(-rho)*EL_rho(L_hat) against f - chi*S_expr - dS_expr/dtau."""
    rho = result.rho_chart.jet(RHO)
    el = result.rho_system.euler_lagrange()[RHO]
    lhs = to_chi(simplify(mul(make_exp(mul(-1, rho)), el)), result)
    S_expr = result.S_expr
    rhs = add(result.f_chi, mul(-1, result.chi(), S_expr),
              mul(-1, total_derivative_dT(S_expr, result.reduced_chart)))
    return add(lhs, mul(-1, rhs))


def herglotz_chi_residual(result):
    """The Herglotz chi equation of L^H is S_expr - S; returns its difference from that (zero)."""
    residuals = result.herglotz_system.euler_lagrange()
    if CHI not in residuals:
        return ZERO
    return add(residuals[CHI], mul(-1, add(result.S_expr, mul(-1, result.action))))


def action_rate_residual(result):
    """The S row of the contact equations, with momenta replaced by their jet values, minus L^H."""
    S_row = next(r for r in reduced_equations_of_motion(result) if r.symbol == result.action)
    chart = result.reduced_chart
    momenta = result.herglotz_system.momenta()
    rules = {chart.momentum(base, a): v for (base, a), v in momenta.items()}
    return add(substitute(S_row.rhs, rules), mul(-1, result.herglotz_system.L))


def readouts(result):
    """Rates co-integrated with reduced runs: rho' = dH^c/dS and t' = exp(b*rho)."""
    chart = result.reduced_chart
    rho = chart.auxiliary(RHO)
    rows = [EquationRow(rho, differentiate(result.contact_H, chart.action))]
    if result.symmetry.reparameterizes:
        clock = chart.auxiliary("t") if chart.time_name != "t" else chart.time
        rows.append(EquationRow(clock, make_exp(mul(result.symmetry.b, rho))))
    return rows

