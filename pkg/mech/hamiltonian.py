import logging

from expr import ZERO, add, as_expr, differentiate, mul, substitute
from mech.errors import MechanicsError
from mech.inversion import invert_system
from mech.lagrangian import EquationRow

logger = logging.getLogger(__name__)


class HamiltonianSystem:
    """
    Canonical pairs (position, momentum), a Hamiltonian and, for contact
    systems, the action symbol.  ``inverse`` keeps the top-derivative
    inverse images used to build H from a Lagrangian (empty otherwise).
    """

    def __init__(self, pairs, hamiltonian, action=None, chart=None, name="hamiltonian", inverse=None):
        self.pairs = list(pairs)
        self.hamiltonian = as_expr(hamiltonian)
        self.action = action
        self.chart = chart
        self.name = name
        self.inverse = dict(inverse or {})

    def __repr__(self):
        return f"HamiltonianSystem({self.name!r}, H = {self.hamiltonian})"

    @property
    def is_contact(self):
        return self.action is not None

    @property
    def state_symbols(self):
        symbols = [s for pair in self.pairs for s in pair]
        if self.action is not None:
            symbols.append(self.action)
        return symbols

    def hamilton_equations(self):
        return hamilton_equations(self)

    def contact_hamilton_equations(self):
        return contact_hamilton_equations(self)

    def equations(self):
        if self.is_contact:
            return contact_hamilton_equations(self)
        return hamilton_equations(self)


def hamilton_equations(h):
    """q' = dH/dp, p' = -dH/dq for every canonical pair."""
    H = h.hamiltonian
    if h.action is not None and not differentiate(H, h.action).is_zero:
        raise MechanicsError("Hamiltonian depends on the action; use the contact equations")
    rows = []
    for q, p in h.pairs:
        rows.append(EquationRow(q, differentiate(H, p)))
        rows.append(EquationRow(p, mul(-1, differentiate(H, q))))
    return rows


def contact_hamilton_equations(h):
    """q' = dH/dp, p' = -(dH/dq + p dH/dz), z' = sum p dH/dp - H."""
    if h.action is None:
        raise MechanicsError("Contact equations need an action symbol")
    H = h.hamiltonian
    z = h.action
    dz = differentiate(H, z)
    rows = []
    action_terms = [mul(-1, H)]
    for q, p in h.pairs:
        dp = differentiate(H, p)
        rows.append(EquationRow(q, dp))
        rows.append(EquationRow(p, mul(-1, add(differentiate(H, q), mul(p, dz)))))
        action_terms.append(mul(p, dp))
    rows.append(EquationRow(z, add(*action_terms)))
    return rows


def legendre_ostrogradsky(system):
    """Hamiltonian of a regular Lagrangian system in positions q_a (a < k) and momenta p^a."""
    chart = system.chart
    if chart.constant_velocity:
        raise MechanicsError(
            f"Promoted couplings {sorted(chart.constant_velocity)} have no Legendre image"
        )
    return system._cached("legendre", lambda: _build_legendre(system))


def _build_legendre(system):
    chart = system.chart
    rows = []
    for base in chart.varied:
        k = chart.order(base)
        rows.append((system.partials(base)[k], chart.top(base), chart.momentum(base, k - 1)))
    inverse = invert_system(rows)

    terms = [mul(-1, system.L)]
    pairs = []
    for base in chart.varied:
        k = chart.order(base)
        for a in range(k):
            terms.append(mul(chart.jet(base, a + 1), chart.momentum(base, a)))
            pairs.append((chart.jet(base, a), chart.momentum(base, a)))
    H = substitute(add(*terms), inverse)
    logger.info(f"Legendre transform of '{system.name}' built over {len(pairs)} canonical pairs")
    return HamiltonianSystem(pairs, H, action=chart.action, chart=chart, name=system.name, inverse=inverse)


def momentum_pullback(system, expression):
    """Replace momentum symbols by the Jacobi-Ostrogradsky momenta of ``system``."""
    chart = system.chart
    rules = {chart.momentum(base, a): value for (base, a), value in system.momenta().items()}
    return substitute(expression, rules)


def legendre_residual(system):
    """Pullback of H through the momentum definitions minus the jet-form energy; vanishes for regular systems."""
    h = legendre_ostrogradsky(system)
    return add(momentum_pullback(system, h.hamiltonian), mul(-1, system.energy()))
