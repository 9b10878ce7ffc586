"""
Symplectification of a reduced contact system: add a scale variable y
conjugate to the action S, rescale momenta P = y*pi and take H = y*H^c.
"""

import logging
from dataclasses import dataclass

from expr import Symbol, SymbolKind, add, equivalent, mul, power, substitute
from mech import HamiltonianSystem

logger = logging.getLogger(__name__)


@dataclass
class Symplectification:
    system: HamiltonianSystem
    y: Symbol
    momentum_map: dict

    def pairs_text(self):
        return [f"{q.name}<->{p.name}" for q, p in self.system.pairs]


def _capital(p):
    return Symbol("P" + p.name[len("pi"):] if p.name.startswith("pi") else "P_" + p.name,
                  SymbolKind.MOMENTUM, p.base, p.order)


def symplectify(result):
    contact = result.reduced_hamiltonian
    y = Symbol("y", SymbolKind.COORDINATE, "y", 0)
    S = contact.action
    momentum_map = {p: _capital(p) for _, p in contact.pairs}
    rules = {p: mul(P, power(y, -1)) for p, P in momentum_map.items()}
    H = mul(y, substitute(contact.hamiltonian, rules))
    pairs = [(y, S)] + [(q, momentum_map[p]) for q, p in contact.pairs]
    system = HamiltonianSystem(pairs, H, chart=contact.chart, name=f"{contact.name}-symplectic")
    logger.info(f"Symplectified '{contact.name}' with {len(pairs)} canonical pairs")
    return Symplectification(system, y, momentum_map)


def symplectic_row_checks(result, symplectic, **settings):
    """
    Compare each contact row with the symplectic flow restricted to the contact
    variables (P = y*pi, pi' = (P' - pi*y')/y).  Returns {row name: Equivalence}.
    """
    contact_rows = {row.symbol: row.rhs for row in result.reduced_hamiltonian.contact_hamilton_equations()}
    sym_rows = {row.symbol: row.rhs for row in symplectic.system.hamilton_equations()}
    y = symplectic.y
    back = {P: mul(y, p) for p, P in symplectic.momentum_map.items()}
    y_rate = substitute(sym_rows[y], back)
    checks = {}
    for q, p in result.reduced_hamiltonian.pairs:
        P = symplectic.momentum_map[p]
        checks[q.name] = equivalent(substitute(sym_rows[q], back), contact_rows[q], **settings)
        p_rate = mul(add(substitute(sym_rows[P], back), mul(-1, p, y_rate)), power(y, -1))
        checks[p.name] = equivalent(p_rate, contact_rows[p], **settings)
    S = result.reduced_hamiltonian.action
    checks[S.name] = equivalent(substitute(sym_rows[S], back), contact_rows[S], **settings)
    return checks
