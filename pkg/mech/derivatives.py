from expr import ZERO, add, as_expr, differentiate, mul
from expr.nodes import SymbolKind
from mech.errors import MechanicsError


def total_derivative_dT(f, chart):
    """Total time derivative on jets: sum of q_{a+1} * df/dq_a, plus explicit time dependence."""
    f = as_expr(f)
    terms = []
    for s in sorted(f.free_symbols, key=lambda s: s.key):
        if s == chart.time:
            terms.append(differentiate(f, s))
            continue
        if s.kind is SymbolKind.MOMENTUM:
            raise MechanicsError(f"Total derivative is undefined for momentum symbol '{s.name}'")
        nxt = chart.next_jet(s)
        if nxt is not None:
            terms.append(mul(nxt, differentiate(f, s)))
    return add(*terms) if terms else ZERO


def total_derivative_DL(f, lagrangian, chart):
    """Lagrangian total derivative D_L f = d_T f + L df/dz - f dL/dz on a contact chart."""
    if not chart.contact:
        raise MechanicsError("D_L needs a contact chart")
    f = as_expr(f)
    z = chart.action
    return add(
        total_derivative_dT(f, chart),
        mul(lagrangian, differentiate(f, z)),
        mul(-1, f, differentiate(lagrangian, z)),
    )


def iterated(operator, f, times):
    for _ in range(times):
        f = operator(f)
    return f
