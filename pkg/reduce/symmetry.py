"""
Scaling symmetries: declaration, lifting to jets, verification by a finite
transformation with a symbolic scale factor, and the weight-balance solver.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from expr import Const, Func, Symbol, SymbolKind, equivalent, mul, power, substitute
from expr.nodes import Add, Mul, Pow, terms_of
from reduce.errors import SymmetryError

logger = logging.getLogger(__name__)

KAPPA = Symbol("kappa", SymbolKind.AUXILIARY)


@dataclass(frozen=True)
class ScalingSymmetry:
    """Q -> kappa^A Q, t -> kappa^B t, L -> kappa^degree L; ``weights`` scales other coordinates."""
    coordinate: str
    A: Fraction
    B: Fraction
    degree: Fraction
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("A", "B", "degree"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        object.__setattr__(self, "weights", {k: Fraction(v) for k, v in dict(self.weights).items()})
        if self.A == 0:
            raise SymmetryError(f"Scaling of '{self.coordinate}' needs A != 0")
        if self.B != 0 and self.B + self.degree != 1:
            raise SymmetryError(f"Reparameterizing symmetry needs B + Lambda = 1, got B={self.B}, Lambda={self.degree}")
        if self.B == 0 and self.degree == 0:
            raise SymmetryError("A symmetry without time scaling needs a nonzero degree")

    @property
    def reparameterizes(self):
        return self.B != 0

    @property
    def c(self):
        """Q = exp(c * rho)."""
        return self.A if self.reparameterizes else self.A / self.degree

    @property
    def b(self):
        """dt/dtau = exp(b * rho)."""
        return 1 - self.degree if self.reparameterizes else Fraction(0)

    @property
    def exponent(self):
        return self.degree - 1

    def weight_of(self, base):
        if base == self.coordinate:
            return self.A
        return self.weights.get(base, Fraction(0))


@dataclass(frozen=True)
class SymmetryVerdict:
    verified: bool
    degree: Fraction
    equivalence: object
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verified


def lift_symmetry(sym, chart):
    """Scaling weight of every jet (and the action) of ``chart``: A - a*B for Q_a, w_i - a*B for the rest."""
    table = {}
    for base in chart.coordinates:
        for jet in chart.jets(base):
            table[jet] = sym.weight_of(base) - jet.order * sym.B
    if chart.lapse_name is not None:
        if sym.reparameterizes:
            raise SymmetryError("A prescribed lapse is only supported for symmetries that leave time alone")
        for jet in chart.jets(chart.lapse_name):
            table[jet] = Fraction(0)
    if chart.action is not None:
        table[chart.action] = sym.degree + sym.B
    return table


def verify_scaling_symmetry(system, sym, **settings):
    """Apply the finite scaling with a symbolic kappa and compare with kappa^degree * L."""
    weights = lift_symmetry(sym, system.chart)
    L = system.lagrangian
    rules = {s: mul(power(KAPPA, weights[s]), s) for s in L.free_symbols if weights.get(s, 0) != 0}
    transformed = substitute(L, rules)
    expected = mul(power(KAPPA, sym.degree), L)
    result = equivalent(transformed, expected, **settings)
    if result.holds:
        logger.info(f"Scaling symmetry of '{system.name}' verified with degree {sym.degree} ({result.verdict.value})")
    else:
        logger.info(f"Scaling symmetry of '{system.name}' refuted: {result.verdict.value}")
    return SymmetryVerdict(result.holds, sym.degree, result, dict(result.witness))


# ---------------------------------------------------------------------------
# weight balance


@dataclass(frozen=True)
class WeightSolution:
    unknowns: tuple
    particular: dict
    nullspace: list

    @property
    def unique(self):
        return not self.nullspace

    def symmetry(self, coordinate, A=None):
        values = dict(self.particular)
        A = values.get("A", A)
        weights = {k[2:]: v for k, v in values.items() if k.startswith("w_")}
        return ScalingSymmetry(coordinate, A, values["B"], values["Lambda"], weights)

    def member(self, **values):
        """The single member of the family with the named unknowns pinned, e.g. ``member(B=3)``."""
        unknown = [name for name in values if name not in self.unknowns]
        if unknown:
            raise SymmetryError(f"Cannot pin {unknown}: unknowns are {list(self.unknowns)}")
        return self._constrained([({name: Fraction(1)}, Fraction(value)) for name, value in values.items()])

    def reparameterizing(self):
        """The member with B + Lambda = 1, the one a time-rescaling reduction needs."""
        return self._constrained([({"B": Fraction(1), "Lambda": Fraction(1)}, Fraction(1))])

    def _constrained(self, constraints):
        # each constraint: sum(coefficient * unknown) = value, solved for the nullspace coordinates
        equations = []
        for coefficients, value in constraints:
            eq = {}
            for i, vector in enumerate(self.nullspace):
                c = sum(k * vector[name] for name, k in coefficients.items())
                if c != 0:
                    eq[i] = c
            constant = sum(k * self.particular[name] for name, k in coefficients.items()) - value
            if constant != 0:
                eq[None] = constant
            equations.append(eq)
        steps, free = _solve_affine([e for e in equations if e], tuple(range(len(self.nullspace))))
        if free:
            raise SymmetryError(f"Pinned values leave {len(free)} free directions in the symmetry family")
        particular = {
            u: self.particular[u] + sum(steps[i] * vector[u] for i, vector in enumerate(self.nullspace))
            for u in self.unknowns
        }
        return WeightSolution(self.unknowns, particular, [])


def _affine_add(a, b, scale=Fraction(1)):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + scale * v
        if out[k] == 0:
            del out[k]
    return out


def _term_weight(term, symbol_weight, equations):
    if isinstance(term, Symbol):
        return symbol_weight(term)
    if isinstance(term, Const):
        return {}
    if isinstance(term, Func):
        _expression_weight(term.arg, symbol_weight, equations, must_vanish=True)
        return {}
    if isinstance(term, Add):
        return _expression_weight(term, symbol_weight, equations)
    if isinstance(term, (Mul, Pow)):
        total = {}
        for atom, e in term.factors:
            total = _affine_add(total, _term_weight(atom, symbol_weight, equations), e)
        return total
    return {}


def _expression_weight(expression, symbol_weight, equations, must_vanish=False):
    terms = terms_of(expression)
    weights = [_term_weight(t, symbol_weight, equations) for t in terms]
    if not weights:
        return {}
    first = weights[0]
    for w in weights[1:]:
        equations.append(_affine_add(w, first, Fraction(-1)))
    if must_vanish:
        equations.append(first)
    return first


def _solve_affine(equations, unknowns):
    """Gaussian elimination over the rationals; returns (particular, nullspace) or raises on inconsistency."""
    rows = []
    for eq in equations:
        rows.append([eq.get(u, Fraction(0)) for u in unknowns] + [-eq.get(None, Fraction(0))])
    n = len(unknowns)
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for row in rows[r:]:
        if row[n] != 0:
            raise SymmetryError("Weight balance has no solution: the Lagrangian admits no such scaling")
    particular = {u: Fraction(0) for u in unknowns}
    for i, col in enumerate(pivots):
        particular[unknowns[col]] = rows[i][n]
    nullspace = []
    for free in (c for c in range(n) if c not in pivots):
        vector = {u: Fraction(0) for u in unknowns}
        vector[unknowns[free]] = Fraction(1)
        for i, col in enumerate(pivots):
            vector[unknowns[col]] = -rows[i][free]
        nullspace.append(vector)
    return particular, nullspace


def solve_weights(system, coordinate, A=None, unknown_coordinates=(), fixed=None):
    """
    Solve the weight balance of ``system`` for B, Lambda and the weights of
    ``unknown_coordinates`` (and A when not given).  Every term of L must carry
    weight Lambda and every function argument weight zero.
    """
    chart = system.chart
    fixed = dict(fixed or {})
    unknowns = (["A"] if A is None else []) + ["B", "Lambda"] + [f"w_{c}" for c in unknown_coordinates]

    def symbol_weight(s):
        if s.kind in (SymbolKind.COORDINATE, SymbolKind.JET) and s.base in chart.orders:
            if s.base == coordinate:
                base = {"A": Fraction(1)} if A is None else {None: Fraction(A)}
            elif s.base in unknown_coordinates:
                base = {f"w_{s.base}": Fraction(1)}
            else:
                base = {None: Fraction(fixed.get(s.base, 0))} if fixed.get(s.base, 0) else {}
            return _affine_add(base, {"B": Fraction(-s.order)})
        if s.kind is SymbolKind.ACTION:
            return {"Lambda": Fraction(1), "B": Fraction(1)}
        return {}

    equations = []
    for term in terms_of(system.lagrangian):
        w = _term_weight(term, symbol_weight, equations)
        equations.append(_affine_add(w, {"Lambda": Fraction(1)}, Fraction(-1)))
    if chart.lapse_name is not None:
        equations.append({"B": Fraction(1)})
    particular, nullspace = _solve_affine([e for e in equations if e], unknowns)
    logger.info(f"Weight balance for '{system.name}': {particular} with {len(nullspace)} free directions")
    return WeightSolution(tuple(unknowns), particular, nullspace)
