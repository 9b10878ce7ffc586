import logging
import threading
from dataclasses import dataclass

from expr import ZERO, SymbolKind, add, as_expr, differentiate, evaluate, mul, parse_expression, simplify, substitute
from mech.derivatives import iterated, total_derivative_DL, total_derivative_dT
from mech.errors import MechanicsError, SingularSystemError
from mech.inversion import determinant, invert, invert_system, linear_split, solve_linear

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquationRow:
    """
    One row of a first-order flow.  With an empty ``chain`` the row is a rate
    d(symbol)/dt = rhs.  With a chain (q, q', ..., q_{n-1}) the row closes a
    jet tower: each chain member differentiates into the next and the last
    one into ``rhs``, the solved top derivative ``symbol``.
    """
    symbol: object
    rhs: object
    chain: tuple = ()

    def __str__(self):
        return f"{self.symbol.name} = {self.rhs}"


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    determinant: object
    value: float = None

    @property
    def verdict(self):
        return "regular" if self.regular else "singular"


class LagrangianSystem:
    """A Lagrangian on a jet chart with lazily derived momenta, energy and equations of motion."""

    def __init__(self, chart, lagrangian, name=None):
        self.chart = chart
        self.name = name or chart.name
        self.lagrangian = parse_expression(lagrangian, chart) if isinstance(lagrangian, str) else as_expr(lagrangian)
        self.logger = logging.getLogger(__name__)
        self._lock = threading.RLock()
        self._cache = {}
        self._validate()
        self.eliminated = self._eliminate_algebraic()
        self.L = substitute(self.lagrangian, self.eliminated) if self.eliminated else self.lagrangian

    def __repr__(self):
        return f"LagrangianSystem({self.name!r}, L = {self.lagrangian})"

    def _validate(self):
        chart = self.chart
        for s in self.lagrangian.free_symbols:
            if s.base in chart.orders and s.order > chart.order(s.base):
                raise MechanicsError(
                    f"Lagrangian uses {s.name} beyond the declared order {chart.order(s.base)} of '{s.base}'"
                )
            if s.kind is SymbolKind.MOMENTUM:
                raise MechanicsError(f"Lagrangian may not contain momentum '{s.name}'")
            if s.kind is SymbolKind.ACTION and not chart.contact:
                raise MechanicsError(f"Action symbol '{s.name}' used on a non-contact chart")

    def _eliminate_algebraic(self):
        names = self.chart.algebraic
        if not names:
            return {}
        rows = [(differentiate(self.lagrangian, self.chart.jet(n)), self.chart.jet(n), ZERO) for n in names]
        solution = invert_system(rows)
        self.logger.info(f"Eliminated algebraic coordinates {list(names)} from '{self.name}'")
        return solution

    def _cached(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    # -- operators -------------------------------------------------------

    @property
    def is_contact(self):
        return self.chart.contact

    def d(self, f):
        """The total derivative matching the chart: D_L on contact charts, d_T otherwise."""
        if self.chart.contact:
            return total_derivative_DL(f, self.L, self.chart)
        return total_derivative_dT(f, self.chart)

    def partials(self, base):
        return self._cached(("partials", base), lambda: [
            differentiate(self.L, self.chart.jet(base, a)) for a in range(self.chart.order(base) + 1)
        ])

    # -- momenta and energy ----------------------------------------------

    def momenta(self):
        """Jacobi-Ostrogradsky momenta keyed by (coordinate, level), as jet expressions."""
        return self._cached("momenta", self._build_momenta)

    def _build_momenta(self):
        result = {}
        for base in self.chart.varied:
            k = self.chart.order(base)
            partials = self.partials(base)
            for r in range(1, k + 1):
                terms = [mul((-1) ** a, iterated(self.d, partials[r + a], a)) for a in range(k - r + 1)]
                result[(base, r - 1)] = add(*terms)
        self.logger.debug(f"Momenta of '{self.name}': {len(result)} expressions")
        return result

    def recursion_residuals(self):
        """p^{r-1} - (dL/dq_r - d p^r) for every level; all simplify to zero."""
        momenta = self.momenta()
        residuals = {}
        for base in self.chart.varied:
            k = self.chart.order(base)
            partials = self.partials(base)
            for r in range(1, k):
                expected = add(partials[r], mul(-1, self.d(momenta[(base, r)])))
                residuals[(base, r - 1)] = simplify(add(momenta[(base, r - 1)], mul(-1, expected)))
            residuals[(base, k - 1)] = simplify(add(momenta[(base, k - 1)], mul(-1, partials[k])))
        return residuals

    def energy(self, form="jet"):
        """E_L = sum p^a q_{a+1} - L; ``form='mixed'`` returns it in positions and momentum symbols."""
        if form == "mixed":
            from mech.hamiltonian import legendre_ostrogradsky

            return legendre_ostrogradsky(self).hamiltonian
        return self._cached("energy", self._build_energy)

    def _build_energy(self):
        momenta = self.momenta()
        terms = [mul(-1, self.L)]
        for base in self.chart.varied:
            for a in range(self.chart.order(base)):
                terms.append(mul(momenta[(base, a)], self.chart.jet(base, a + 1)))
        return add(*terms)

    # -- equations of motion ---------------------------------------------

    def euler_lagrange(self):
        """Residual per varied coordinate: sum over a of (-1)^a d^a(dL/dq_a), with d = D_L on contact charts."""
        return self._cached("residuals", self._build_residuals)

    def herglotz_equations(self):
        """Herglotz residuals keyed by coordinate, and the action constraint row dz/dt = L."""
        if not self.chart.contact:
            raise MechanicsError("Herglotz equations need a contact chart")
        return dict(self.euler_lagrange()), EquationRow(self.chart.action, self.L)

    def _build_residuals(self):
        momenta = self.momenta()
        residuals = {}
        for base in self.chart.varied:
            if base in self.chart.constant_velocity:
                continue
            residuals[base] = add(self.partials(base)[0], mul(-1, self.d(momenta[(base, 0)])))
        return residuals

    def top_symbols(self):
        return {base: self.chart.jet(base, 2 * self.chart.order(base)) for base in self.chart.varied}

    def solved(self):
        """Equation rows with each top derivative q_{2k} isolated, plus dz/dt = L on contact charts."""
        return self._cached("solved", self._build_solved)

    def _build_solved(self):
        residuals = self.euler_lagrange()
        tops = self.top_symbols()
        names = list(residuals)
        unknowns = [tops[n] for n in names]
        matrix = []
        rhs = []
        for n in names:
            split = linear_split(residuals[n], unknowns)
            if split is None:
                raise SingularSystemError(f"Equation for '{n}' is not linear in the top derivatives")
            coefficients, remainder = split
            matrix.append(coefficients)
            rhs.append(mul(-1, remainder))
        solution = dict(zip(names, solve_linear(matrix, rhs))) if names else {}

        rows = []
        for base in self.chart.varied:
            top = tops[base]
            chain = tuple(self.chart.jet(base, a) for a in range(top.order))
            value = ZERO if base in self.chart.constant_velocity else solution[base]
            rows.append(EquationRow(top, value, chain))
        if self.chart.contact:
            rows.append(EquationRow(self.chart.action, self.L))
        self.logger.info(f"Solved equations of motion for '{self.name}' ({len(rows)} rows)")
        return rows

    # -- checks and helpers ----------------------------------------------

    def hessian(self):
        bases = [b for b in self.chart.varied if b not in self.chart.constant_velocity]
        tops = [self.chart.top(b) for b in bases]
        return [[differentiate(differentiate(self.L, a), b) for b in tops] for a in tops]

    def regularity_check(self, at=None):
        det = simplify(determinant(self.hessian()))
        if det.is_zero:
            return RegularityResult(False, det, 0.0)
        if at is None:
            return RegularityResult(True, det)
        value = evaluate(det, at)
        return RegularityResult(abs(value) > 0.0, det, value)

    def zero_energy(self, jet):
        """Expression for ``jet`` that puts the initial data on the E_L = 0 surface."""
        return invert(self.energy(), jet, ZERO)
