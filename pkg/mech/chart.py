"""
Jet charts: the symbol universe of one mechanical system.

A chart owns every symbol a system may mention: the jets of each coordinate
up to twice its Lagrangian order (Euler-Lagrange residuals reach q_{2k}),
the Jacobi-Ostrogradsky momenta p^alpha for alpha < k, the action symbol on
contact charts, parameters, the time symbol, an optional prescribed lapse
with its own jets, and any auxiliaries registered later.
"""

import logging

from expr import Symbol, SymbolKind, UnknownSymbolError, differentiate, jet_name, parse_expression
from mech.errors import ChartError, JetOrderError

logger = logging.getLogger(__name__)


class JetChart:
    def __init__(self, coordinates, parameters=(), contact=False, action="z", momentum_prefix="p",
                 time="t", lapse=None, constant_velocity=(), name="chart", capacities=None):
        """
        coordinates: mapping name -> Lagrangian order k (0 marks an algebraic coordinate).
        lapse: optional (name, expression in the time symbol) pair; never varied.
        constant_velocity: coordinates whose equation of motion is fixed to a vanishing second derivative.
        capacities: optional per-coordinate jet capacity overriding 2k.
        """
        self.name = name
        self.orders = dict(coordinates)
        if not self.orders:
            raise ChartError("A chart needs at least one coordinate")
        for base, order in self.orders.items():
            if order < 0:
                raise ChartError(f"Negative order for coordinate '{base}'")
        self.contact = contact
        self.action_name = action
        self.momentum_prefix = momentum_prefix
        self.time_name = time
        self.parameter_names = tuple(parameters)
        self.constant_velocity = frozenset(constant_velocity)
        self.capacities = dict(capacities or {})
        unknown = self.constant_velocity - set(self.orders)
        if unknown:
            raise ChartError(f"Constant-velocity names are not coordinates: {sorted(unknown)}")

        self._init = dict(coordinates=dict(coordinates), parameters=tuple(parameters), contact=contact,
                          action=action, momentum_prefix=momentum_prefix, time=time, lapse=lapse,
                          constant_velocity=tuple(constant_velocity), name=name,
                          capacities=dict(capacities or {}))

        self.time = Symbol(time, SymbolKind.TIME)
        self.action = Symbol(action, SymbolKind.ACTION) if contact else None
        self.parameters = {p: Symbol(p, SymbolKind.PARAMETER) for p in self.parameter_names}
        self.auxiliaries = {}
        self.lapse_name = lapse[0] if lapse is not None else None
        self.lapse_expression = None
        self._jets = {}
        self._momenta = {}
        for base, order in self.orders.items():
            self._jets[base] = [
                Symbol(jet_name(base, a), SymbolKind.COORDINATE if a == 0 else SymbolKind.JET, base, a)
                for a in range(self.capacity(base) + 1)
            ]
            self._momenta[base] = [
                Symbol(self.momentum_name(base, a), SymbolKind.MOMENTUM, base, a) for a in range(order)
            ]

        if lapse is not None:
            lapse_name = lapse[0]
            if lapse_name in self.orders or lapse_name in self.parameters:
                raise ChartError(f"Lapse name '{lapse_name}' clashes with another symbol")
            capacity = max([2 * max(self.orders.values())] + list(self.capacities.values())) + 2
            self._jets[lapse_name] = [
                Symbol(jet_name(lapse_name, a), SymbolKind.AUXILIARY, lapse_name, a) for a in range(capacity + 1)
            ]

        self._by_name = {}
        for jets in self._jets.values():
            for s in jets:
                self._by_name[s.name] = s
        for moms in self._momenta.values():
            for s in moms:
                self._by_name[s.name] = s
        for s in self.parameters.values():
            self._by_name[s.name] = s
        self._by_name[self.time.name] = self.time
        if self.action is not None:
            self._by_name[self.action.name] = self.action
        if lapse is not None:
            self.lapse_expression = parse_expression(lapse[1], self)
            stray = self.lapse_expression.free_symbols - {self.time} - set(self.parameters.values())
            if stray:
                raise ChartError(f"Lapse may depend on time and parameters only, found {sorted(s.name for s in stray)}")

    def __repr__(self):
        return f"JetChart({self.name!r}, {self.orders})"

    # -- structure -------------------------------------------------------

    @property
    def coordinates(self):
        return tuple(self.orders)

    @property
    def varied(self):
        """Coordinates carrying an equation of motion (order >= 1)."""
        return tuple(c for c, k in self.orders.items() if k >= 1)

    @property
    def algebraic(self):
        return tuple(c for c, k in self.orders.items() if k == 0)

    def order(self, base):
        return self.orders[base]

    def capacity(self, base):
        if base == self.lapse_name:
            return len(self._jets[base]) - 1
        return self.capacities.get(base, 2 * self.orders[base])

    def replace(self, **changes):
        fields = dict(self._init)
        fields.update(changes)
        chart = JetChart(**fields)
        for name in self.auxiliaries:
            chart.auxiliary(name)
        return chart

    # -- symbols ---------------------------------------------------------

    def jet(self, base, order=0):
        jets = self._jets.get(base)
        if jets is None:
            raise ChartError(f"'{base}' is not a coordinate of chart '{self.name}'")
        if order >= len(jets):
            raise JetOrderError(base, order, len(jets) - 1)
        return jets[order]

    def jets(self, base, upto=None):
        top = self.capacity(base) if upto is None else upto
        return [self.jet(base, a) for a in range(top + 1)]

    def top(self, base):
        """Highest derivative entering the Lagrangian for ``base``."""
        return self.jet(base, self.orders[base])

    def momentum_name(self, base, level):
        return f"{self.momentum_prefix}{level}_{base}"

    def momentum(self, base, level):
        moms = self._momenta.get(base)
        if moms is None or level >= len(moms):
            raise ChartError(f"No momentum of level {level} for '{base}'")
        return moms[level]

    def parameter(self, name):
        return self.parameters[name]

    def auxiliary(self, name):
        if name in self._by_name and name not in self.auxiliaries:
            raise ChartError(f"Auxiliary name '{name}' is already used")
        if name not in self.auxiliaries:
            symbol = Symbol(name, SymbolKind.AUXILIARY)
            self.auxiliaries[name] = symbol
            self._by_name[name] = symbol
        return self.auxiliaries[name]

    def symbol(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownSymbolError(name) from None

    def lookup(self, name, order=0):
        """Resolver used by the expression parser."""
        if order == 0:
            return self.symbol(name)
        jets = self._jets.get(name)
        if jets is None or order >= len(jets):
            raise UnknownSymbolError(jet_name(name, order))
        return jets[order]

    def parse(self, source):
        return parse_expression(source, self)

    def next_jet(self, symbol):
        """The jet one order above ``symbol``, or None for symbols that are not jets of this chart."""
        if symbol.kind not in (SymbolKind.COORDINATE, SymbolKind.JET, SymbolKind.AUXILIARY) or symbol.base is None:
            return None
        jets = self._jets.get(symbol.base)
        if jets is None or jets[symbol.order] != symbol:
            return None
        if symbol.order + 1 >= len(jets):
            raise JetOrderError(symbol.base, symbol.order + 1, len(jets) - 1)
        return jets[symbol.order + 1]

    # -- lapse -----------------------------------------------------------

    def lapse_jets(self):
        """Prescribed values of the lapse jets as expressions in time."""
        if self.lapse_name is None:
            return {}
        values = {}
        current = self.lapse_expression
        for s in self._jets[self.lapse_name]:
            values[s] = current
            current = differentiate(current, self.time)
        return values
