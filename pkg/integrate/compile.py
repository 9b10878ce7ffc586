"""
Lowering of symbolic equation rows to a numeric first-order system.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from expr import Symbol, substitute
from integrate.errors import CompileError
from integrate.tape import RADICAND_FLOOR, Tape

logger = logging.getLogger(__name__)


@dataclass
class OdeSystem:
    """y' = rhs(t, y) over ``states``; ``columns`` are their printed names."""
    states: list
    expressions: list
    tape: Tape
    time: Symbol = None
    metadata: dict = field(default_factory=dict)

    @property
    def columns(self):
        return [s.name for s in self.states]

    @property
    def dimension(self):
        return len(self.states)

    def rhs(self, t, y):
        return self.tape(t, y)

    def index(self, name):
        try:
            return self.columns.index(name)
        except ValueError:
            raise CompileError(f"'{name}' is not a state of this system") from None

    def initial_state(self, values):
        """State vector from a mapping keyed by state name or symbol."""
        by_name = {(k.name if isinstance(k, Symbol) else k): float(v) for k, v in dict(values).items()}
        missing = [c for c in self.columns if c not in by_name]
        if missing:
            raise CompileError(f"Missing initial values for {missing}")
        return np.array([by_name[c] for c in self.columns], dtype=float)


def _resolve_binding(binding, symbols):
    by_name = {(k.name if isinstance(k, Symbol) else k): v for k, v in dict(binding or {}).items()}
    constants = {}
    for s in symbols:
        if s.name in by_name:
            constants[s] = float(by_name[s.name])
    return constants


def _flatten(rows):
    states, rates = [], []
    for row in rows:
        if row.chain:
            members = list(row.chain)
            for a, member in enumerate(members):
                states.append(member)
                rates.append(members[a + 1] if a + 1 < len(members) else row.rhs)
        else:
            states.append(row.symbol)
            rates.append(row.rhs)
    return states, rates


def compile_system(rows, binding=None, chart=None, readouts=(), time=None, metadata=None,
                   radicand_floor=RADICAND_FLOOR):
    """
    Flatten equation rows (jet towers and single rates) plus readout rows into
    an ``OdeSystem``.  Parameters are folded from ``binding``; a prescribed
    lapse on ``chart`` is replaced by its closed form in time.
    """
    states, rates = _flatten(list(rows) + list(readouts))
    seen = set()
    for s in states:
        if s in seen:
            raise CompileError(f"State '{s.name}' is defined twice")
        seen.add(s)

    if time is None and chart is not None:
        time = chart.time
    lapse = chart.lapse_jets() if chart is not None else {}
    if lapse:
        rates = [substitute(r, lapse) for r in rates]

    free = set()
    for r in rates:
        free |= r.free_symbols
    outside = free - seen - ({time} if time is not None else set())
    constants = _resolve_binding(binding, outside)
    unresolved = sorted(s.name for s in outside if s not in constants)
    if unresolved:
        raise CompileError(f"Unbound or unsolved symbols in the flow: {unresolved}")

    tape = Tape(rates, states, time=time, constants=constants, radicand_floor=radicand_floor)
    logger.info(f"Compiled {len(states)} states into a tape of {tape.size} operations")
    return OdeSystem(states, rates, tape, time, dict(metadata or {}))
