"""
Model descriptors: a Lagrangian system bundled with its declared scaling
symmetry, default parameters and initial data, and the reference
expressions its derived objects must reproduce.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

from expr import equivalent, evaluate, substitute
from mech import contact_hamilton_equations, legendre_ostrogradsky
from models.errors import ModelError
from reduce import chi_equation, reduce_system, reduced_equations_of_motion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Reference:
    """A published expression for one derived object, in the expression grammar."""
    anchor: str
    target: str
    expression: str


# target -> chart the reference text is written in
_FULL_TARGETS = ("momentum", "energy", "hamiltonian", "solved", "contact_row")
_RHO_TARGETS = ("rho_lagrangian", "f", "rho_hamiltonian", "rho_momentum")
_REDUCED_TARGETS = (
    "action", "herglotz_lagrangian", "herglotz_momentum", "contact_hamiltonian", "contact_hamiltonian_lagrangian",
    "row", "chi_top",
)


@dataclass
class ModelDescriptor:
    name: str
    system: object
    symmetry: object = None
    binding: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)
    references: list = field(default_factory=list)
    description: str = ""
    zero_energy_jet: str = None
    enforce_zero_energy: bool = False
    horizon: float = 10.0
    metadata: dict = field(default_factory=dict)

    def __repr__(self):
        return f"ModelDescriptor({self.name!r})"

    @property
    def chart(self):
        return self.system.chart

    @property
    def reducible(self):
        return self.symmetry is not None and not self.chart.constant_velocity

    @cached_property
    def reduction(self):
        if self.symmetry is None:
            raise ModelError(f"Model '{self.name}' declares no scaling symmetry")
        if self.chart.constant_velocity:
            raise ModelError(f"Model '{self.name}' carries promoted couplings {sorted(self.chart.constant_velocity)};"
                             " reduce before promoting")
        return reduce_system(self.system, self.symmetry)

    # -- derived objects ---------------------------------------------------

    def chart_for(self, target):
        kind = target.split(":", 1)[0]
        if kind in _FULL_TARGETS:
            return self.chart
        if kind in _RHO_TARGETS:
            return self.reduction.rho_chart
        if kind in _REDUCED_TARGETS:
            return self.reduction.reduced_chart
        raise ModelError(f"Unknown reference target '{target}'")

    def derived(self, target):
        """The object a reference is compared with, e.g. 'momentum:q:0', 'row:pi0_chi', 'contact_hamiltonian'."""
        kind, _, rest = target.partition(":")
        if kind == "momentum":
            base, level = rest.split(":")
            return self.system.momenta()[(base, int(level))]
        if kind == "energy":
            return self.system.energy()
        if kind == "hamiltonian":
            return legendre_ostrogradsky(self.system).hamiltonian
        if kind == "solved":
            return next(row.rhs for row in self.system.solved() if row.symbol.base == rest)
        if kind == "contact_row":
            rows = contact_hamilton_equations(legendre_ostrogradsky(self.system))
            return next(row.rhs for row in rows if row.symbol.name == rest)

        result = self.reduction
        if kind == "rho_lagrangian":
            return result.L_hat
        if kind == "f":
            return result.f
        if kind == "rho_hamiltonian":
            return legendre_ostrogradsky(result.rho_system).hamiltonian
        if kind == "rho_momentum":
            base, level = rest.split(":")
            return result.rho_system.momenta()[(base, int(level))]
        if kind == "action":
            return result.S_expr
        if kind == "herglotz_lagrangian":
            return result.herglotz_L
        if kind == "herglotz_momentum":
            base, level = rest.split(":")
            return result.herglotz_system.momenta()[(base, int(level))]
        if kind == "contact_hamiltonian":
            return result.contact_H
        if kind == "contact_hamiltonian_lagrangian":
            if result.contact_H_lagrangian is None:
                raise ModelError(f"No Lagrangian-side contact Hamiltonian for '{self.name}'")
            return result.contact_H_lagrangian
        if kind == "row":
            return next(row.rhs for row in reduced_equations_of_motion(result) if row.symbol.name == rest)
        if kind == "chi_top":
            return chi_equation(result).rhs
        raise ModelError(f"Unknown reference target '{target}'")

    def reference_checks(self, **settings):
        """Compare every reference with its derived object; returns [(Reference, Equivalence)]."""
        checks = []
        for ref in self.references:
            chart = self.chart_for(ref.target)
            expected = chart.parse(ref.expression)
            outcome = equivalent(self.derived(ref.target), expected, **settings)
            if not outcome.holds:
                logger.warning(f"{self.name}: reference '{ref.anchor}' ({ref.target}) is {outcome.verdict.value}")
            checks.append((ref, outcome))
        return checks

    # -- numeric data ------------------------------------------------------

    def parameter_binding(self, overrides=None):
        binding = dict(self.binding)
        binding.update(overrides or {})
        missing = [p for p in self.chart.parameter_names if p not in binding]
        if missing:
            raise ModelError(f"Model '{self.name}' has no values for parameters {missing}")
        return binding

    def initial_values(self, enforce_zero_energy=None, overrides=None, t0=0.0):
        """
        Initial jets by name.  With zero-energy enforcement the declared jet is
        solved from E_L = 0 given the others.
        """
        values = dict(self.initial)
        values.update(overrides or {})
        enforce = self.enforce_zero_energy if enforce_zero_energy is None else enforce_zero_energy
        if enforce:
            if self.zero_energy_jet is None:
                raise ModelError(f"Model '{self.name}' names no jet to solve for zero energy")
            jet = self.chart.symbol(self.zero_energy_jet)
            solution = self.system.zero_energy(jet)
            lapse = self.chart.lapse_jets()
            if lapse:
                solution = substitute(solution, lapse)
            binding = dict(self.parameter_binding())
            binding.update(values)
            binding[self.chart.time.name] = t0
            values[jet.name] = evaluate(solution, binding)
            logger.info(f"{self.name}: {jet.name} = {values[jet.name]:.17g} puts the initial data on E_L = 0")
        return values

    def energy_at(self, values, t0=0.0):
        energy = self.system.energy()
        lapse = self.chart.lapse_jets()
        if lapse:
            energy = substitute(energy, lapse)
        binding = dict(self.parameter_binding())
        binding.update(values)
        binding[self.chart.time.name] = t0
        return evaluate(energy, binding)
