from mech.chart import JetChart
from mech.derivatives import total_derivative_DL, total_derivative_dT
from mech.errors import ChartError, JetOrderError, MechanicsError, MomentumInversionError, SingularSystemError
from mech.hamiltonian import (
    HamiltonianSystem, contact_hamilton_equations, hamilton_equations, legendre_ostrogradsky, legendre_residual,
    momentum_pullback,
)
from mech.inversion import determinant, invert, invert_system, solve_linear
from mech.lagrangian import EquationRow, LagrangianSystem, RegularityResult


def jacobi_ostrogradsky_momenta(system):
    return system.momenta()


def energy_function(system, form="jet"):
    return system.energy(form)


def euler_lagrange(system):
    return system.euler_lagrange()


def herglotz_equations(system):
    return system.herglotz_equations()


def regularity_check(system, at=None):
    return system.regularity_check(at)
