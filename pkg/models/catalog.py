"""
Built-in systems: the Pais-Uhlenbeck oscillator (free and damped), the
Kepler family and the higher-order FLRW cosmology, each with the closed
forms its derived objects are checked against.
"""

import logging

import numpy as np

from expr import ExpressionError, differentiate, evaluate
from mech import JetChart, LagrangianSystem
from models.descriptor import ModelDescriptor, Reference
from models.errors import ModelError
from reduce import (
    PromotionError, ScalingSymmetry, SymmetryError, promote_couplings, promote_energy, promoted_symmetry,
)

logger = logging.getLogger(__name__)

PU_LAGRANGIAN = "(q'^2 - q^2*th'^2 - lam*q''^2)/2"
KEPLER_LAGRANGIAN = "r'^2/2 + r^2*th'^2/2 + 1/r"


def _pu_references():
    return [
        Reference("free oscillator p1_q", "momentum:q:1", "-lam*q''"),
        Reference("free oscillator p0_q", "momentum:q:0", "q' + lam*q'''"),
        Reference("free oscillator p0_th", "momentum:th:0", "-q^2*th'"),
        Reference("free oscillator energy", "energy", "q'^2/2 + lam*q'*q''' - q^2*th'^2/2 - lam*q''^2/2"),
        Reference("free oscillator Hamiltonian", "hamiltonian", "q'*p0_q - (q'^2 + p0_th^2/q^2 + p1_q^2/lam)/2"),
        Reference("Lagrange vector field, q''''", "solved:q", "-(q'' + q*th'^2)/lam"),
        Reference("Lagrange vector field, th''", "solved:th", "-2*q'*th'/q"),
        Reference("log-coordinate Lagrangian", "rho_lagrangian",
                  "exp(rho)*(rho'^2/4 - th'^2 - lam*(4*rho''^2 + 4*rho'^2*rho'' + rho'^4)/16)/2"),
        Reference("log-coordinate p1_rho", "rho_momentum:rho:1", "-lam*exp(rho)*(rho'' + rho'^2/2)/4"),
        Reference("log-coordinate p0_rho", "rho_momentum:rho:0", "exp(rho)*(rho' + lam*rho'*rho'' + lam*rho''')/4"),
        Reference("log-coordinate Hamiltonian", "rho_hamiltonian",
                  "rho'*p0_rho - 2*p1_rho^2/(lam*exp(rho)) - rho'^2*p1_rho/2 - exp(rho)*rho'^2/8"
                  " - p0_th^2/(2*exp(rho))"),
        Reference("generalized action", "action", "chi/4 + lam*chi*chi'/4 + lam*chi''/4"),
        Reference("Herglotz Lagrangian", "herglotz_lagrangian",
                  "(chi^2/4 - th'^2 - lam*(4*chi'^2 + 4*chi^2*chi' + chi^4)/16)/2 - chi*S"),
        Reference("contact Hamiltonian", "contact_hamiltonian",
                  "-(pi0_th^2/2 + chi^2*pi0_chi/2 + 2*pi0_chi^2/lam + chi^2/8) + chi*S"),
        Reference("contact Hamiltonian from L^H", "contact_hamiltonian_lagrangian",
                  "-(pi0_th^2/2 + chi^2*pi0_chi/2 + 2*pi0_chi^2/lam + chi^2/8) + chi*S"),
        Reference("reduced chi equation", "row:chi", "-4*pi0_chi/lam - chi^2/2"),
        Reference("reduced pi_chi equation", "row:pi0_chi", "chi/4 - S"),
        Reference("reduced th equation", "row:th", "-pi0_th"),
        Reference("reduced pi_th equation", "row:pi0_th", "-chi*pi0_th"),
        Reference("reduced S equation", "row:S", "chi^2/8 - 2*pi0_chi^2/lam - pi0_th^2/2 - chi*S"),
    ]


def _damped_references():
    return [
        Reference("damped p1_q", "momentum:q:1", "-lam*q''"),
        Reference("damped p0_q", "momentum:q:0", "q' + lam*q''' + lam*gam*q''"),
        Reference("damped p0_th", "momentum:th:0", "-q^2*th'"),
        Reference("damped energy", "energy",
                  "q'*(q' + lam*q''' + lam*gam*q'') - (q'^2 + q^2*th'^2 + lam*q''^2)/2 + gam*z"),
        Reference("damped contact Hamiltonian", "hamiltonian",
                  "q'*p0_q - (q'^2 + p0_th^2/q^2 + p1_q^2/lam)/2 + gam*z"),
        Reference("contact component A0", "contact_row:q", "q'"),
        Reference("contact component A1", "contact_row:q'", "-p1_q/lam"),
        Reference("contact component A2", "contact_row:th", "-p0_th/q^2"),
        Reference("contact component B0", "contact_row:p0_q", "-(p0_th^2/q^3 + gam*p0_q)"),
        Reference("contact component B1", "contact_row:p1_q", "q' - p0_q - gam*p1_q"),
        Reference("contact component B2", "contact_row:p0_th", "-gam*p0_th"),
        Reference("contact component C", "contact_row:z", "(q'^2 - p0_th^2/q^2 - p1_q^2/lam)/2 - gam*z"),
    ]


def pais_uhlenbeck(damping=0.0, lam=0.1, higher_order=True):
    """
    Pais-Uhlenbeck oscillator with the frequency promoted to th'.  A positive
    ``damping`` adds -gam*z on a contact chart.
    """
    if lam == 0:
        raise ModelError("The Pais-Uhlenbeck coupling lam must be nonzero")
    if damping < 0:
        raise ModelError(f"Damping must be non-negative, got {damping}")
    initial = {"q": 1.0, "q'": 0.1, "q''": 0.0, "q'''": 0.0, "th": 0.0, "th'": 1.0}
    if damping == 0:
        chart = JetChart({"q": 2, "th": 1}, parameters=("lam",), name="pais-uhlenbeck")
        system = LagrangianSystem(chart, PU_LAGRANGIAN, name="pais-uhlenbeck")
        return ModelDescriptor(
            name="pais-uhlenbeck", system=system, symmetry=ScalingSymmetry("q", 1, 0, 2),
            binding={"lam": lam}, initial=initial, references=_pu_references() if higher_order else [],
            description="Fourth-order oscillator with a promoted frequency; q -> kq scales L by k^2",
            zero_energy_jet="q'''", horizon=10.0,
        )
    chart = JetChart({"q": 2, "th": 1}, parameters=("lam", "gam"), contact=True, name="pais-uhlenbeck-damped")
    system = LagrangianSystem(chart, f"{PU_LAGRANGIAN} - gam*z", name="pais-uhlenbeck-damped")
    initial["z"] = 0.0
    return ModelDescriptor(
        name="pais-uhlenbeck-damped", system=system, binding={"lam": lam, "gam": damping}, initial=initial,
        references=_damped_references(), description="Pais-Uhlenbeck oscillator with linear action damping",
        zero_energy_jet="q'''", horizon=10.0,
    )


def damped_rotor(damping=0.1):
    """The frequency sector of the damped oscillator with q frozen at 1: a first-order Herglotz system."""
    chart = JetChart({"th": 1}, parameters=("gam",), contact=True, name="damped-rotor")
    system = LagrangianSystem(chart, "-th'^2/2 - gam*z", name="damped-rotor")
    return ModelDescriptor(
        name="damped-rotor", system=system, binding={"gam": damping}, initial={"th": 0.0, "th'": 1.0, "z": 0.0},
        description="First-order damped rotor", horizon=10.0,
    )


def kepler():
    chart = JetChart({"r": 1, "th": 1}, name="kepler")
    system = LagrangianSystem(chart, KEPLER_LAGRANGIAN, name="kepler")
    return ModelDescriptor(
        name="kepler", system=system, symmetry=ScalingSymmetry("r", 2, 3, -2),
        initial={"r": 1.0, "r'": 0.5, "th": 0.0, "th'": 1.0},
        references=[
            Reference("Kepler log-coordinate Lagrangian", "rho_lagrangian", "exp(rho)*(2*rho'^2 + th'^2/2 + 1)"),
            Reference("Kepler Herglotz Lagrangian", "herglotz_lagrangian", "2*chi^2 + th'^2/2 + 1 - chi*S"),
            Reference("Kepler contact Hamiltonian", "contact_hamiltonian", "S^2/8 + pi0_th^2/2 - 1"),
        ],
        description="Planar Kepler problem; (r, t) -> (k^2 r, k^3 t) scales L by k^-2",
        zero_energy_jet="th'", enforce_zero_energy=True, horizon=2.0,
    )


def kepler_coupled():
    """Kepler with couplings C/r + D*r^2; the symmetry only exists once C and D are promoted."""
    chart = JetChart({"r": 1, "th": 1}, parameters=("C", "D"), name="kepler-coupled")
    system = LagrangianSystem(chart, "r'^2/2 + r^2*th'^2/2 + C/r + D*r^2", name="kepler-coupled")
    return ModelDescriptor(
        name="kepler-coupled", system=system, binding={"C": 1.0, "D": 0.01},
        initial={"r": 1.0, "r'": 0.1, "th": 0.0, "th'": 1.0},
        description="Kepler problem with an r^2 term and explicit couplings", horizon=10.0,
        metadata={"couplings": ["C", "D"], "scaling": {"coordinate": "r", "A": 2}},
    )


def kepler_with_energy(sign=1):
    """
    Kepler with the energy constant promoted to z'^(2/3); ``sign`` +1 for
    open orbits (E > 0), -1 for closed ones.
    """
    if sign not in (1, -1):
        raise ModelError(f"Energy sign must be +1 or -1, got {sign}")
    base = kepler()
    promoted, lam, carried = promote_energy(base.system, base.symmetry, sign=sign)
    if sign > 0:
        initial = {"r": 1.0, "r'": 1.0, "th": 0.0, "th'": 1.2, "z": 0.0, "z'": 1.0}
        name = "kepler-energy"
    else:
        initial = {"r": 1.0, "r'": 0.0, "th": 0.0, "th'": 1.2, "z": 0.0, "z'": 1.0}
        name = "kepler-energy-closed"
    term = "+ z'^(2/3)" if sign > 0 else "- z'^(2/3)"
    quartic = "- 4/(27*pi0_z^2)" if sign > 0 else "+ 4/(27*pi0_z^2)"
    return ModelDescriptor(
        name=name, system=promoted, symmetry=carried, initial=initial,
        references=[
            Reference("energy-corrected log-coordinate Lagrangian", "rho_lagrangian",
                      f"exp(rho)*(2*rho'^2 + th'^2/2 + 1 {term})"),
            Reference("energy-promoted contact Hamiltonian", "contact_hamiltonian",
                      f"S^2/8 + pi0_th^2/2 - 1 {quartic}"),
        ],
        description=f"Kepler problem with promoted energy ({'open' if sign > 0 else 'closed'} orbits)",
        zero_energy_jet="z'", enforce_zero_energy=True, horizon=2.0,
        metadata={"energy_exponent": lam, "sign": sign, "base": "kepler"},
    )


def _rescaled_after_promotion(system, model):
    """The base symmetry re-solved on the promoted chart, or the hinted time-rescaling one."""
    if model.symmetry is not None:
        coordinate, A, B = model.symmetry.coordinate, model.symmetry.A, model.symmetry.B
    elif "scaling" in model.metadata:
        hint = model.metadata["scaling"]
        coordinate, A, B = hint["coordinate"], hint["A"], hint.get("B")
    else:
        return None
    try:
        symmetry, _ = promoted_symmetry(system, coordinate, A, B)
    except (PromotionError, SymmetryError) as e:
        logger.warning(f"No scaling symmetry survives promoting '{model.name}': {e}")
        return None
    return symmetry


def promoted_model(model, energy_sign=0, couplings=()):
    """
    A copy of ``model`` with couplings promoted to constant-velocity coordinates
    and/or the energy promoted to sign * z'^lam.  Promoted couplings start at
    their bound value as velocity; a promoted energy velocity starts at 1 and is
    solved from E_L = 0.  After coupling promotion the symmetry is re-solved with
    the promoted weights free; it is verified but not reducible.
    """
    system, symmetry = model.system, model.symmetry
    binding, initial = dict(model.binding), dict(model.initial)
    metadata = dict(model.metadata)
    zero_energy_jet, enforce = model.zero_energy_jet, model.enforce_zero_energy
    suffix = []

    if couplings:
        before = set(system.chart.orders)
        system = promote_couplings(system, couplings)
        added = [name for name in system.chart.orders if name not in before]
        for coupling, name in zip(couplings, added):
            initial[name] = 0.0
            initial[f"{name}'"] = float(binding.pop(coupling))
        symmetry = _rescaled_after_promotion(system, model)
        metadata["couplings"] = list(couplings)
        suffix.append("coupled")

    if energy_sign:
        if symmetry is None:
            raise ModelError(f"Model '{model.name}' has no scaling symmetry to promote the energy with")
        before = set(system.chart.orders)
        system, lam, symmetry = promote_energy(system, symmetry, sign=energy_sign)
        name = next(n for n in system.chart.orders if n not in before)
        initial.setdefault(name, 0.0)
        initial.setdefault(f"{name}'", 1.0)
        zero_energy_jet, enforce = f"{name}'", True
        metadata.update({"energy_exponent": lam, "sign": energy_sign, "base": model.name})
        suffix.append("energy")

    if not suffix:
        return model
    name = "-".join([model.name] + suffix)
    logger.info(f"Promoted model '{model.name}' to '{name}'")
    return ModelDescriptor(
        name=name, system=system, symmetry=symmetry, binding=binding, initial=initial,
        description=f"{model.description} ({', '.join(suffix)} promoted)".strip(),
        zero_energy_jet=zero_energy_jet, enforce_zero_energy=enforce, horizon=model.horizon, metadata=metadata,
    )


def modified_kepler():
    chart = JetChart({"r": 3, "th": 1}, name="modified-kepler")
    system = LagrangianSystem(chart, f"{KEPLER_LAGRANGIAN} + r^(3/4)*r'''^(1/2)", name="modified-kepler")
    radicand = "2*(chi'' - 6*chi*chi' + 4*chi^3)"
    return ModelDescriptor(
        name="modified-kepler", system=system, symmetry=ScalingSymmetry("r", 2, 3, -2),
        initial={"r": 1.0, "r'": 0.1, "r''": 0.0, "r'''": 2.0, "r[4]": 0.0, "r[5]": 0.0, "th": 0.0, "th'": 1.0},
        references=[
            Reference("modified Kepler f", "f",
                      "2*rho'^2 + th'^2/2 + 1 + sqrt(2*(rho''' - 6*rho'*rho'' + 4*rho'^3))"),
            Reference("modified Kepler Herglotz Lagrangian", "herglotz_lagrangian",
                      f"2*chi^2 + th'^2/2 + 1 + sqrt({radicand}) - chi*S"),
            Reference("modified Kepler Hamiltonian", "rho_hamiltonian",
                      "-exp(rho)*(2*rho'^2 + 1) + exp(-rho)*p0_th^2/2 - exp(2*rho)/(2*p2_rho) + rho''*p1_rho"
                      " + 6*rho'*rho''*p2_rho - 4*rho'^3*p2_rho + rho'*p0_rho"),
            Reference("modified Kepler contact Hamiltonian", "contact_hamiltonian",
                      "-2*chi^2 + pi0_th^2/2 - 1 - 1/(2*pi1_chi) + chi'*pi0_chi + 6*chi*chi'*pi1_chi"
                      " - 4*chi^3*pi1_chi + chi*S"),
            Reference("modified Kepler S equation", "row:S",
                      "2*chi^2 + pi0_th^2/2 + 1 + 1/pi1_chi - chi*S"),
        ],
        description="Kepler problem with a third-derivative term r^(3/4) r'''^(1/2)",
        zero_energy_jet="r[5]", enforce_zero_energy=True, horizon=2.0,
    )


# ---------------------------------------------------------------------------
# FLRW


def _potential(chart, potential):
    try:
        V = chart.parse(potential)
    except ExpressionError as e:
        raise ModelError(f"The potential may depend on phi only: {e}") from e
    phi = chart.jet("phi")
    stray = V.free_symbols - {phi}
    if stray:
        raise ModelError(f"The potential may depend on phi only, found {sorted(s.name for s in stray)}")
    return V, differentiate(V, phi)


FLRW_LAGRANGIAN = (
    "-v'^2/(24*pi*G*v) - lam/(4*pi*G)*(v''^2/v - 4*v''*v'^2/(3*v^2) + 5*v'^4/(9*v^3))"
    " + v*(phi''^2/2 + phi'^2/2 - ({V}))"
)
LAPSE_LAGRANGIAN = (
    "-v'^2/(24*pi*G*v*N) - lam/(4*pi*G)*(v''^2/(v*N^3) - v'^4/(3*v^3*N^3) - 2*v'*v''*N'/(v*N^4)"
    " + v'^2*N'^2/(v*N^5)) + v*N*(phi''^2/2 + phi'^2/2 - ({V}))"
)
FLRW_BINDING = {"lam": 0.05, "G": 1.0, "pi": float(np.pi)}
FLRW_INITIAL = {"v": 1.0, "v'": 0.3, "v''": 0.1, "v'''": 0.0, "phi": 0.1, "phi'": 0.0, "phi''": 0.0, "phi'''": 0.0}


def _flrw_references(V, dV):
    matter = f"(phi''^2/2 + phi'^2/2 - ({V}))"
    return [
        Reference("FLRW log-coordinate Lagrangian", "rho_lagrangian",
                  f"-exp(rho)*((3*rho'^2 + 2*lam*(2*rho'^4 + 6*rho'^2*rho'' + 9*rho''^2))/(72*pi*G)"
                  f" - phi''^2/2 - phi'^2/2 + ({V}))"),
        Reference("FLRW Herglotz Lagrangian", "herglotz_lagrangian",
                  f"-(3*chi^2 + 2*lam*(2*chi^4 + 6*chi^2*chi' + 9*chi'^2))/(72*pi*G) + {matter} - chi*S"),
        Reference("FLRW Pi0_chi", "herglotz_momentum:chi:0", "-lam*(chi^2 + 3*chi')/(6*pi*G)"),
        Reference("FLRW Pi1_phi", "herglotz_momentum:phi:1", "phi''"),
        Reference("FLRW Pi0_phi", "herglotz_momentum:phi:0", "phi' - phi''' - chi*phi''"),
        Reference("FLRW contact Hamiltonian", "contact_hamiltonian",
                  f"(3*chi^2 + 2*lam*chi^4)/(72*pi*G) - chi^2*pi0_chi/3 - pi*G*pi0_chi^2/lam + phi'*pi0_phi"
                  f" - phi'^2/2 + ({V}) + pi1_phi^2/2 + chi*S"),
        Reference("FLRW chi equation", "row:chi", "-chi^2/3 - 2*pi*G*pi0_chi/lam"),
        Reference("FLRW Pi0_chi equation", "row:pi0_chi",
                  "-(3*chi + 4*lam*chi^3)/(36*pi*G) - chi*pi0_chi/3 - S"),
        Reference("FLRW Pi0_phi equation", "row:pi0_phi", f"-({dV}) - chi*pi0_phi"),
        Reference("FLRW Pi1_phi equation", "row:pi1_phi", "-pi0_phi + phi' - chi*pi1_phi"),
        Reference("FLRW S equation", "row:S",
                  f"-(3*chi^2 + 2*lam*chi^4)/(72*pi*G) - pi*G*pi0_chi^2/lam + phi'^2/2 - ({V})"
                  f" + pi1_phi^2/2 - chi*S"),
        Reference("FLRW full Hamiltonian", "rho_hamiltonian",
                  f"exp(rho)*(3*rho'^2 + 2*lam*rho'^4)/(72*pi*G) + rho'*p0_rho - rho'^2*p1_rho/3"
                  f" - pi*G*exp(-rho)*p1_rho^2/lam + phi'*p0_phi - exp(rho)*(phi'^2/2 - ({V}))"
                  f" + exp(-rho)*p1_phi^2/2"),
        Reference("FLRW chi''' equation", "chi_top",
                  f"(chi^2 + 2*chi')/(12*lam) - chi^2*chi' - 3*chi'^2/2 - 2*chi*chi'' + 2*pi*G*{matter}/lam"),
    ]


def flrw_fr(potential="phi^2/2", lam=0.05, G=1.0):
    """Flat FLRW with f(R) = R - lam*R^2 and a higher-derivative scalar field, in proper time."""
    scratch = JetChart({"v": 2, "phi": 2})
    V, dV = _potential(scratch, potential)
    chart = JetChart({"v": 2, "phi": 2}, parameters=("lam", "G", "pi"), name="flrw")
    system = LagrangianSystem(chart, FLRW_LAGRANGIAN.format(V=V), name="flrw")
    binding = dict(FLRW_BINDING, lam=lam, G=G)
    return ModelDescriptor(
        name="flrw", system=system, symmetry=ScalingSymmetry("v", 1, 0, 1), binding=binding,
        initial=dict(FLRW_INITIAL), references=_flrw_references(V, dV),
        description="Higher-order FLRW cosmology in the volume variable v = a^3",
        zero_energy_jet="v'''", enforce_zero_energy=True, horizon=5.0,
        metadata={"potential": str(V), "ricci_oracle": True},
    )


def _flrw_lapse_references(V):
    matter = f"(phi''^2/2 + phi'^2/2 - ({V}))"
    return [
        Reference("general-lapse Herglotz Lagrangian", "herglotz_lagrangian",
                  f"-chi^2/(24*pi*G*N) - lam/(4*pi*G)*(N'^2*chi^2/N^5 - 2*N'*chi*(chi^2 + chi')/N^4"
                  f" + (2*chi^2*(chi^2 + 3*chi') + 3*chi'^2)/(3*N^3)) + N*{matter} - chi*S"),
        Reference("general-lapse action", "action",
                  "-chi/(12*pi*G*N) + lam/(2*pi*G)*(3*N'^2*chi/N^5 - (N''*chi + N'*(3*chi' + chi^2))/N^4"
                  " + (3*chi'' - chi^3 + 3*chi'*chi)/(3*N^3))"),
        Reference("general-lapse Pi0_chi", "herglotz_momentum:chi:0",
                  "lam/(2*pi*G*N^3)*(N'*chi/N - (chi^2 + chi'))"),
        Reference("general-lapse Pi1_phi", "herglotz_momentum:phi:1", "N*phi''"),
        Reference("general-lapse Pi0_phi", "herglotz_momentum:phi:0", "N*phi' - N*phi''' - N'*phi'' - chi*N*phi''"),
        # N'^2 coefficient 15/2, N'N'' coefficient -10 and chi*N*N'/(6*lam), derived from S and L^H above
        Reference("general-lapse chi''' equation", "chi_top",
                  "(N'''*chi + 2*N''*(2*chi' + chi^2) + N'*(6*chi'' + 9*chi*chi' + chi^3))/N"
                  " - (15*N'^2*(2*chi' + chi^2) + 20*chi*N'*N'')/(2*N^2) + 15*chi*N'^3/N^3 - chi*N*N'/(6*lam)"
                  f" + 2*pi*G*N^4*{matter}/lam - 2*chi*chi'' - 3*chi'^2/2 - chi^2*chi'"
                  " + N^2*(2*chi' + chi^2)/(12*lam)"),
    ]


def flrw_general_lapse(lapse="1", potential="phi^2/2", lam=0.05, G=1.0, horizon=5.0, checkpoints=11):
    """FLRW with a prescribed lapse N(t); N = 1 reproduces the proper-time model up to a total derivative."""
    scratch = JetChart({"v": 2, "phi": 2})
    V, _ = _potential(scratch, potential)
    chart = JetChart({"v": 2, "phi": 2}, parameters=("lam", "G", "pi"), lapse=("N", lapse), name="flrw-lapse")
    binding = dict(FLRW_BINDING, lam=lam, G=G)
    N = chart.lapse_expression
    for t in np.linspace(0.0, horizon, checkpoints):
        value = evaluate(N, dict(binding, t=float(t)))
        if not value > 0:
            raise ModelError(f"Lapse N = {N} is not positive at t = {t:g} (value {value:g})")
    system = LagrangianSystem(chart, LAPSE_LAGRANGIAN.format(V=V), name="flrw-lapse")
    return ModelDescriptor(
        name="flrw-lapse", system=system, symmetry=ScalingSymmetry("v", 1, 0, 1), binding=binding,
        initial=dict(FLRW_INITIAL), references=_flrw_lapse_references(V),
        description="Higher-order FLRW cosmology with a prescribed lapse", zero_energy_jet="v'''",
        enforce_zero_energy=True, horizon=horizon, metadata={"potential": str(V), "lapse": str(N)},
    )


CATALOG = {
    "pais-uhlenbeck": pais_uhlenbeck,
    "pais-uhlenbeck-damped": lambda: pais_uhlenbeck(damping=0.1),
    "damped-rotor": damped_rotor,
    "kepler": kepler,
    "kepler-coupled": kepler_coupled,
    "kepler-energy": lambda: kepler_with_energy(1),
    "kepler-energy-closed": lambda: kepler_with_energy(-1),
    "modified-kepler": modified_kepler,
    "flrw": flrw_fr,
    "flrw-lapse": flrw_general_lapse,
}


def catalog_names():
    return sorted(CATALOG)


def build_model(name):
    try:
        builder = CATALOG[name]
    except KeyError:
        raise ModelError(f"Unknown model '{name}'; known models: {', '.join(catalog_names())}") from None
    descriptor = builder()
    logger.info(f"Built model '{name}'")
    return descriptor
