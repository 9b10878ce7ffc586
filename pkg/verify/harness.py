"""
Runs every check that applies to a model and collects a VerificationReport.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

from expr import ExpressionError
from integrate import IntegrationError
from mech import MechanicsError
from models import CATALOG, ModelError, build_model, flrw_fr, flrw_general_lapse
from reduce import ReductionError
from verify.crosscheck import (
    check_energy_promotion, check_reduced_route, check_symplectification, cross_check_full_vs_reduced,
)
from verify.identities import (
    check_contact_identity, check_energy_conservation, check_herglotz_condition, divergence_check,
)
from verify.multiplier import first_order_contact, multiplier_check
from verify.numeric import full_flow, hamiltonian_flow, hamiltonian_initial, mapped_initial, reduced_flow, run
from verify.report import NUMERIC, SYMBOLIC, CheckResult, VerificationReport
from verify.symbolic import symbolic_residual_suite

logger = logging.getLogger(__name__)

LIBRARY_ERRORS = (ExpressionError, MechanicsError, ReductionError, IntegrationError, ModelError)

DEFAULT_TOLERANCES = {
    "cross_check": 1e-6,
    "herglotz": 1e-9,
    "herglotz_reparameterized": 1e-8,
    "contact_identity": 1e-8,
    "zero_surface": 1e-7,
    "energy": 1e-8,
    "multiplier": 1e-6,
    "divergence": 1e-6,
    "reduced_route": 1e-6,
    "symplectification": 1e-9,
    "promotion_velocity": 1e-8,
    "promotion_orbit": 1e-4,
}


class VerificationHarness:
    def __init__(self, settings=None, equivalence=None, tolerances=None, horizons=None,
                 finite_difference_step=1e-6, workers=1):
        self.settings = dict(settings or {})
        self.equivalence = dict(equivalence or {})
        self.tolerances = {**DEFAULT_TOLERANCES, **dict(tolerances or {})}
        self.horizons = dict(horizons or {})
        self.step = finite_difference_step
        self.workers = max(1, int(workers))
        self.logger = logging.getLogger(__name__)

    def horizon(self, model, key=None):
        if key is not None and key in self.horizons:
            return float(self.horizons[key])
        return float(self.horizons.get(model.name, model.horizon))

    # -- planning -------------------------------------------------------------

    def plan(self, model):
        """(job name, kind, callable returning a list of CheckResult) for every applicable check."""
        jobs = [("symbolic", SYMBOLIC, lambda: symbolic_residual_suite(model, self.equivalence,
                                                                      self._companions(model)))]
        jobs.append(("divergence", NUMERIC, lambda: divergence_check(
            model, settings=self.settings, step=self.step, tolerance=self.tolerances["divergence"])))
        if model.chart.contact:
            jobs.append(("contact-run", NUMERIC, lambda: self._contact_run(model)))
        elif model.chart.lapse_name is None:
            jobs.append(("energy-conservation", NUMERIC, lambda: self._energy_run(model)))
        if model.reducible:
            jobs.append(("cross-check", NUMERIC, lambda: cross_check_full_vs_reduced(
                model, horizon=self.horizon(model), settings=self.settings,
                tolerance=self.tolerances["cross_check"])))
            jobs.append(("reduced-run", NUMERIC, lambda: self._reduced_run(model)))
            jobs.append(("reduced-route", NUMERIC, lambda: check_reduced_route(
                model, horizon=self.horizon(model), settings=self.settings,
                tolerance=self.tolerances["reduced_route"])))
            jobs.append(("symplectification", NUMERIC, lambda: check_symplectification(
                model, horizon=self.horizon(model, "symplectification"), settings=self.settings,
                tolerance=self.tolerances["symplectification"])))
        if self._has_first_order_contact(model):
            jobs.append(("multiplier", NUMERIC, lambda: multiplier_check(
                model, horizon=self.horizon(model), settings=self.settings,
                tolerance=self.tolerances["multiplier"])))
        if model.reducible and model.metadata.get("base") in CATALOG and "energy_exponent" in model.metadata:
            jobs.append(("energy-promotion", NUMERIC, lambda: check_energy_promotion(
                model, build_model(model.metadata["base"]), horizon=self.horizon(model), settings=self.settings,
                tolerances={"velocity": self.tolerances["promotion_velocity"],
                            "orbit": self.tolerances["promotion_orbit"]})))
        return jobs

    def _companions(self, model):
        lapse = model.metadata.get("lapse")
        if lapse is None:
            return {}
        potential = model.metadata.get("potential", "phi^2/2")
        lam, G = model.binding.get("lam", 0.05), model.binding.get("G", 1.0)
        companions = {"proper-time": flrw_fr(potential=potential, lam=lam, G=G)}
        if lapse != "1":
            companions["unit-lapse"] = flrw_general_lapse(lapse="1", potential=potential, lam=lam, G=G)
        return companions

    @staticmethod
    def _has_first_order_contact(model):
        try:
            first_order_contact(model)
            return True
        except LIBRARY_ERRORS:
            return False

    # -- numeric runs ---------------------------------------------------------

    def _energy_run(self, model):
        system = full_flow(model, settings=self.settings)
        trajectory = run(system, system.initial_state(model.initial_values()), 0.0, self.horizon(model), self.settings,
                         every_step=True)
        return [check_energy_conservation(model, trajectory, system, model.parameter_binding(),
                                          self.tolerances["energy"])]

    def _contact_run(self, model):
        binding = model.parameter_binding()
        system, h = hamiltonian_flow(model, binding, self.settings)
        start = hamiltonian_initial(model, h, model.initial_values(), binding)
        trajectory = run(system, system.initial_state(start), 0.0, self.horizon(model), self.settings, every_step=True)
        checks = check_contact_identity(h, trajectory, system, binding, model.chart,
                                        self.tolerances["contact_identity"], self.tolerances["zero_surface"])
        checks.append(check_herglotz_condition(h, model.system, trajectory, system, binding,
                                               self.tolerances["herglotz"]))
        return checks

    def _reduced_run(self, model):
        binding = model.parameter_binding()
        result = model.reduction
        system = reduced_flow(model, binding, self.settings)
        start = mapped_initial(model, model.initial_values(), binding)
        trajectory = run(system, system.initial_state(start), 0.0, self.horizon(model), self.settings, every_step=True)
        key = "herglotz_reparameterized" if result.symmetry.reparameterizes else "herglotz"
        checks = check_contact_identity(result.reduced_hamiltonian, trajectory, system, binding,
                                        result.reduced_chart, self.tolerances["contact_identity"],
                                        self.tolerances["zero_surface"], name="reduced:contact-identity")
        checks.append(check_herglotz_condition(result.reduced_hamiltonian, result.herglotz_system, trajectory,
                                               system, binding, self.tolerances[key],
                                               name="reduced:herglotz-condition"))
        return checks

    # -- execution ------------------------------------------------------------

    def _execute(self, job):
        name, kind, build = job
        try:
            return build()
        except LIBRARY_ERRORS as e:
            self.logger.error(f"Check '{name}' failed to run: {e}")
            return [CheckResult.failure(name, kind, e)]

    def run(self, model):
        if model.reducible:
            try:
                model.reduction
            except LIBRARY_ERRORS as e:
                self.logger.error(f"Reduction of '{model.name}' failed: {e}")
        jobs = self.plan(model)
        self.logger.info(f"Verifying '{model.name}' with {len(jobs)} jobs on {self.workers} worker(s)")
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                outcomes = list(pool.map(self._execute, jobs))
        else:
            outcomes = [self._execute(job) for job in jobs]

        report = VerificationReport(model.name, metadata={
            "integrator": self.settings, "equivalence": self.equivalence, "tolerances": self.tolerances,
            "horizon": self.horizon(model), "finite_difference_step": self.step,
        })
        for checks in outcomes:
            part = VerificationReport(model.name)
            part.extend(checks)
            report = report.merge(part)
        passed = len(report.checks) - len(report.failures)
        self.logger.info(f"'{model.name}': {passed}/{len(report.checks)} checks pass")
        return report


def verify_model(model, **options):
    return VerificationHarness(**options).run(model)
