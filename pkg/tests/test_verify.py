import json
import math

import pandas as pd
import pytest

from expr import Equivalence, Verdict
from models import ModelError, build_model, promoted_model
from reduce import ReductionError
from verify import (
    NUMERIC, SYMBOLIC, CheckResult, VerificationHarness, VerificationReport, check_contact_identity,
    check_herglotz_condition, cross_check_full_vs_reduced, divergence_check, lapse_consistency, multiplier_check,
    multiplier_rows, run, symbolic_residual_suite, verify_model,
)
from verify.numeric import hamiltonian_flow, hamiltonian_initial

TIGHT = {"method": "dopri5", "rel_tol": 1e-10, "abs_tol": 1e-12, "samples": 50}


# -- report -------------------------------------------------------------------

def test_numeric_check_passes_within_tolerance():
    check = CheckResult.numeric("drift", [1e-9, -3e-9], 1e-8, reference=[1.0, 2.0])
    assert check.passed
    assert check.kind == NUMERIC
    assert check.max_abs == pytest.approx(3e-9)
    assert check.max_rel == pytest.approx(1.5e-9)
    assert not CheckResult.numeric("drift", [1e-9, 2e-8], 1e-8).passed
    assert not CheckResult.numeric("drift", [math.nan], 1e-8).passed


def test_symbolic_check_follows_the_verdict():
    assert CheckResult.symbolic("same", Equivalence(Verdict.PROVED_EQUAL)).passed
    different = CheckResult.symbolic("other", Equivalence(Verdict.PROVED_DIFFERENT, 1, 0.5, {"x": 1.0}))
    assert not different.passed
    assert different.kind == SYMBOLIC
    assert "x" in different.detail
    unknown = CheckResult.symbolic("unknown", Equivalence(Verdict.INCONCLUSIVE, 3, 0.0))
    assert not unknown.passed
    assert math.isinf(unknown.max_abs)


def _report():
    report = VerificationReport("oscillator", metadata={"horizon": 1.0})
    report.add(CheckResult.numeric("b-check", [0.0], 1e-9))
    report.add(CheckResult.failure("a-check", NUMERIC, ReductionError("no symmetry")))
    return report.sort()


def test_report_summary_and_lookup():
    report = _report()
    assert [c.name for c in report.checks] == ["a-check", "b-check"]
    assert not report.passed
    assert report.summary()["failed"] == 1
    assert report["b-check"].passed
    assert "ReductionError: no symmetry" in report["a-check"].detail
    with pytest.raises(KeyError):
        report["missing"]


def test_reports_merge_by_check_name():
    first = VerificationReport("oscillator", metadata={"horizon": 1.0})
    first.add(CheckResult.numeric("c-check", [0.0], 1e-9))
    merged = first.merge(_report())
    assert [c.name for c in merged.checks] == ["a-check", "b-check", "c-check"]
    assert merged.metadata == {"horizon": 1.0}
    assert len(first.checks) == 1
    with pytest.raises(ValueError):
        first.merge(VerificationReport("kepler"))


def test_report_json_has_no_infinities():
    payload = json.loads(_report().to_json())
    assert set(payload) == {"summary", "results"}
    failed = next(row for row in payload["results"] if row["name"] == "a-check")
    assert failed["max_abs"] is None
    assert failed["passed"] is False


def test_report_text_and_csv(tmp_path):
    report = _report()
    text = report.to_text()
    assert text.startswith("model = oscillator\n")
    assert "a-check.pass = false" in text
    assert text.endswith("all_passed = false\n")
    path = report.to_csv(tmp_path / "report.csv")
    frame = pd.read_csv(path)
    assert list(frame["name"]) == ["a-check", "b-check"]


# -- checks -------------------------------------------------------------------

def test_contact_identities_hold_along_the_damped_oscillator(damped_pu):
    binding = damped_pu.parameter_binding()
    system, h = hamiltonian_flow(damped_pu, binding, TIGHT)
    start = hamiltonian_initial(damped_pu, h, damped_pu.initial_values(), binding)
    trajectory = run(system, system.initial_state(start), 0.0, 2.0, TIGHT, every_step=True)
    checks = check_contact_identity(h, trajectory, system, binding, damped_pu.chart)
    checks.append(check_herglotz_condition(h, damped_pu.system, trajectory, system, binding))
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_multiplier_flow_matches_the_herglotz_flow(rotor):
    rows = multiplier_rows(rotor.system)
    assert [row.symbol.name for row in rows] == ["th''", "z", "mult"]
    checks = multiplier_check(rotor, horizon=5.0, settings=TIGHT)
    assert {c.name for c in checks} == {"multiplier:th", "multiplier:th'", "multiplier:z"}
    assert all(c.passed for c in checks)


def test_multiplier_needs_a_first_order_contact_system(pu):
    with pytest.raises(ModelError):
        multiplier_rows(pu.system)


def test_divergence_of_the_oscillator_flows(pu):
    checks = divergence_check(pu)
    assert {c.name for c in checks} == {"divergence:symplectic", "divergence:reduced-contact-law"}
    assert all(c.passed for c in checks)


def test_kepler_symbolic_suite_passes(kepler):
    checks = symbolic_residual_suite(kepler)
    assert checks
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


def test_symmetry_of_promoted_couplings_is_checked():
    model = promoted_model(build_model("kepler-coupled"), couplings=("C", "D"))
    checks = {c.name: c for c in symbolic_residual_suite(model)}
    assert checks["symbolic:symmetry"].passed
    assert "symbolic:legendre" not in checks
    assert not any(name.startswith("symbolic:pullback") for name in checks)


@pytest.mark.slow
def test_pais_uhlenbeck_symbolic_suite_passes(pu):
    checks = symbolic_residual_suite(pu)
    names = {c.name for c in checks}
    assert "symbolic:route-agreement" in names
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


@pytest.mark.slow
def test_pais_uhlenbeck_full_and_reduced_runs_agree(pu):
    checks = cross_check_full_vs_reduced(pu, horizon=2.0, settings=TIGHT)
    assert any(c.name == "cross-check:chi" for c in checks)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


@pytest.mark.slow
def test_flrw_full_and_reduced_runs_agree(flrw):
    checks = {c.name: c for c in cross_check_full_vs_reduced(flrw, horizon=5.0, settings=TIGHT, tolerance=1e-6)}
    assert checks["cross-check:phi"].passed
    assert checks["cross-check:phi"].max_abs <= 1e-6
    assert all(c.passed for c in checks.values()), [c for c in checks.values() if not c.passed]


@pytest.mark.slow
def test_unit_lapse_reproduces_proper_time():
    checks = lapse_consistency(build_model("flrw-lapse"), build_model("flrw"))
    assert all(c.passed for c in checks)


# -- harness ------------------------------------------------------------------

def test_harness_plans_by_model_shape(pu, rotor):
    harness = VerificationHarness()
    assert [name for name, _, _ in harness.plan(rotor)] == ["symbolic", "divergence", "contact-run", "multiplier"]
    planned = [name for name, _, _ in harness.plan(pu)]
    assert "energy-conservation" in planned
    assert "cross-check" in planned
    assert "contact-run" not in planned


def test_harness_horizons():
    harness = VerificationHarness(horizons={"kepler": 0.5, "symplectification": 1.0})
    kepler = build_model("kepler")
    assert harness.horizon(kepler) == 0.5
    assert harness.horizon(kepler, "symplectification") == 1.0
    assert harness.horizon(build_model("damped-rotor")) == 10.0


def test_rotor_passes_every_check(rotor):
    report = verify_model(rotor, settings=TIGHT)
    assert report.checks
    assert report.passed, report.to_text()
    assert report.metadata["horizon"] == rotor.horizon


def test_reports_do_not_depend_on_the_worker_count(rotor):
    serial = verify_model(rotor, settings=TIGHT)
    threaded = VerificationHarness(settings=TIGHT, workers=2).run(rotor)
    assert serial.to_json() == threaded.to_json()
    assert serial.to_json() == verify_model(rotor, settings=TIGHT).to_json()


@pytest.mark.slow
def test_kepler_passes_every_check(kepler):
    report = VerificationHarness(settings=TIGHT, workers=2).run(kepler)
    assert report.passed, report.to_text()
