import os
from fractions import Fraction

import pytest

from expr import equivalent, print_expression
from models import (
    MODEL_FILES, ModelError, ModelFileError, build_model, catalog_names, flrw_fr, flrw_general_lapse, load_model,
    load_model_file, pais_uhlenbeck, parse_model, promoted_model,
)

BUNDLED = {
    "pais_uhlenbeck.model": "pais-uhlenbeck",
    "kepler.model": "kepler",
    "flrw.model": "flrw",
    "damped_rotor.model": "damped-rotor",
}

HEAVY = {"modified-kepler", "flrw", "flrw-lapse"}


def _reference_cases():
    for name in catalog_names():
        marks = [pytest.mark.slow] if name in HEAVY else []
        yield pytest.param(name, marks=marks, id=name)


def test_catalog_names():
    assert set(catalog_names()) == {
        "pais-uhlenbeck", "pais-uhlenbeck-damped", "damped-rotor", "kepler", "kepler-coupled", "kepler-energy",
        "kepler-energy-closed", "modified-kepler", "flrw", "flrw-lapse",
    }


def test_unknown_models_are_reported():
    with pytest.raises(ModelError):
        build_model("harmonic")
    with pytest.raises(ModelError):
        load_model("no/such/file.model")


@pytest.mark.parametrize("filename, catalogued", sorted(BUNDLED.items()))
def test_bundled_files_match_the_catalog(filename, catalogued):
    from_file = load_model_file(os.path.join(MODEL_FILES, filename))
    builtin = build_model(catalogued)
    assert from_file.name == os.path.splitext(filename)[0]
    assert sorted(from_file.chart.orders.items()) == sorted(builtin.chart.orders.items())
    assert from_file.chart.contact == builtin.chart.contact
    # printed on one chart, parsed on the other
    L = builtin.chart.parse(print_expression(from_file.system.L))
    assert equivalent(L, builtin.system.L).holds
    if builtin.symmetry is not None:
        sym = from_file.symmetry
        assert (sym.A, sym.B, sym.degree) == (builtin.symmetry.A, builtin.symmetry.B, builtin.symmetry.degree)


def test_model_file_solves_missing_weights():
    model = load_model_file(os.path.join(MODEL_FILES, "kepler.model"))
    assert model.symmetry.B == 3
    assert model.symmetry.degree == -2


def test_model_file_defaults():
    model = load_model(os.path.join(MODEL_FILES, "pais_uhlenbeck.model"))
    assert model.binding == {"lam": 0.1}
    assert model.initial["q'"] == 0.1
    assert model.reducible


@pytest.mark.parametrize("text, line", [
    ("[coordinates]\nq: two\n[lagrangian]\nq'^2\n", 2),
    ("[coordinates]\nq: 1\n[forces]\nq\n", 3),
    ("q: 1\n[coordinates]\nq: 1\n", 1),
    ("[coordinates]\nq: 1\n[lagrangian]\nq'^2 +\n", 4),
    ("[coordinates]\nq: 1\n[lagrangian]\nq'^2/2\n[initial]\nq = 1\nx' = 2\n", 7),
    ("[coordinates]\nq: 1\n[lagrangian]\nq'^2/2\n[initial]\nq = one\n", 6),
    ("[coordinates]\nr: 1\n[lagrangian]\nr'^2/2 + 1/r\n[symmetry]\ncoordinate = r\nA = 2\nB = 1\n", 8),
    ("[coordinates]\nq: 1\n[lagrangian]\nq'^2/2\n[symmetry]\ncoordinate = x\n", 6),
])
def test_model_file_errors_carry_line_numbers(text, line):
    with pytest.raises(ModelFileError) as raised:
        parse_model(text, path="broken.model")
    assert raised.value.line == line
    assert str(raised.value).startswith(f"broken.model:{line}: ")


def test_model_file_without_lagrangian():
    with pytest.raises(ModelFileError) as raised:
        parse_model("[coordinates]\nq: 1\n")
    assert raised.value.line is None


def test_contact_terms_make_a_contact_chart():
    model = parse_model("[coordinates]\nth: 1\n[parameters]\ngam = 0.2\n[contact]\nterm = -gam*z\n"
                        "[lagrangian]\n-th'^2/2\n")
    assert model.chart.contact
    assert model.chart.action.name == "z"
    assert model.binding == {"gam": 0.2}


@pytest.mark.parametrize("name", list(_reference_cases()))
def test_reference_expressions_are_reproduced(name):
    model = build_model(name)
    failed = [(ref.anchor, outcome.verdict.value) for ref, outcome in model.reference_checks() if not outcome.holds]
    assert not failed


@pytest.mark.slow
def test_general_lapse_chi_equation_with_a_moving_lapse():
    model = flrw_general_lapse(lapse="1 + t^2/10")
    outcomes = {ref.anchor: outcome for ref, outcome in model.reference_checks()}
    assert outcomes["general-lapse chi''' equation"].holds


@pytest.mark.parametrize("name", ["kepler", "kepler-energy", "kepler-energy-closed"])
def test_zero_energy_initial_data(name):
    model = build_model(name)
    assert model.energy_at(model.initial_values()) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
def test_flrw_initial_data_lies_on_the_constraint(flrw):
    assert flrw.energy_at(flrw.initial_values()) == pytest.approx(0.0, abs=1e-10)


def test_zero_energy_needs_a_declared_jet(rotor):
    with pytest.raises(ModelError):
        rotor.initial_values(enforce_zero_energy=True)


def test_missing_parameter_values():
    model = pais_uhlenbeck()
    model.binding = {}
    with pytest.raises(ModelError):
        model.parameter_binding()
    assert model.parameter_binding({"lam": 0.2}) == {"lam": 0.2}


@pytest.mark.parametrize("build", [
    lambda: pais_uhlenbeck(lam=0),
    lambda: pais_uhlenbeck(damping=-0.1),
    lambda: flrw_fr(potential="phi^2/2 + v"),
    lambda: flrw_general_lapse(lapse="1 - t"),
])
def test_invalid_builder_arguments(build):
    with pytest.raises(ModelError):
        build()


def test_models_without_symmetry_refuse_reduction(rotor):
    assert not rotor.reducible
    with pytest.raises(ModelError):
        rotor.reduction


def test_promoted_energy_model(kepler, assert_equal):
    model = promoted_model(kepler, energy_sign=-1)
    assert model.name == "kepler-energy"
    assert model.metadata["energy_exponent"] == Fraction(2, 3)
    assert model.metadata["base"] == "kepler"
    assert model.zero_energy_jet == "z'"
    assert model.energy_at(model.initial_values()) == pytest.approx(0.0, abs=1e-12)
    assert_equal(model.reduction.contact_H, "S^2/8 + pi0_th^2/2 - 1 + 4/(27*pi0_z^2)", model.reduction.reduced_chart)


def test_promoted_couplings_model():
    base = build_model("kepler-coupled")
    model = promoted_model(base, couplings=("C", "D"))
    assert model.name == "kepler-coupled-coupled"
    assert (model.symmetry.B, model.symmetry.degree) == (3, -2)
    assert model.symmetry.weights == {"zC": 3, "zD": -3}
    assert not model.reducible
    with pytest.raises(ModelError):
        model.reduction
    assert model.initial["zC'"] == 1.0
    assert model.initial["zD'"] == 0.01
    assert "C" not in model.binding
    with pytest.raises(ModelError):
        promoted_model(base, energy_sign=1)


def test_promoted_lam_keeps_the_flrw_scaling(flrw):
    model = promoted_model(flrw, couplings=("lam",))
    assert model.initial["zlam'"] == 0.05
    assert (model.symmetry.coordinate, model.symmetry.B, model.symmetry.degree) == ("v", 0, 1)
    assert model.symmetry.weights == {"zlam": 0}


def test_promotion_without_options_is_the_same_model(kepler):
    assert promoted_model(kepler) is kepler
