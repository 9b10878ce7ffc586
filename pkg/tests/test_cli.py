import json

import pandas as pd
import pytest

from config import load_config, tolerance, verify_options
from main import EXIT_INPUT, EXIT_OK, build_parser, main, parse_run_config
from models import ModelError


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("CONTACT_REDUCTION_CONFIG", raising=False)
    return tmp_path


def test_list_shows_the_catalog(capsys):
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "pais-uhlenbeck" in out
    assert "kepler.model" in out


def test_source_is_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["simulate"])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["reduce", "--model", "kepler", "--file", "kepler.model"])


def test_run_config_collects_options():
    cfg = parse_run_config(["simulate", "--model", "kepler", "--reduced", "--dt", "0.01",
                            "--promote-coupling", "C", "--promote-coupling", "D"])
    assert cfg.reduced and cfg.dt == 0.01
    assert cfg.promote_coupling == ["C", "D"]
    assert cfg.format == "csv"


def test_run_config_validation():
    cfg = parse_run_config(["list"])
    cfg.format = "xml"
    with pytest.raises(ModelError):
        cfg.validate()


def test_reduce_prints_the_reduced_objects(capsys, workspace):
    assert main(["reduce", "--model", "pais-uhlenbeck", "--output", "reduced/pu.txt"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "symmetry = q A=1 B=0 Lambda=2" in out
    assert "\nL^H = " in out
    assert "\nH^c = " in out
    assert "\nmap.rho = " in out
    assert (workspace / "reduced" / "pu.txt").read_text(encoding="utf-8") == out


def test_reduce_without_symmetry_is_an_input_error():
    assert main(["reduce", "--model", "kepler-coupled"]) == EXIT_INPUT
    assert main(["reduce", "--model", "kepler-coupled", "--promote-coupling", "C", "--promote-coupling", "D"]) \
        == EXIT_INPUT


def test_broken_model_file_is_an_input_error(workspace):
    path = workspace / "broken.model"
    path.write_text("[coordinates]\nq: two\n[lagrangian]\nq'^2\n", encoding="utf-8")
    assert main(["simulate", "--file", str(path)]) == EXIT_INPUT


def test_simulate_writes_a_fixed_step_csv(workspace):
    assert main(["simulate", "--model", "damped-rotor", "--t-end", "1", "--dt", "0.1"]) == EXIT_OK
    frame = pd.read_csv(workspace / "output" / "damped-rotor_full.csv")
    assert list(frame.columns) == ["t", "th", "th'", "z"]
    assert len(frame) == 11
    assert frame["t"].iloc[-1] == pytest.approx(1.0)


def test_simulate_reduced_kepler_recovers_physical_time(workspace):
    assert main(["simulate", "--model", "kepler", "--reduced", "--t-end", "0.5", "--format", "json"]) == EXIT_OK
    payload = json.loads((workspace / "output" / "kepler_reduced.json").read_text(encoding="utf-8"))
    assert payload["columns"][0] == "tau"
    assert "rho" in payload["columns"]
    assert "t" in payload["columns"]
    clock = payload["columns"].index("t")
    assert payload["rows"][0][clock] == 0.0
    assert all(b[clock] > a[clock] for a, b in zip(payload["rows"], payload["rows"][1:]))


def test_verify_writes_a_report(workspace, capsys):
    assert main(["verify", "--model", "damped-rotor", "--t-end", "2"]) == EXIT_OK
    assert "all_passed = true" in capsys.readouterr().out
    frame = pd.read_csv(workspace / "output" / "damped-rotor_report.csv")
    assert frame["passed"].all()


def test_unreadable_config_is_an_input_error(workspace, monkeypatch):
    path = workspace / "config.json"
    path.write_text(json.dumps({"logging": {}}), encoding="utf-8")
    monkeypatch.setenv("CONTACT_REDUCTION_CONFIG", str(path))
    assert main(["list"]) == EXIT_INPUT


def test_bundled_tolerances_reach_the_harness():
    config = load_config()
    assert tolerance(config, "cross_check") == 1e-6
    assert verify_options(config)["tolerances"]["promotion_orbit"] == 1e-4
    with pytest.raises(ValueError):
        tolerance(config, "curvature")
