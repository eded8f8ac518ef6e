import json
from pathlib import Path

import pytest

from ncqsi.cli import cmd_converge, cmd_demo, cmd_verify, main
from ncqsi.cli.commands import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_PROPERTY_FAILURE
from ncqsi.cli.exceptions import ConfigError
from ncqsi.cli.schema import load_experiment
from ncqsi.integration.constants import DIAGNOSTICS_HEADER

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def shipped(name: str) -> dict:
    return json.loads((CONFIGS / name).read_text())


def write_config(tmp_path: Path, config: dict, name: str = "config.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return path


def with_trials(config: dict, trials: int) -> dict:
    for suite in config["experiment"]["suites"]:
        suite["trials"] = trials
    return config


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.json")))
def test_shipped_configs_load(name):
    experiment = load_experiment(CONFIGS / name)
    assert experiment.filtration.horizon == 2.0


def test_verify_default_config(tmp_path):
    path = write_config(tmp_path, with_trials(shipped("default.json"), 3))
    out = tmp_path / "report.json"
    assert cmd_verify(path, out) == EXIT_OK
    reports = json.loads(out.read_text())
    assert [r["name"] for r in reports] == [
        "projection_family",
        "thm_monotone",
        "thm_monotone",
        "thm_continuous",
        "thm_tracial",
        "remark2",
    ]
    assert all(r["passed"] for r in reports)


def test_verify_product_state_config(tmp_path):
    path = write_config(tmp_path, with_trials(shipped("product_state.json"), 3))
    assert cmd_verify(path, tmp_path / "report.json") == EXIT_OK


def test_verify_negative_controls(tmp_path):
    path = write_config(tmp_path, with_trials(shipped("negative_control.json"), 5))
    out = tmp_path / "report.json"
    assert cmd_verify(path, out) == EXIT_PROPERTY_FAILURE
    reports = json.loads(out.read_text())
    assert not any(r["passed"] for r in reports)
    assert all(r["worst_violation"] > 0 for r in reports)


def test_verify_non_faithful_state(tmp_path):
    out = tmp_path / "report.json"
    assert cmd_verify(CONFIGS / "non_faithful.json", out) == EXIT_PROPERTY_FAILURE
    (report,) = json.loads(out.read_text())
    assert report["failures"][0]["quantity"] == "faithfulness deficit"


def test_verify_is_deterministic(tmp_path):
    path = write_config(tmp_path, with_trials(shipped("default.json"), 2))
    assert cmd_verify(path, tmp_path / "a.json") == EXIT_OK
    assert cmd_verify(path, tmp_path / "b.json") == EXIT_OK
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_seed_override_changes_failure_seeds(tmp_path):
    path = write_config(tmp_path, with_trials(shipped("negative_control.json"), 2))
    out = tmp_path / "report.json"
    assert cmd_verify(path, out, seed=100) == EXIT_PROPERTY_FAILURE
    seeds = {f["seed"] for r in json.loads(out.read_text()) for f in r["failures"]}
    assert seeds and all(s >= 100 for s in seeds)


def test_converge_writes_table(tmp_path):
    out = tmp_path / "converge.csv"
    assert cmd_converge(CONFIGS / "converge.json", out) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(DIAGNOSTICS_HEADER)
    assert len(lines) == 23


def test_converge_reports_non_convergence(tmp_path):
    config = shipped("converge.json")
    config["experiment"]["converge"]["max_depth"] = 4
    path = write_config(tmp_path, config)
    assert cmd_converge(path, tmp_path / "converge.csv") == EXIT_PROPERTY_FAILURE


def test_converge_constant_integrand_is_one_row(tmp_path):
    config = shipped("converge.json")
    config["processes"]["c"] = {"kind": "constant", "c": {"pauli": {"II": [3.0, 0.0]}}}
    config["experiment"]["converge"]["f"] = "c"
    path = write_config(tmp_path, config)
    out = tmp_path / "converge.csv"
    assert cmd_converge(path, out) == EXIT_OK
    header, row = out.read_text().splitlines()
    assert header == ",".join(DIAGNOSTICS_HEADER)
    fields = row.split(",")
    assert fields[0] == "0"
    assert float(fields[3]) <= 1e-12
    assert float(fields[4]) <= 1e-12


def test_converge_needs_a_section(tmp_path):
    assert cmd_converge(CONFIGS / "default.json", tmp_path / "c.csv") == EXIT_CONFIG_ERROR


def broken_configs():
    base = shipped("default.json")

    unknown_key = json.loads(json.dumps(base))
    unknown_key["chain"]["colour"] = "blue"

    unknown_process = json.loads(json.dumps(base))
    unknown_process["experiment"]["suites"] = [{"name": "thm_monotone", "f": "nope", "X": "X"}]

    wrong_kind = json.loads(json.dumps(base))
    wrong_kind["experiment"]["suites"] = [{"name": "thm_continuous", "f": "f_ramp", "X": "X"}]

    bad_pauli = json.loads(json.dumps(base))
    bad_pauli["processes"]["X"]["terminal"] = {"pauli": {"XIZ": [1.0, 0.0]}}

    bad_schedule = json.loads(json.dumps(base))
    bad_schedule["chain"]["jump_times"] = [2.0, 1.0]

    densities_for_trace = json.loads(json.dumps(base))
    densities_for_trace["state"]["densities"] = [[[[1.0, 0.0]]]]

    no_suites = json.loads(json.dumps(base))
    no_suites["experiment"]["suites"] = []

    bad_grid = json.loads(json.dumps(base))
    bad_grid["experiment"]["suites"] = [{"name": "thm_tracial", "f": "f_linear", "X": "X", "grid": [0.0, 3.0]}]

    unadapted_constant = json.loads(json.dumps(base))
    unadapted_constant["processes"]["c"] = {"kind": "constant", "c": {"pauli": {"IX": [1.0, 0.0]}}}

    return [
        unknown_key,
        unknown_process,
        wrong_kind,
        bad_pauli,
        bad_schedule,
        densities_for_trace,
        no_suites,
        bad_grid,
        unadapted_constant,
    ]


@pytest.mark.parametrize("config", broken_configs())
def test_verify_rejects_broken_configs(tmp_path, config):
    path = write_config(tmp_path, config)
    out = tmp_path / "report.json"
    assert cmd_verify(path, out) == EXIT_CONFIG_ERROR
    assert not out.exists()


def test_verify_rejects_unreadable_files(tmp_path):
    assert cmd_verify(tmp_path / "missing.json", tmp_path / "r.json") == EXIT_CONFIG_ERROR
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert cmd_verify(garbage, tmp_path / "r.json") == EXIT_CONFIG_ERROR


def test_config_error_names_the_file(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_experiment(tmp_path / "missing.json")
    assert "missing.json" in str(info.value)


def test_main_dispatches(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "--config", str(CONFIGS / "non_faithful.json"), "--out", str(out)])
    assert code == EXIT_PROPERTY_FAILURE
    assert out.exists()


def test_main_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 2


def test_demo(capsys):
    assert cmd_demo() == EXIT_OK
    printed = capsys.readouterr().out
    assert "[1.25, 1.75]" in printed
    assert "mu((0, 1]) = 1.000000000000" in printed
    assert "passed" in printed
