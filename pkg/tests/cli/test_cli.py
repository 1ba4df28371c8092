# --- tests/cli/test_cli.py ---
import json

import pytest

from src.rydberg_ramsey.cli import EXIT_CONFIG, EXIT_OK, EXIT_REGIME, main
from src.rydberg_ramsey.ensemble.presets import get_preset


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("RYDBERG_LOG_LEVEL", "RYDBERG_PRESET_FILES", "RYDBERG_THREADS", "RYDBERG_REGIME_THRESHOLD"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def dense_params_file(tmp_path):
    preset = get_preset("rb87-sec5")
    data = preset.to_dict()
    data["density_n"] = 100 * preset.density_n
    path = tmp_path / "dense.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_derive_prints_lab_values(tmp_path, capsys):
    assert main(["derive", "--preset", "rb87-sec5", "--out", str(tmp_path)]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["v_g0_m_per_s"] == pytest.approx(140.0, rel=0.02)
    assert summary["r_c_mm"] == pytest.approx(0.18, rel=0.02)
    assert (tmp_path / "derived.csv").exists()
    assert (tmp_path / "manifest.json").exists()


def test_fig3_reruns_are_byte_identical(tmp_path, capsys):
    args = ["fig3", "--loss-length", "0.5", "--points", "25"]
    assert main(args + ["--out", str(tmp_path / "a")]) == EXIT_OK
    assert main(args + ["--out", str(tmp_path / "b"), "--threads", "2"]) == EXIT_OK
    first = (tmp_path / "a" / "fig3.csv").read_bytes()
    assert first == (tmp_path / "b" / "fig3.csv").read_bytes()
    lines = first.decode("utf-8").splitlines()
    assert lines[1] == "# z,lossless,lossy"
    assert len(lines) == 2 + 25


def test_stochastic_scenario_without_seed(tmp_path):
    assert main(["g2", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert not (tmp_path / "manifest.json").exists()


def test_unknown_preset(tmp_path):
    assert main(["derive", "--preset", "nope", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_missing_parameter_file(tmp_path):
    assert main(["derive", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_invalid_scenario_option(tmp_path):
    assert main(["fig3", "--points", "1", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_bad_log_level_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("RYDBERG_LOG_LEVEL", "LOUD")
    assert main(["derive", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_regime_failure_exit_code(dense_params_file, tmp_path):
    assert main(["derive", "--config", str(dense_params_file), "--out", str(tmp_path)]) == EXIT_REGIME
    assert not (tmp_path / "manifest.json").exists()


def test_force_runs_outside_regime(dense_params_file, tmp_path):
    assert main(["derive", "--config", str(dense_params_file), "--out", str(tmp_path), "--force"]) == EXIT_OK
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["forced"] is True
    assert manifest["regime"]["passed"] is False


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


@pytest.mark.slow
def test_oracle_compare_report(tmp_path, capsys):
    args = ["oracle-compare", "--atoms", "6", "--epsilon", "0.05", "--seed", "7", "--out", str(tmp_path)]
    assert main(args) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["atoms"] == 6
    assert summary["epsilon"] == 0.05
    assert 0.0 < summary["max_relative_deviation"] < 0.5
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["seed"] == 7
    assert manifest["seed_policy"].startswith("numpy.random.default_rng")
