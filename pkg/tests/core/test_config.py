# --- tests/core/test_config.py ---
import pytest

from src.rydberg_ramsey.core.config import (
    DEFAULT_MAX_PAIRS,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_REGIME_THRESHOLD,
    Config,
)
from src.rydberg_ramsey.core.exceptions import ConfigError


def test_config_defaults():
    cfg = Config(environment={})

    assert cfg.output_dir == DEFAULT_OUTPUT_DIR
    assert cfg.max_pairs == DEFAULT_MAX_PAIRS
    assert cfg.regime_threshold == DEFAULT_REGIME_THRESHOLD
    assert cfg.threads == 1
    assert cfg.log_level == "INFO"
    assert cfg.preset_files == {}


def test_config_loads_env(monkeypatch):
    monkeypatch.setenv("RYDBERG_OUTPUT_DIR", "/tmp/rydberg")
    monkeypatch.setenv("RYDBERG_MAX_PAIRS", "1e6")
    monkeypatch.setenv("RYDBERG_THREADS", "4")
    monkeypatch.setenv("RYDBERG_LOG_LEVEL", "debug")
    monkeypatch.setenv("RYDBERG_PRESET_FILES", '{"lab": "presets/lab.json"}')

    cfg = Config()

    assert cfg.output_dir == "/tmp/rydberg"
    assert cfg.max_pairs == 1_000_000
    assert cfg.threads == 4
    assert cfg.log_level == "DEBUG"
    assert cfg.preset_files == {"lab": "presets/lab.json"}


def test_arguments_override_environment():
    cfg = Config(threads=2, regime_threshold=0.05, environment={"RYDBERG_THREADS": "8"})

    assert cfg.threads == 2
    assert cfg.regime_threshold == 0.05


def test_invalid_preset_files():
    with pytest.raises(ConfigError):
        Config(environment={"RYDBERG_PRESET_FILES": "bad-json"})
    with pytest.raises(ConfigError):
        Config(environment={"RYDBERG_PRESET_FILES": "[1, 2]"})


def test_invalid_numbers():
    with pytest.raises(ConfigError, match="RYDBERG_MAX_PAIRS"):
        Config(environment={"RYDBERG_MAX_PAIRS": "many"})
    with pytest.raises(ConfigError, match="RYDBERG_REGIME_THRESHOLD"):
        Config(environment={"RYDBERG_REGIME_THRESHOLD": "small"})


@pytest.mark.parametrize("kwargs", [
    {"max_pairs": 0},
    {"threads": 0},
    {"regime_threshold": 1.5},
    {"boundary_tolerance": -0.1},
    {"max_oracle_atoms": 0},
])
def test_out_of_range(kwargs):
    with pytest.raises(ConfigError):
        Config(environment={}, **kwargs)
