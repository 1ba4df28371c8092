# --- core/config.py ---
from __future__ import annotations
import logging
import os
import json
from typing import Optional, MutableMapping

from dotenv import load_dotenv

from src.rydberg_ramsey.core.exceptions import ConfigError
load_dotenv()

DEFAULT_OUTPUT_DIR = "runs"
DEFAULT_MAX_ORACLE_ATOMS = 10
DEFAULT_MAX_CLOUD_ATOMS = 200_000
DEFAULT_MAX_PAIRS = 50_000_000
DEFAULT_REGIME_THRESHOLD = 0.1
DEFAULT_BOUNDARY_TOLERANCE = 0.01
DEFAULT_THREADS = 1
DEFAULT_LOG_LEVEL = "INFO"


class Config:
    def __init__(
        self,
        output_dir: Optional[str] = None,
        max_oracle_atoms: Optional[int] = None,
        max_cloud_atoms: Optional[int] = None,
        max_pairs: Optional[int] = None,
        regime_threshold: Optional[float] = None,
        boundary_tolerance: Optional[float] = None,
        threads: Optional[int] = None,
        log_level: Optional[str] = None,
        environment: Optional[MutableMapping[str, str]] = None
    ) -> None:
        """
        Load and store simulator configuration.

        Every setting comes from the matching parameter first, then from the
        RYDBERG_* environment variables (a .env file is honoured), then from the
        built-in default.

        :param output_dir: Default directory for scenario outputs (RYDBERG_OUTPUT_DIR).
        :param max_oracle_atoms: Largest atom count the exact oracle accepts (RYDBERG_MAX_ORACLE_ATOMS).
        :param max_cloud_atoms: Largest cloud sample_cloud will draw (RYDBERG_MAX_CLOUD_ATOMS).
        :param max_pairs: Largest pair count a Monte Carlo pair sum may touch (RYDBERG_MAX_PAIRS).
        :param regime_threshold: Numeric meaning of "much less than one" (RYDBERG_REGIME_THRESHOLD).
        :param boundary_tolerance: Relative slack of the delay-time condition (RYDBERG_BOUNDARY_TOLERANCE).
        :param threads: Worker threads for grid-parallel kernels (RYDBERG_THREADS).
        :param log_level: Logging level name (RYDBERG_LOG_LEVEL).
        :param environment: Optional mapping to override environment variables (e.g., for testing).
        :raises ConfigError: If a value is malformed or out of range.
        """
        self.env = environment if environment is not None else os.environ

        self.output_dir = output_dir or self.env.get("RYDBERG_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)
        self.max_oracle_atoms = self._resolve_int(max_oracle_atoms, "RYDBERG_MAX_ORACLE_ATOMS", DEFAULT_MAX_ORACLE_ATOMS)
        self.max_cloud_atoms = self._resolve_int(max_cloud_atoms, "RYDBERG_MAX_CLOUD_ATOMS", DEFAULT_MAX_CLOUD_ATOMS)
        self.max_pairs = self._resolve_int(max_pairs, "RYDBERG_MAX_PAIRS", DEFAULT_MAX_PAIRS)
        self.regime_threshold = self._resolve_float(regime_threshold, "RYDBERG_REGIME_THRESHOLD", DEFAULT_REGIME_THRESHOLD)
        self.boundary_tolerance = self._resolve_float(boundary_tolerance, "RYDBERG_BOUNDARY_TOLERANCE", DEFAULT_BOUNDARY_TOLERANCE)
        self.threads = self._resolve_int(threads, "RYDBERG_THREADS", DEFAULT_THREADS)
        self.log_level = (log_level or self.env.get("RYDBERG_LOG_LEVEL", DEFAULT_LOG_LEVEL)).upper()
        self.preset_files = self._load_preset_files()

        self._validate()

    def _resolve_int(self, value: Optional[int], name: str, default: int) -> int:
        """
        Resolve an integer setting from the argument, the environment or the default.

        :raises ConfigError: If the environment value is not an integer.
        """
        if value is not None:
            return int(value)
        raw = self.env.get(name)
        if raw is None or raw == "":
            return default
        try:
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        except ValueError:
            raise ConfigError(f"Invalid integer in {name}")

    def _resolve_float(self, value: Optional[float], name: str, default: float) -> float:
        if value is not None:
            return float(value)
        raw = self.env.get(name)
        if raw is None or raw == "":
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"Invalid number in {name}")

    def _load_preset_files(self) -> dict:
        """
        Load extra preset files from the RYDBERG_PRESET_FILES environment variable (JSON string).

        :return: Dictionary of {preset_name: path}.
        :raises ConfigError: If the variable is not valid JSON or not an object.
        """
        raw = self.env.get("RYDBERG_PRESET_FILES", "{}")
        try:
            files = json.loads(raw)
        except json.JSONDecodeError:
            raise ConfigError("Invalid JSON in RYDBERG_PRESET_FILES")
        if not isinstance(files, dict):
            raise ConfigError("RYDBERG_PRESET_FILES must be a JSON object of name -> path")
        return {str(name): str(path) for name, path in files.items()}

    def _validate(self) -> None:
        """
        Ensure that every setting is inside its admissible range.

        :raises ConfigError: If any value is out of range.
        """
        if self.max_oracle_atoms < 1:
            raise ConfigError("RYDBERG_MAX_ORACLE_ATOMS must be positive")
        if self.max_cloud_atoms < 1:
            raise ConfigError("RYDBERG_MAX_CLOUD_ATOMS must be positive")
        if self.max_pairs < 1:
            raise ConfigError("RYDBERG_MAX_PAIRS must be positive")
        if not 0.0 < self.regime_threshold < 1.0:
            raise ConfigError("RYDBERG_REGIME_THRESHOLD must lie in (0, 1)")
        if not 0.0 <= self.boundary_tolerance < 1.0:
            raise ConfigError("RYDBERG_BOUNDARY_TOLERANCE must lie in [0, 1)")
        if self.threads < 1:
            raise ConfigError("RYDBERG_THREADS must be at least 1")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigError(f"Unknown RYDBERG_LOG_LEVEL: {self.log_level}")
        if not self.output_dir:
            raise ConfigError("Missing RYDBERG_OUTPUT_DIR")
