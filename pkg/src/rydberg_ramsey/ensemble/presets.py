# --- ensemble/presets.py ---
from __future__ import annotations
import json
import logging
from pathlib import Path
from typing import Dict, Optional, Union

from src.rydberg_ramsey.core.config import Config
from src.rydberg_ramsey.core.exceptions import ConfigError
from src.rydberg_ramsey.ensemble.params import PhysicalParams

logger = logging.getLogger(__name__)

# Rb-87 storage experiment: Ω_c = 2π·2 MHz, Γ = 2π·6 MHz, L = 1 mm, α = 30,
# C3 = 610 GHz·μm³ (no 2π, so V(r_c) = 1/T = 0.1 MHz), T = 10 μs,
# Ω_rf = 2π·100 MHz. The probe (ε = 2.5e-4) and the density (1e11 cm^-3) are
# free choices that put the cloud at n_Ry r_c³ ≈ 0.04.
BUILTIN_PRESETS: Dict[str, dict] = {
    "rb87-sec5": {
        "omega_p0": {"value": 0.5, "unit": "2pi*kHz"},
        "omega_c": {"value": 2.0, "unit": "2pi*MHz"},
        "gamma_e": {"value": 6.0, "unit": "2pi*MHz"},
        "alpha": 30.0,
        "length_L": {"value": 1.0, "unit": "mm"},
        "c3": {"value": 610.0, "unit": "GHz*um^3"},
        "storage_T": {"value": 10.0, "unit": "us"},
        "density_n": {"value": 1.0e11, "unit": "cm^-3"},
        "omega_rf": {"value": 100.0, "unit": "2pi*MHz"},
        "geometry": {
            "kind": "segment",
            "length": {"value": 1.0, "unit": "mm"},
            "cross_section": {"value": 400.0, "unit": "um^2"},
        },
    },
}


def load_params_file(path: Union[str, Path]) -> PhysicalParams:
    """
    Read PhysicalParams from a JSON file.

    :param path: File holding one JSON object of parameter fields.
    :return: Validated parameters.
    :raises ConfigError: If the file is missing, not JSON, or not an object.
    :raises ParameterError: If the parameters themselves are invalid.
    """
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"Parameter file not found: {p}")
    try:
        payload = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON in parameter file {p}: {exc.msg}")
    if not isinstance(payload, dict):
        raise ConfigError(f"Parameter file {p} must contain a JSON object")
    return PhysicalParams.from_dict(payload)


def available_presets(config: Optional[Config] = None) -> list:
    extra = config.preset_files if config is not None else {}
    return sorted(set(BUILTIN_PRESETS) | set(extra))


def get_preset(name: str, config: Optional[Config] = None) -> PhysicalParams:
    """
    Resolve a named preset: built-ins first, then RYDBERG_PRESET_FILES entries.

    :raises ConfigError: If no preset of that name exists.
    """
    if name in BUILTIN_PRESETS:
        return PhysicalParams.from_dict(BUILTIN_PRESETS[name])
    if config is not None and name in config.preset_files:
        logger.debug("Loading preset %s from %s", name, config.preset_files[name])
        return load_params_file(config.preset_files[name])
    raise ConfigError(f"Unknown preset: {name} (available: {', '.join(available_presets(config))})")
