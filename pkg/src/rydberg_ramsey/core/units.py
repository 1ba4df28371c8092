# --- core/units.py ---
from __future__ import annotations
import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError

TWO_PI = 2.0 * math.pi

# Factors to SI (rad/s, m, s, m^3/s, 1/m^3, m^2). "2pi*" prefixes mark values
# quoted as ordinary frequencies that must become angular frequencies.
UNIT_FACTORS = {
    "rad/s": 1.0,
    "1/s": 1.0,
    "Hz": 1.0,
    "kHz": 1e3,
    "MHz": 1e6,
    "2pi*Hz": TWO_PI,
    "2pi*kHz": TWO_PI * 1e3,
    "2pi*MHz": TWO_PI * 1e6,
    "m^3/s": 1.0,
    "GHz*um^3": 1e9 * 1e-18,
    "m": 1.0,
    "mm": 1e-3,
    "um": 1e-6,
    "s": 1.0,
    "ms": 1e-3,
    "us": 1e-6,
    "m^-3": 1.0,
    "cm^-3": 1e6,
    "m^2": 1.0,
    "mm^2": 1e-6,
    "um^2": 1e-12,
}

Quantity = Union[float, int, dict]


def to_si(quantity: Quantity) -> float:
    """
    Convert a parameter-file quantity to SI.

    Accepts a bare number (already SI) or {"value": x, "unit": "<unit>"}.

    :raises ParameterError: On unknown units or malformed quantities.
    """
    if isinstance(quantity, bool):
        raise ParameterError("Boolean is not a physical quantity")
    if isinstance(quantity, (int, float)):
        return float(quantity)
    if isinstance(quantity, dict) and "value" in quantity:
        unit = quantity.get("unit", "")
        if unit not in UNIT_FACTORS:
            raise ParameterError(f"Unknown unit: {unit!r}")
        return float(quantity["value"]) * UNIT_FACTORS[unit]
    raise ParameterError(f"Malformed quantity: {quantity!r}")


@dataclass(frozen=True)
class ProtocolUnits:
    """
    Dimensionless unit system of the numerical kernels: lengths in r_c, times in T.

    Every interaction phase then reads V(r)T = (1/r)^3.
    """
    length: float
    time: float

    def __post_init__(self) -> None:
        if not (self.length > 0 and self.time > 0):
            raise ParameterError("Protocol units need positive r_c and T")

    def to_protocol_length(self, x: Any) -> Any:
        return np.asarray(x, dtype=float) / self.length if not np.isscalar(x) else float(x) / self.length

    def to_si_length(self, x: Any) -> Any:
        return np.asarray(x, dtype=float) * self.length if not np.isscalar(x) else float(x) * self.length

    def to_protocol_time(self, t: Any) -> Any:
        return np.asarray(t, dtype=float) / self.time if not np.isscalar(t) else float(t) / self.time

    def to_si_time(self, t: Any) -> Any:
        return np.asarray(t, dtype=float) * self.time if not np.isscalar(t) else float(t) * self.time

    def to_protocol_rate(self, omega: float) -> float:
        """Angular frequency in units of 1/T."""
        return float(omega) * self.time

    def to_protocol_density(self, n: float) -> float:
        """Volume density in units of r_c^-3."""
        return float(n) * self.length ** 3
