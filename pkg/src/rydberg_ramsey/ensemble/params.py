# --- ensemble/params.py ---
from __future__ import annotations
import math
from dataclasses import dataclass, asdict, fields, replace
from typing import Any, Dict, Optional

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.units import ProtocolUnits, to_si
from src.rydberg_ramsey.ensemble.geometry import Geometry

_POSITIVE_FIELDS = (
    "omega_c", "gamma_e", "alpha", "length_L", "c3",
    "storage_T", "density_n", "omega_rf",
)


@dataclass(frozen=True)
class PhysicalParams:
    """
    Experiment-level inputs, SI units throughout (Rabi frequencies and rates in rad/s).

    :param omega_p0: Probe Rabi frequency Ω_p0; 0 switches the probe off.
    :param omega_c: Control Rabi frequency Ω_c.
    :param gamma_e: Excited-state decay rate Γ.
    :param alpha: Optical density of the medium.
    :param length_L: Medium length L (m).
    :param c3: Exchange coefficient C3 (m^3/s), no 2π factor: V(r) = C3/r^3 in 1/s.
    :param storage_T: Storage (free evolution) time T (s).
    :param density_n: Total atom density n (1/m^3).
    :param omega_rf: Microwave Rabi frequency of the π/2 pulses.
    :param geometry: Cloud shape.
    :param min_pair_distance: Smallest interatomic distance the experiment probes (m), optional.
    """
    omega_p0: float
    omega_c: float
    gamma_e: float
    alpha: float
    length_L: float
    c3: float
    storage_T: float
    density_n: float
    omega_rf: float
    geometry: Geometry
    min_pair_distance: Optional[float] = None

    def __post_init__(self) -> None:
        for name in _POSITIVE_FIELDS:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {value!r}")
        if not (math.isfinite(self.omega_p0) and self.omega_p0 >= 0):
            raise ParameterError(f"omega_p0 must be non-negative, got {self.omega_p0!r}")
        if self.omega_p0 >= self.omega_c:
            raise ParameterError("Weak-probe regime requires omega_p0 < omega_c")
        if not isinstance(self.geometry, Geometry):
            raise ParameterError("geometry must be a Geometry instance")
        if self.min_pair_distance is not None and not self.min_pair_distance > 0:
            raise ParameterError("min_pair_distance must be positive")

    @property
    def epsilon(self) -> float:
        return self.omega_p0 / self.omega_c

    @property
    def linear_density(self) -> float:
        """Atoms per metre along z (density_n times the transverse area)."""
        return self.density_n * self.geometry.area

    def scaled(self, factor: float) -> "PhysicalParams":
        """Every length times `factor` and C3 times factor^3, densities rescaled to match."""
        return replace(
            self,
            length_L=self.length_L * factor,
            c3=self.c3 * factor ** 3,
            density_n=self.density_n / factor ** 3,
            geometry=self.geometry.scaled(factor),
            min_pair_distance=None if self.min_pair_distance is None else self.min_pair_distance * factor,
        )

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["geometry"] = self.geometry.to_dict()
        if data["min_pair_distance"] is None:
            del data["min_pair_distance"]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhysicalParams":
        """
        Build parameters from a JSON-style mapping.

        Values may be bare SI numbers or {"value": x, "unit": "2pi*MHz"} objects.

        :raises ParameterError: On unknown keys, missing keys or bad quantities.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"Unknown parameter keys: {sorted(unknown)}")
        missing = {f.name for f in fields(cls) if f.name != "min_pair_distance"} - set(data)
        if missing:
            raise ParameterError(f"Missing parameter keys: {sorted(missing)}")

        geometry_data = data["geometry"]
        if not isinstance(geometry_data, dict) or "kind" not in geometry_data:
            raise ParameterError("geometry must be an object with a 'kind'")
        geometry = Geometry(
            kind=geometry_data["kind"],
            **{k: to_si(v) for k, v in geometry_data.items() if k != "kind"},
        )
        values = {k: to_si(v) for k, v in data.items() if k != "geometry" and v is not None}
        return cls(geometry=geometry, **values)


@dataclass(frozen=True)
class DerivedParams:
    """Quantities computed from PhysicalParams by their defining formulas (SI)."""
    epsilon: float
    norm_A: float
    v_g0: float
    r_c: float
    n_ry: float
    r_ry: float
    t_max: float
    loss_length: float
    loss_delay: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def derive_params(p: PhysicalParams) -> DerivedParams:
    """
    Compute every derived quantity of the storage protocol.

    v_g0 = Ω_c² L / (Γ α), r_c = (C3 T)^(1/3), n_Ry = A² ε² n with A = (1 + ε²)^(-1/2),
    r_Ry = n_Ry^(-1/3), T_max = 1 / (C3 n_Ry), loss length L/√α and delay Γ√α/Ω_c².
    Without probe light n_Ry = 0 and r_Ry, T_max are infinite.

    :param p: Validated physical parameters.
    :return: DerivedParams.
    """
    epsilon = p.epsilon
    norm_A = 1.0 / math.sqrt(1.0 + epsilon ** 2)
    n_ry = norm_A ** 2 * epsilon ** 2 * p.density_n
    return DerivedParams(
        epsilon=epsilon,
        norm_A=norm_A,
        v_g0=p.omega_c ** 2 * p.length_L / (p.gamma_e * p.alpha),
        r_c=(p.c3 * p.storage_T) ** (1.0 / 3.0),
        n_ry=n_ry,
        r_ry=n_ry ** (-1.0 / 3.0) if n_ry > 0 else math.inf,
        t_max=1.0 / (p.c3 * n_ry) if n_ry > 0 else math.inf,
        loss_length=p.length_L / math.sqrt(p.alpha),
        loss_delay=p.gamma_e * math.sqrt(p.alpha) / p.omega_c ** 2,
    )


def protocol_units(p: PhysicalParams) -> ProtocolUnits:
    """Unit system with r_c as length and T as time for these parameters."""
    return ProtocolUnits(length=(p.c3 * p.storage_T) ** (1.0 / 3.0), time=p.storage_T)


def rddi_potential(r: Any, c3: float) -> Any:
    """
    Exchange potential V(r) = C3 / r^3 (1/s), real-valued.

    Infinite distances give 0.

    :param r: Distance(s) in metres.
    :param c3: C3 coefficient.
    :raises ParameterError: If any distance is zero or negative (no self-interaction).
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise ParameterError("rddi_potential needs strictly positive distances")
    with np.errstate(over="ignore"):
        v = c3 / r_arr ** 3
    return float(v) if np.ndim(v) == 0 else v


def interaction_phase(r: Any, T: float, c3: float) -> Any:
    """Accumulated exchange phase V(r) T."""
    return rddi_potential(r, c3) * T
