# --- scenarios/base_scenario.py ---
from __future__ import annotations
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from src.rydberg_ramsey.core.exceptions import ConfigError
from src.rydberg_ramsey.core.series import CorrelationSeries
from src.rydberg_ramsey.ensemble.params import PhysicalParams

if TYPE_CHECKING:
    from src.rydberg_ramsey.client.simulator import Simulator

SCENARIOS = ("derive", "g2", "fig3", "spectrum", "oracle-compare", "validity")


@dataclass(frozen=True)
class ScenarioConfig:
    """
    One fully resolved run request.

    :param scenario: One of SCENARIOS.
    :param params: Physical parameters (from a preset or a parameter file).
    :param preset: Preset name the parameters came from, if any.
    :param seed: RNG seed; mandatory for stochastic scenarios.
    :param out_dir: Run directory.
    :param force: Run even when a hard regime condition fails.
    :param threads: Worker threads for grid-parallel kernels.
    :param atoms: Atom count for cloud-based scenarios.
    :param epsilon: Override of Ω_p0/Ω_c.
    :param loss_length: Loss length in units of r_c (fig3).
    :param points: Grid size.
    """
    scenario: str
    params: PhysicalParams
    preset: Optional[str] = None
    seed: Optional[int] = None
    out_dir: Optional[str] = None
    force: bool = False
    threads: int = 1
    atoms: Optional[int] = None
    epsilon: Optional[float] = None
    loss_length: Optional[float] = None
    points: Optional[int] = None

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"Unknown scenario: {self.scenario} (expected one of {', '.join(SCENARIOS)})")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.atoms is not None and self.atoms < 1:
            raise ConfigError("atoms must be positive")
        if self.points is not None and self.points < 3:
            raise ConfigError("points must be at least 3")
        if self.epsilon is not None and not 0.0 <= self.epsilon < 1.0:
            raise ConfigError("epsilon must lie in [0, 1)")
        if self.loss_length is not None and not self.loss_length > 0:
            raise ConfigError("loss_length must be positive")

    @property
    def effective_params(self) -> PhysicalParams:
        """Parameters with the epsilon override applied."""
        if self.epsilon is None:
            return self.params
        return replace(self.params, omega_p0=self.epsilon * self.params.omega_c)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "params": self.params.to_dict(),
            "preset": self.preset,
            "seed": self.seed,
            "atoms": self.atoms,
            "epsilon": self.epsilon,
            "loss_length": self.loss_length,
            "points": self.points,
        }


@dataclass
class ScenarioTable:
    """One output table: ordered columns plus table-specific header entries."""
    columns: Dict[str, np.ndarray]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_series(cls, series: CorrelationSeries, **extra: Any) -> "ScenarioTable":
        metadata = {
            "grid_kind": series.grid_kind,
            "normalization": series.normalization,
            "units": series.units,
            "flags": list(series.flags),
            **series.metadata,
            **extra,
        }
        return cls(columns=series.columns(), metadata=metadata)


@dataclass
class ScenarioResult:
    tables: Dict[str, ScenarioTable] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)


class BaseScenario:
    """
    Base class for all simulator scenarios.

    Provides shared access to the Simulator (configuration) and helpers for grids.
    """
    name: str = ""
    stochastic: bool = False
    default_points: int = 200

    def __init__(self, simulator: "Simulator") -> None:
        """
        Initialize the scenario with a reference to the simulator.

        :param simulator: The Simulator that owns configuration and output writing.
        """
        self.simulator = simulator

    def physical_params(self, request: ScenarioConfig) -> PhysicalParams:
        """Parameters the regime check and the output header describe."""
        return request.effective_params

    def delays(self, request: ScenarioConfig) -> Sequence[float]:
        """Delays (s) at which this run reads the retrieved light; checked against the loss delay."""
        return ()

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        raise NotImplementedError

    def _points(self, request: ScenarioConfig) -> int:
        return request.points if request.points is not None else self.default_points

    @staticmethod
    def _merge_flags(*series: CorrelationSeries) -> List[str]:
        flags: List[str] = []
        for s in series:
            flags.extend(f for f in s.flags if f not in flags)
        return flags

    @staticmethod
    def _columns(**columns: Any) -> Mapping[str, np.ndarray]:
        return {name: np.asarray(values, dtype=float) for name, values in columns.items()}
