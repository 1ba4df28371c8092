# --- core/series.py ---
from __future__ import annotations
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Tuple

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError

GRID_KINDS = ("tau", "z", "k", "omega")
NORMALIZATIONS = ("raw", "input-intensity-normalized", "peak-normalized")


@dataclass(frozen=True)
class CorrelationSeries:
    """
    A sampled correlation function (or spectrum) with the metadata needed to read it.

    :param grid: Strictly increasing abscissae.
    :param values: Real or complex samples, one per grid point. NaN marks a flagged gap.
    :param grid_kind: One of "tau", "z", "k", "omega".
    :param normalization: One of "raw", "input-intensity-normalized", "peak-normalized".
    :param units: "protocol" (r_c, T) or "si".
    :param metadata: Free-form JSON-serializable details (declared constants, band widths...).
    :param flags: Soft problems met while computing the series.
    """
    grid: np.ndarray
    values: np.ndarray
    grid_kind: str
    normalization: str = "raw"
    units: str = "protocol"
    metadata: Dict[str, Any] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values)
        if grid.ndim != 1 or values.ndim != 1:
            raise ParameterError("Series grid and values must be one-dimensional")
        if grid.shape != values.shape:
            raise ParameterError(f"Grid has {grid.size} points but values has {values.size}")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ParameterError("Series grid must be strictly increasing")
        if self.grid_kind not in GRID_KINDS:
            raise ParameterError(f"Unknown grid kind: {self.grid_kind}")
        if self.normalization not in NORMALIZATIONS:
            raise ParameterError(f"Unknown normalization: {self.normalization}")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flags", tuple(self.flags))

    def __len__(self) -> int:
        return self.grid.size

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        if self.grid.size < 3:
            return True
        steps = np.diff(self.grid)
        return bool(np.allclose(steps, steps[0], rtol=rtol, atol=0.0))

    def with_flags(self, *flags: str) -> "CorrelationSeries":
        merged = self.flags + tuple(f for f in flags if f not in self.flags)
        return replace(self, flags=merged)

    def columns(self) -> Dict[str, np.ndarray]:
        """Column name -> data, in output order."""
        if self.is_complex:
            return {self.grid_kind: self.grid, "real": self.values.real, "imag": self.values.imag}
        return {self.grid_kind: self.grid, "value": self.values.astype(float)}

    def fwhm(self) -> float:
        return fwhm(self.grid, np.real(self.values))


def fwhm(grid: np.ndarray, values: np.ndarray) -> float:
    """
    Full width at half maximum of a single-peaked real curve.

    Half-maximum crossings are located by linear interpolation on either side
    of the global maximum.

    :return: The width, or NaN when the curve never falls to half its peak on one side.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    peak = int(np.nanargmax(values))
    half = 0.5 * values[peak]

    left = np.nan
    for i in range(peak, 0, -1):
        if values[i - 1] <= half:
            frac = (values[i] - half) / (values[i] - values[i - 1])
            left = grid[i] - frac * (grid[i] - grid[i - 1])
            break

    right = np.nan
    for i in range(peak, values.size - 1):
        if values[i + 1] <= half:
            frac = (values[i] - half) / (values[i] - values[i + 1])
            right = grid[i] + frac * (grid[i + 1] - grid[i])
            break

    return float(right - left)
