# --- ensemble/geometry.py ---
from __future__ import annotations
import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError

GEOMETRY_KINDS = ("segment", "box", "cylinder")


@dataclass(frozen=True)
class Geometry:
    """
    Shape of the atomic cloud, in metres.

    The propagation axis is z, starting at z = 0.

      segment   reduced-1D line of `length`; `cross_section` (m^2) turns the
                volume density into a linear one
      box       width (x) * height (y) * length (z), corner at the origin
      cylinder  disc of `radius` centred on the z axis, `length` long
    """
    kind: str
    length: float
    width: Optional[float] = None
    height: Optional[float] = None
    radius: Optional[float] = None
    cross_section: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in GEOMETRY_KINDS:
            raise ParameterError(f"Unknown geometry kind: {self.kind}")
        if not self.length > 0:
            raise ParameterError("Geometry length must be positive")
        if self.kind == "segment":
            if self.cross_section is not None and not self.cross_section > 0:
                raise ParameterError("Segment cross_section must be positive")
        elif self.kind == "box":
            if not (self.width and self.width > 0 and self.height and self.height > 0):
                raise ParameterError("Box geometry needs positive width and height")
        elif not (self.radius and self.radius > 0):
            raise ParameterError("Cylinder geometry needs a positive radius")

    @property
    def dim_mode(self) -> str:
        return "reduced-1D" if self.kind == "segment" else "full-3D"

    @property
    def area(self) -> float:
        """Transverse area used to convert volume densities to per-length ones."""
        if self.kind == "segment":
            return self.cross_section if self.cross_section is not None else 1.0
        if self.kind == "box":
            return self.width * self.height
        return math.pi * self.radius ** 2

    @property
    def volume(self) -> float:
        return self.area * self.length

    @property
    def transverse_width(self) -> float:
        """Largest transverse size; a segment counts its cross-section as a square."""
        if self.kind == "segment":
            return math.sqrt(self.cross_section) if self.cross_section is not None else 0.0
        if self.kind == "box":
            return max(self.width, self.height)
        return 2.0 * self.radius

    def scaled(self, factor: float) -> "Geometry":
        """Same shape with every length multiplied by `factor`."""
        def s(x, power=1):
            return None if x is None else x * factor ** power
        return Geometry(
            kind=self.kind,
            length=self.length * factor,
            width=s(self.width),
            height=s(self.height),
            radius=s(self.radius),
            cross_section=s(self.cross_section, 2),
        )

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw `count` i.i.d. uniform points, shape (count, 3)."""
        positions = np.zeros((count, 3))
        positions[:, 2] = rng.uniform(0.0, self.length, count)
        if self.kind == "box":
            positions[:, 0] = rng.uniform(0.0, self.width, count)
            positions[:, 1] = rng.uniform(0.0, self.height, count)
        elif self.kind == "cylinder":
            # sqrt of a uniform radius fraction gives uniform areal density
            rho = self.radius * np.sqrt(rng.uniform(0.0, 1.0, count))
            theta = rng.uniform(0.0, 2.0 * math.pi, count)
            positions[:, 0] = rho * np.cos(theta)
            positions[:, 1] = rho * np.sin(theta)
        return positions

    def boundary_distance(self, positions: np.ndarray) -> np.ndarray:
        """Distance of each point to the nearest face (axis ends included)."""
        positions = np.atleast_2d(positions)
        z = positions[:, 2]
        d = np.minimum(z, self.length - z)
        if self.kind == "box":
            x, y = positions[:, 0], positions[:, 1]
            d = np.minimum.reduce([d, x, self.width - x, y, self.height - y])
        elif self.kind == "cylinder":
            d = np.minimum(d, self.radius - np.hypot(positions[:, 0], positions[:, 1]))
        return d

    def contains(self, positions: np.ndarray, atol: float = 0.0) -> bool:
        positions = np.atleast_2d(positions)
        if self.kind == "segment" and np.any(np.abs(positions[:, :2]) > atol):
            return False
        return bool(np.all(self.boundary_distance(positions) >= -atol))

    def to_dict(self) -> dict:
        return {key: value for key, value in asdict(self).items() if value is not None}
