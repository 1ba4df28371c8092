# --- ensemble/cloud.py ---
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from src.rydberg_ramsey.core.config import DEFAULT_MAX_CLOUD_ATOMS
from src.rydberg_ramsey.core.exceptions import CapacityError, ParameterError
from src.rydberg_ramsey.ensemble.geometry import Geometry
from src.rydberg_ramsey.ensemble.params import PhysicalParams

logger = logging.getLogger(__name__)

DIM_MODES = ("full-3D", "reduced-1D")


@dataclass(frozen=True)
class AtomCloud:
    """
    Frozen atom positions, shape (N, 3), in whatever length unit the caller uses
    consistently (metres for PhysicalParams work, r_c inside kernels).

    In reduced-1D mode only the z column is populated.
    """
    positions: np.ndarray
    dim_mode: str = "full-3D"
    seed: Optional[int] = None
    geometry: Optional[Geometry] = None

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 3 or positions.shape[0] < 1:
            raise ParameterError(f"Positions must have shape (N, 3), got {positions.shape}")
        if not np.all(np.isfinite(positions)):
            raise ParameterError("Positions must be finite")
        if self.dim_mode not in DIM_MODES:
            raise ParameterError(f"Unknown dim_mode: {self.dim_mode}")
        if self.dim_mode == "reduced-1D" and np.any(positions[:, :2] != 0.0):
            raise ParameterError("Reduced-1D clouds carry zero transverse coordinates")
        if np.unique(positions, axis=0).shape[0] != positions.shape[0]:
            raise ParameterError("Atom positions must be pairwise distinct")
        if self.geometry is not None and not self.geometry.contains(positions, atol=1e-12 * self.geometry.length):
            raise ParameterError("Atom positions fall outside the declared geometry")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @classmethod
    def from_positions(
        cls,
        positions: Sequence,
        dim_mode: Optional[str] = None,
        geometry: Optional[Geometry] = None
    ) -> "AtomCloud":
        """
        Wrap hand-made coordinates. 1D input (a list of z values) becomes a reduced-1D cloud.
        """
        arr = np.asarray(positions, dtype=float)
        if arr.ndim == 1:
            full = np.zeros((arr.size, 3))
            full[:, 2] = arr
            return cls(full, dim_mode=dim_mode or "reduced-1D", geometry=geometry)
        return cls(arr, dim_mode=dim_mode or "full-3D", geometry=geometry)

    def __len__(self) -> int:
        return self.positions.shape[0]

    @property
    def z(self) -> np.ndarray:
        return self.positions[:, 2]

    def pair_distances(self) -> np.ndarray:
        """Condensed pair-distance vector, pdist ordering."""
        return pdist(self.positions)

    def mean_spacing(self) -> float:
        """
        Mean interatomic spacing: L/N along a line, (V/N)^(1/3) in 3D.

        Falls back to the occupied extent when no geometry is attached.
        """
        n = len(self)
        if self.geometry is not None:
            if self.dim_mode == "reduced-1D":
                return self.geometry.length / n
            return (self.geometry.volume / n) ** (1.0 / 3.0)
        if n < 2:
            return float("inf")
        extent = np.ptp(self.positions, axis=0)
        if self.dim_mode == "reduced-1D":
            return float(extent[2]) / (n - 1)
        box = np.prod(extent[extent > 0]) if np.any(extent > 0) else 0.0
        return float(box / n) ** (1.0 / max(1, int(np.count_nonzero(extent))))

    def translated(self, offset: Sequence[float]) -> "AtomCloud":
        shifted = self.positions + np.asarray(offset, dtype=float)
        dim_mode = self.dim_mode if np.all(shifted[:, :2] == 0.0) else "full-3D"
        return AtomCloud(shifted, dim_mode=dim_mode, seed=self.seed)

    def relabeled(self, permutation: Sequence[int]) -> "AtomCloud":
        perm = np.asarray(permutation)
        if sorted(perm.tolist()) != list(range(len(self))):
            raise ParameterError("Relabeling must be a permutation of the atom indices")
        return AtomCloud(self.positions[perm], dim_mode=self.dim_mode, seed=self.seed, geometry=self.geometry)

    def scaled(self, factor: float) -> "AtomCloud":
        """Positions in units of `1/factor` of the current unit (e.g. factor = 1/r_c)."""
        return AtomCloud(self.positions * factor, dim_mode=self.dim_mode, seed=self.seed)


def expected_atom_count(p: PhysicalParams) -> float:
    """Mean number of atoms in the declared geometry (n times volume, or n_lin times length)."""
    return p.density_n * p.geometry.volume


def sample_cloud(
    p: PhysicalParams,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    max_atoms: int = DEFAULT_MAX_CLOUD_ATOMS
) -> AtomCloud:
    """
    Draw i.i.d. uniform atom positions inside the parameters' geometry.

    A segment geometry gives a reduced-1D cloud (zero transverse coordinates);
    its linear density is density_n times the cross-section.

    :param p: Physical parameters carrying the geometry.
    :param count: Number of atoms; defaults to the rounded expected count.
    :param seed: RNG seed. Identical seeds give identical clouds.
    :param max_atoms: Memory cap.
    :return: AtomCloud in metres.
    :raises ParameterError: If count < 1.
    :raises CapacityError: If count exceeds max_atoms.
    """
    if count is None:
        count = int(round(expected_atom_count(p)))
    if count < 1:
        raise ParameterError(f"Atom count must be at least 1, got {count}")
    if count > max_atoms:
        raise CapacityError(f"Requested {count} atoms, cap is {max_atoms} (RYDBERG_MAX_CLOUD_ATOMS)")

    rng = np.random.default_rng(seed)
    positions = p.geometry.sample(rng, count)
    logger.debug("Sampled %d atoms in %s geometry (seed=%s)", count, p.geometry.kind, seed)
    return AtomCloud(positions, dim_mode=p.geometry.dim_mode, seed=seed, geometry=p.geometry)
