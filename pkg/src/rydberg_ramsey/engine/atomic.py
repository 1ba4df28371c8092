# --- engine/atomic.py ---
from __future__ import annotations
import logging
from typing import Any

import numpy as np
from scipy.spatial.distance import squareform

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.ensemble.cloud import AtomCloud
from src.rydberg_ramsey.ensemble.params import interaction_phase

logger = logging.getLogger(__name__)


def excitation_weight(epsilon: float) -> float:
    """A⁴ε⁴, the common prefactor of every pair correlator."""
    return (epsilon ** 2 / (1.0 + epsilon ** 2)) ** 2


def pair_amplitude(r: Any, T: float, c3: float = 1.0) -> Any:
    """
    Pair coefficient exp(-i V(r) T) - 1 of the free-evolution state; |.| <= 2.

    :raises ParameterError: If any distance is not strictly positive.
    """
    a = np.expm1(-1j * np.asarray(interaction_phase(r, T, c3)))
    return complex(a) if np.ndim(a) == 0 else a


def _check_indices(cloud: AtomCloud, *indices: int) -> None:
    for index in indices:
        if not 0 <= index < len(cloud):
            raise ParameterError(f"Atom index {index} out of range for {len(cloud)} atoms")


def amplitude_matrix(cloud: AtomCloud, T: float, c3: float = 1.0) -> np.ndarray:
    """Pair amplitudes a_jk as a symmetric matrix with zero diagonal."""
    if len(cloud) < 2:
        return np.zeros((len(cloud), len(cloud)), dtype=complex)
    condensed = np.expm1(-1j * interaction_phase(cloud.pair_distances(), T, c3))
    return squareform(condensed.real) + 1j * squareform(condensed.imag)


def g2_at_matrix(cloud: AtomCloud, epsilon: float, T: float, c3: float = 1.0) -> np.ndarray:
    """G_at^(2)[j, k] = (A⁴ε⁴/2)(1 - cos V_jk T), zero diagonal."""
    a = amplitude_matrix(cloud, T, c3)
    return 0.25 * excitation_weight(epsilon) * np.abs(a) ** 2


def g1_at_matrix(cloud: AtomCloud, epsilon: float, T: float, c3: float = 1.0) -> np.ndarray:
    """
    G_at^(1)[j, k] = (A⁴ε⁴/4) Σ_{m ≠ j,k} conj(a_jm) a_km.

    The zero diagonal of the amplitude matrix drops m = j and m = k automatically.
    """
    a = amplitude_matrix(cloud, T, c3)
    g1 = 0.25 * excitation_weight(epsilon) * (a.conj() @ a.T)
    return 0.5 * (g1 + g1.conj().T)


def g2_at(cloud: AtomCloud, j: int, jp: int, epsilon: float, T: float, c3: float = 1.0) -> float:
    """Atomic second-order correlator of one pair; zero for j == jp."""
    _check_indices(cloud, j, jp)
    if j == jp:
        return 0.0
    r = float(np.linalg.norm(cloud.positions[j] - cloud.positions[jp]))
    return 0.25 * excitation_weight(epsilon) * abs(pair_amplitude(r, T, c3)) ** 2


def g1_at(cloud: AtomCloud, j: int, jp: int, epsilon: float, T: float, c3: float = 1.0) -> complex:
    """
    Atomic first-order correlator of one pair of sites.

    Fewer than two atoms (diagonal) or three atoms (off-diagonal) leave no third
    atom to mediate the exchange; the result is 0 and a warning is logged.
    """
    _check_indices(cloud, j, jp)
    needed = 2 if j == jp else 3
    if len(cloud) < needed:
        logger.warning("g1_at(%d, %d) needs at least %d atoms, cloud has %d; returning 0", j, jp, needed, len(cloud))
        return 0j
    others = np.array([m for m in range(len(cloud)) if m not in (j, jp)])
    r_j = np.linalg.norm(cloud.positions[others] - cloud.positions[j], axis=1)
    r_jp = np.linalg.norm(cloud.positions[others] - cloud.positions[jp], axis=1)
    terms = np.conj(pair_amplitude(r_j, T, c3)) * pair_amplitude(r_jp, T, c3)
    value = 0.25 * excitation_weight(epsilon) * complex(terms.sum())
    return complex(value.real, 0.0) if j == jp else value


def s_population_sums(cloud: AtomCloud, epsilon: float, T: float, c3: float = 1.0) -> np.ndarray:
    """Per-atom retrieval probability (A⁴ε⁴/2) Σ_k (1 - cos V_jk T)."""
    return g2_at_matrix(cloud, epsilon, T, c3).sum(axis=1)
