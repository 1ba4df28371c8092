# --- oracle/state.py ---
from __future__ import annotations
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from src.rydberg_ramsey.core.config import DEFAULT_MAX_ORACLE_ATOMS
from src.rydberg_ramsey.core.exceptions import CapacityError, ParameterError

# Per-atom levels; atom j is base-3 digit j of a configuration index.
G, S, P = 0, 1, 2
LEVEL_NAMES = "gsp"


@lru_cache(maxsize=16)
def configuration_digits(atom_count: int) -> np.ndarray:
    """
    Digit table of shape (3^N, N): entry [idx, j] is the level of atom j in configuration idx.

    The returned array is shared and read-only.
    """
    idx = np.arange(3 ** atom_count)
    digits = np.empty((idx.size, atom_count), dtype=np.int8)
    for j in range(atom_count):
        digits[:, j] = (idx // 3 ** j) % 3
    digits.setflags(write=False)
    return digits


def configuration_label(index: int, atom_count: int) -> str:
    """Level string, atom 0 first, e.g. 'sgp'."""
    return "".join(LEVEL_NAMES[(index // 3 ** j) % 3] for j in range(atom_count))


def check_atom_count(n_atoms: int, max_atoms: int = DEFAULT_MAX_ORACLE_ATOMS) -> None:
    if n_atoms < 1:
        raise ParameterError(f"Need at least one atom, got {n_atoms}")
    if n_atoms > max_atoms:
        raise CapacityError(
            f"{n_atoms} atoms need a 3^{n_atoms}-dimensional state; cap is {max_atoms} (RYDBERG_MAX_ORACLE_ATOMS)"
        )


@dataclass(frozen=True)
class ManyBodyState:
    """
    Pure state of N three-level atoms over the 3^N configurations {g, s, p}^N.

    The tensor view reshapes to (3,)*N with atom j on axis N-1-j.
    """
    amplitudes: np.ndarray
    atom_count: int

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.shape != (3 ** self.atom_count,):
            raise ParameterError(
                f"A {self.atom_count}-atom state needs {3 ** self.atom_count} amplitudes, got {amplitudes.shape}"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((3,) * self.atom_count)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "ManyBodyState":
        return cls(np.ascontiguousarray(tensor).reshape(-1), tensor.ndim)

    def amplitude(self, labels: str) -> complex:
        """Amplitude of a configuration given as a level string, atom 0 first."""
        if len(labels) != self.atom_count:
            raise ParameterError(f"Expected {self.atom_count} levels, got {labels!r}")
        index = sum(LEVEL_NAMES.index(level) * 3 ** j for j, level in enumerate(labels))
        return complex(self.amplitudes[index])

    def level_counts(self) -> Tuple[float, float]:
        """Expectation values of the total s-count and p-count."""
        digits = configuration_digits(self.atom_count)
        prob = np.abs(self.amplitudes) ** 2
        return float(prob @ (digits == S).sum(axis=1)), float(prob @ (digits == P).sum(axis=1))

    def to_triplets(self, threshold: float = 0.0) -> List[Tuple[int, float, float]]:
        """
        (configuration index, real, imag) rows for every amplitude above `threshold` in magnitude.
        """
        keep = np.nonzero(np.abs(self.amplitudes) > threshold)[0]
        return [(int(i), float(self.amplitudes[i].real), float(self.amplitudes[i].imag)) for i in keep]


def product_state(single_atom: Sequence[np.ndarray]) -> ManyBodyState:
    """Product state from per-atom (g, s, p) amplitude vectors, atom 0 first."""
    vectors = [np.asarray(v, dtype=complex) for v in single_atom]
    amplitudes = np.ones(1, dtype=complex)
    for vector in vectors:
        # atom j is digit j, so later atoms are the more significant kron factor
        amplitudes = np.kron(vector, amplitudes)
    return ManyBodyState(amplitudes, len(vectors))


def build_dark_state(
    epsilon: float,
    n_atoms: int,
    max_atoms: int = DEFAULT_MAX_ORACLE_ATOMS
) -> ManyBodyState:
    """
    Stored dark state: every atom in A(|g> - ε|s>), A = (1 + ε²)^(-1/2).

    :param epsilon: Probe-to-control Rabi ratio, >= 0.
    :param n_atoms: Number of atoms.
    :param max_atoms: Memory cap.
    :raises ParameterError: If epsilon < 0 or n_atoms < 1.
    :raises CapacityError: If n_atoms exceeds the cap.
    """
    if not (math.isfinite(epsilon) and epsilon >= 0):
        raise ParameterError(f"epsilon must be non-negative, got {epsilon}")
    check_atom_count(n_atoms, max_atoms)
    norm_A = 1.0 / math.sqrt(1.0 + epsilon ** 2)
    single = np.array([norm_A, -norm_A * epsilon, 0.0])
    return product_state([single] * n_atoms)
