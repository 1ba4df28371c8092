# --- oracle/pulses.py ---
from __future__ import annotations
import math
from dataclasses import dataclass

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.oracle.state import ManyBodyState

PULSE_KINDS = ("first_half_pi", "second_half_pi")
CONVENTIONS = ("real", "phase")

_C = 1.0 / math.sqrt(2.0)

# Columns are the images of |s> and |p>.
_ROTATIONS = {
    "real": _C * np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex),
    "phase": _C * np.array([[1.0, -1.0j], [-1.0j, 1.0]], dtype=complex),
}


@dataclass(frozen=True)
class PulseSpec:
    """
    Instantaneous microwave π/2 pulse: a 2x2 unitary on {s, p}, identity on g.

    "real" rotates s -> (s+p)/√2, p -> (p-s)/√2; "phase" is exp(-iπ/4 σ_x), the
    same rotation with -i phases on the p components. Both pulses of the
    protocol use the same matrix.
    """
    kind: str
    matrix: np.ndarray
    convention: str = "real"

    def __post_init__(self) -> None:
        if self.kind not in PULSE_KINDS:
            raise ParameterError(f"Unknown pulse kind: {self.kind}")
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ParameterError("Pulse matrix must be 2x2")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(2), atol=1e-14, rtol=0.0):
            raise ParameterError("Pulse matrix must be unitary")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def half_pi(cls, kind: str = "first_half_pi", convention: str = "real") -> "PulseSpec":
        if convention not in CONVENTIONS:
            raise ParameterError(f"Unknown pulse convention: {convention}")
        return cls(kind=kind, matrix=_ROTATIONS[convention], convention=convention)

    def single_atom_unitary(self) -> np.ndarray:
        """3x3 operator on (g, s, p)."""
        u = np.eye(3, dtype=complex)
        u[1:, 1:] = self.matrix
        return u


def apply_half_pi(state: ManyBodyState, pulse: PulseSpec) -> ManyBodyState:
    """
    Apply the pulse to every atom (tensor product of identical single-atom unitaries).
    """
    u = pulse.single_atom_unitary()
    tensor = state.tensor()
    for axis in range(state.atom_count):
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [axis])), 0, axis)
    return ManyBodyState.from_tensor(tensor)
