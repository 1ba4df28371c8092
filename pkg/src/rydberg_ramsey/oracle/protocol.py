# --- oracle/protocol.py ---
from __future__ import annotations
import logging
from dataclasses import dataclass

from src.rydberg_ramsey.core.config import DEFAULT_MAX_ORACLE_ATOMS
from src.rydberg_ramsey.ensemble.cloud import AtomCloud
from src.rydberg_ramsey.oracle.hamiltonian import evolve_rddi
from src.rydberg_ramsey.oracle.observables import AtomicCorrelators, measure_correlators
from src.rydberg_ramsey.oracle.pulses import PulseSpec, apply_half_pi
from src.rydberg_ramsey.oracle.state import ManyBodyState, build_dark_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProtocolRun:
    """Every intermediate state of one storage -> π/2 -> free evolution -> π/2 run."""
    stored: ManyBodyState
    after_first_pulse: ManyBodyState
    after_evolution: ManyBodyState
    final: ManyBodyState
    epsilon: float
    storage_T: float
    convention: str

    def correlators(self) -> AtomicCorrelators:
        return measure_correlators(self.final)


def run_protocol(
    epsilon: float,
    cloud: AtomCloud,
    T: float,
    c3: float = 1.0,
    convention: str = "real",
    max_atoms: int = DEFAULT_MAX_ORACLE_ATOMS
) -> ProtocolRun:
    """
    Run the full protocol exactly for the atoms of `cloud`.

    :param epsilon: Probe-to-control Rabi ratio.
    :param cloud: Atom positions (same length unit as c3).
    :param T: Storage time.
    :param c3: Exchange coefficient.
    :param convention: π/2 pulse phase convention, "real" or "phase".
    :param max_atoms: Memory cap.
    """
    stored = build_dark_state(epsilon, len(cloud), max_atoms=max_atoms)
    first = apply_half_pi(stored, PulseSpec.half_pi("first_half_pi", convention))
    evolved = evolve_rddi(first, cloud, T, c3)
    final = apply_half_pi(evolved, PulseSpec.half_pi("second_half_pi", convention))
    logger.debug("Protocol run: N=%d, epsilon=%g, T=%g, drift=%.3e", len(cloud), epsilon, T, abs(final.norm - 1.0))
    return ProtocolRun(
        stored=stored,
        after_first_pulse=first,
        after_evolution=evolved,
        final=final,
        epsilon=epsilon,
        storage_T=T,
        convention=convention,
    )
