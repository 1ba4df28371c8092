# --- oracle/observables.py ---
from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from src.rydberg_ramsey.oracle.state import G, S, P, ManyBodyState, configuration_digits


@dataclass(frozen=True)
class AtomicCorrelators:
    """
    Atomic correlation functions of one state.

    g1[j, k] = <σ_sg^j σ_gs^k>, g2[j, k] = <σ_sg^j σ_sg^k σ_gs^k σ_gs^j> (zero diagonal),
    s_population[j] = P(atom j in s), p_population[j] = P(atom j in p).
    """
    g1: np.ndarray
    g2: np.ndarray
    s_population: np.ndarray
    p_population: np.ndarray


def lowered_amplitudes(state: ManyBodyState) -> np.ndarray:
    """
    Row k holds σ_gs^k ψ: the amplitude of configuration idx (atom k in g)
    is ψ[idx + 3^k], zero elsewhere.
    """
    n = state.atom_count
    digits = configuration_digits(n)
    phi = np.zeros((n, 3 ** n), dtype=complex)
    for k in range(n):
        target = np.nonzero(digits[:, k] == G)[0]
        phi[k, target] = state.amplitudes[target + 3 ** k]
    return phi


def measure_correlators(state: ManyBodyState) -> AtomicCorrelators:
    """Exact atomic correlators of a many-body state."""
    digits = configuration_digits(state.atom_count)
    prob = np.abs(state.amplitudes) ** 2
    in_s = (digits == S).astype(float)

    phi = lowered_amplitudes(state)
    g1 = phi.conj() @ phi.T
    g1 = 0.5 * (g1 + g1.conj().T)

    g2 = (in_s * prob[:, None]).T @ in_s
    np.fill_diagonal(g2, 0.0)

    return AtomicCorrelators(
        g1=g1,
        g2=g2,
        s_population=prob @ in_s,
        p_population=prob @ (digits == P).astype(float),
    )
