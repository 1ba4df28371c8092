# --- oracle/hamiltonian.py ---
from __future__ import annotations
import logging
from itertools import combinations
from typing import Dict, Tuple

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply
from scipy.spatial.distance import squareform

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.ensemble.cloud import AtomCloud
from src.rydberg_ramsey.ensemble.params import rddi_potential
from src.rydberg_ramsey.oracle.state import S, P, ManyBodyState, configuration_digits

logger = logging.getLogger(__name__)

# Sectors up to this dimension are exponentiated densely.
DENSE_SECTOR_LIMIT = 256

# Two-atom basis index d0 + 3*d1.
_SP = S + 3 * P
_PS = P + 3 * S


def _check_cloud(state: ManyBodyState, cloud: AtomCloud) -> None:
    if len(cloud) != state.atom_count:
        raise ParameterError(f"Cloud has {len(cloud)} atoms, state has {state.atom_count}")


def coupling_matrix(cloud: AtomCloud, c3: float) -> np.ndarray:
    """Symmetric V_jk = C3/|r_j - r_k|^3 with zero diagonal."""
    distances = cloud.pair_distances()
    if distances.size and np.any(distances <= 0):
        raise ParameterError("Coincident atom positions")
    return squareform(rddi_potential(distances, c3)) if distances.size else np.zeros((1, 1))


def rddi_hamiltonian(cloud: AtomCloud, c3: float) -> sparse.csr_matrix:
    """
    Exchange Hamiltonian Σ_{j≠k} V_jk σ_ps^j σ_sp^k as a sparse 3^N x 3^N matrix (units of 1/time).

    Both orderings of every pair are summed, so each {sp, ps} block carries V off the diagonal.
    """
    n = len(cloud)
    v = coupling_matrix(cloud, c3)
    digits = configuration_digits(n)
    index = np.arange(3 ** n)
    rows, cols, data = [], [], []
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            # atom j: s -> p, atom k: p -> s
            src = index[(digits[:, j] == S) & (digits[:, k] == P)]
            rows.append(src + 3 ** j - 3 ** k)
            cols.append(src)
            data.append(np.full(src.size, v[j, k]))
    if not rows:
        return sparse.csr_matrix((3 ** n, 3 ** n), dtype=float)
    h = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(3 ** n, 3 ** n),
    )
    return h.tocsr()


def sector_labels(atom_count: int) -> Dict[Tuple[int, int], np.ndarray]:
    """Configuration indices grouped by (s-count, p-count)."""
    digits = configuration_digits(atom_count)
    n_s = (digits == S).sum(axis=1)
    n_p = (digits == P).sum(axis=1)
    sectors: Dict[Tuple[int, int], np.ndarray] = {}
    for key in sorted(set(zip(n_s.tolist(), n_p.tolist()))):
        sectors[key] = np.nonzero((n_s == key[0]) & (n_p == key[1]))[0]
    return sectors


def evolve_rddi(
    state: ManyBodyState,
    cloud: AtomCloud,
    T: float,
    c3: float = 1.0,
    dense_limit: int = DENSE_SECTOR_LIMIT
) -> ManyBodyState:
    """
    Apply exp(-i H T) exactly, one (s-count, p-count) sector at a time.

    Sectors without an s or without a p are annihilated by H and left untouched;
    small sectors use a dense matrix exponential, large ones
    expm_multiply on the sparse block.

    :param state: State to propagate.
    :param cloud: Positions, same length unit as c3.
    :param T: Storage time.
    :param c3: Exchange coefficient; with positions in r_c and T = 1 use c3 = 1.
    :raises ParameterError: On size mismatch or coincident atoms.
    """
    _check_cloud(state, cloud)
    if T == 0:
        return state
    h = rddi_hamiltonian(cloud, c3)
    psi = np.array(state.amplitudes)
    for (n_s, n_p), idx in sector_labels(state.atom_count).items():
        if n_s == 0 or n_p == 0:
            continue
        block_psi = psi[idx]
        if not np.any(block_psi):
            continue
        block = h[idx][:, idx]
        if block.nnz == 0:
            continue
        if idx.size <= dense_limit:
            psi[idx] = expm(-1j * T * block.toarray()) @ block_psi
        else:
            psi[idx] = expm_multiply(-1j * T * block.tocsc(), block_psi)
        logger.debug("Propagated sector (%d, %d) of dimension %d", n_s, n_p, idx.size)
    return ManyBodyState(psi, state.atom_count)


def exact_pair_propagator(V: float, T: float) -> np.ndarray:
    """
    Closed-form two-atom propagator in the basis d0 + 3*d1.

    Identity except on {|sp>, |ps>}: cos(VT) on the diagonal, -i sin(VT) off it.
    """
    phase = V * T
    u = np.eye(9, dtype=complex)
    u[_SP, _SP] = u[_PS, _PS] = np.cos(phase)
    u[_SP, _PS] = u[_PS, _SP] = -1j * np.sin(phase)
    return u


def apply_two_atom_operator(state: ManyBodyState, operator: np.ndarray, j: int, k: int) -> np.ndarray:
    """Amplitudes of `operator` (9x9, basis d_j + 3*d_k) applied to atoms j and k."""
    n = state.atom_count
    axis_j, axis_k = n - 1 - j, n - 1 - k
    tensor = np.moveaxis(state.tensor(), (axis_k, axis_j), (0, 1))
    shape = tensor.shape
    out = (operator @ tensor.reshape(9, -1)).reshape(shape)
    return np.moveaxis(out, (0, 1), (axis_k, axis_j)).reshape(-1)


def pair_approximate_evolution(
    state: ManyBodyState,
    cloud: AtomCloud,
    T: float,
    c3: float = 1.0
) -> ManyBodyState:
    """
    Pair-expanded evolution ψ + Σ_{j<k} (U_jk - 1) ψ with the closed-form U_jk.

    The result is not normalized; its norm defect measures the dropped
    higher-order terms.
    """
    _check_cloud(state, cloud)
    v = coupling_matrix(cloud, c3)
    psi = np.array(state.amplitudes)
    identity = np.eye(9)
    for j, k in combinations(range(state.atom_count), 2):
        psi += apply_two_atom_operator(state, exact_pair_propagator(v[j, k], T) - identity, j, k)
    return ManyBodyState(psi, state.atom_count)
