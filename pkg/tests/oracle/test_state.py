# --- tests/oracle/test_state.py ---
import math

import numpy as np
import pytest

from src.rydberg_ramsey.core.exceptions import CapacityError, ParameterError
from src.rydberg_ramsey.oracle.state import (
    ManyBodyState,
    build_dark_state,
    configuration_label,
    product_state,
)


def test_no_probe_gives_ground_state():
    state = build_dark_state(0.0, 4)
    assert state.amplitudes[0] == 1.0
    assert np.count_nonzero(state.amplitudes) == 1


def test_single_atom_equal_mixture():
    state = build_dark_state(1.0, 1)
    np.testing.assert_allclose(state.amplitudes, [1 / math.sqrt(2), -1 / math.sqrt(2), 0.0], atol=1e-15)


def test_two_excitation_amplitude():
    eps = 0.1
    state = build_dark_state(eps, 3)
    expected = eps ** 2 * (1 + eps ** 2) ** -1.5
    assert state.amplitude("ssg") == pytest.approx(expected, rel=1e-14)
    assert state.amplitude("gss") == pytest.approx(expected, rel=1e-14)
    assert state.norm == pytest.approx(1.0, abs=1e-14)


def test_digit_order_is_atom_zero_first():
    state = product_state([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    # s on atom 0, g on atom 1, p on atom 2 -> 1 + 0*3 + 2*9
    assert state.amplitudes[19] == 1.0
    assert configuration_label(19, 3) == "sgp"


def test_memory_cap():
    with pytest.raises(CapacityError):
        build_dark_state(0.1, 11)
    build_dark_state(0.1, 3, max_atoms=3)
    with pytest.raises(CapacityError):
        build_dark_state(0.1, 4, max_atoms=3)


def test_invalid_inputs():
    with pytest.raises(ParameterError):
        build_dark_state(-0.1, 2)
    with pytest.raises(ParameterError):
        build_dark_state(0.1, 0)
    with pytest.raises(ParameterError):
        ManyBodyState(np.zeros(8), 2)


def test_triplet_export():
    state = build_dark_state(0.5, 2)
    rows = state.to_triplets()
    assert [row[0] for row in rows] == [0, 1, 3, 4]
    assert rows[0][1] == pytest.approx(1 / 1.25)
    assert all(row[2] == 0.0 for row in rows)


def test_level_counts():
    state = product_state([[0, 1, 0], [0, 0, 1], [0, 1, 0]])
    assert state.level_counts() == (2.0, 1.0)
