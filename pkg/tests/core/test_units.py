# --- tests/core/test_units.py ---
import math

import numpy as np
import pytest

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.units import ProtocolUnits, to_si


@pytest.mark.parametrize("quantity, expected", [
    (3.5, 3.5),
    ({"value": 2, "unit": "2pi*MHz"}, 2 * 2 * math.pi * 1e6),
    ({"value": 610, "unit": "GHz*um^3"}, 610e-9),
    ({"value": 1e11, "unit": "cm^-3"}, 1e17),
    ({"value": 10, "unit": "us"}, 1e-5),
])
def test_to_si(quantity, expected):
    assert to_si(quantity) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("quantity", [True, {"value": 1, "unit": "furlong"}, {"unit": "m"}, "1 m"])
def test_to_si_rejects(quantity):
    with pytest.raises(ParameterError):
        to_si(quantity)


def test_protocol_units_round_trip_scales():
    units = ProtocolUnits(length=2e-4, time=1e-5)
    assert units.to_protocol_length(4e-4) == pytest.approx(2.0)
    np.testing.assert_allclose(units.to_si_time(np.array([1.0, 2.0])), [1e-5, 2e-5])
    assert units.to_protocol_rate(1e6) == pytest.approx(10.0)
    assert units.to_protocol_density(1e17) == pytest.approx(1e17 * 8e-12)


def test_protocol_units_positive():
    with pytest.raises(ParameterError):
        ProtocolUnits(length=0.0, time=1.0)
