# --- tests/core/test_series.py ---
import math

import numpy as np
import pytest

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.series import CorrelationSeries, fwhm


def test_series_is_read_only():
    series = CorrelationSeries(grid=[0.0, 1.0], values=[1.0, 2.0], grid_kind="tau")
    with pytest.raises(ValueError):
        series.values[0] = 5.0
    assert len(series) == 2
    assert not series.is_complex


@pytest.mark.parametrize("kwargs, message", [
    ({"grid": [0.0, 1.0], "values": [1.0]}, "values"),
    ({"grid": [1.0, 0.0], "values": [1.0, 2.0]}, "increasing"),
    ({"grid": [0.0, 1.0], "values": [1.0, 2.0], "grid_kind": "x"}, "grid kind"),
    ({"grid": [0.0, 1.0], "values": [1.0, 2.0], "normalization": "unit"}, "normalization"),
])
def test_series_validation(kwargs, message):
    kwargs.setdefault("grid_kind", "tau")
    with pytest.raises(ParameterError, match=message):
        CorrelationSeries(**kwargs)


def test_columns():
    real = CorrelationSeries(grid=[0.0, 1.0], values=[1.0, 2.0], grid_kind="z")
    assert list(real.columns()) == ["z", "value"]
    complex_ = CorrelationSeries(grid=[0.0, 1.0], values=[1j, 2.0], grid_kind="k")
    columns = complex_.columns()
    assert list(columns) == ["k", "real", "imag"]
    np.testing.assert_array_equal(columns["imag"], [1.0, 0.0])


def test_with_flags_merges():
    series = CorrelationSeries(grid=[0.0], values=[1.0], grid_kind="tau", flags=("windowed",))
    flagged = series.with_flags("windowed", "band-clipped:2")
    assert flagged.flags == ("windowed", "band-clipped:2")
    assert series.flags == ("windowed",)


def test_uniformity():
    assert CorrelationSeries(grid=np.linspace(0, 1, 11), values=np.zeros(11), grid_kind="tau").is_uniform()
    assert not CorrelationSeries(grid=[0.0, 0.1, 0.3], values=[0.0] * 3, grid_kind="tau").is_uniform()


def test_fwhm_of_gaussian():
    x = np.linspace(-5.0, 5.0, 2001)
    assert fwhm(x, np.exp(-x ** 2 / 2.0)) == pytest.approx(2.0 * math.sqrt(2.0 * math.log(2.0)), rel=1e-4)


def test_fwhm_open_side_is_nan():
    x = np.linspace(0.0, 5.0, 101)
    assert math.isnan(fwhm(x, np.exp(-x)))
