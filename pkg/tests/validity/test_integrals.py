# --- tests/validity/test_integrals.py ---
import math

import pytest

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.validity.integrals import (
    VOLUME_FACTOR,
    cosine_volume_integral,
    sine_volume_integral,
    volume_integral_check,
)


@pytest.mark.parametrize("c3t", [1e-3, 1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3])
def test_volume_integral_matches_closed_form(c3t):
    result = volume_integral_check(c3t, 1.0)
    assert result.converged
    assert result.ratio == pytest.approx(1.0, abs=1e-3)
    assert result.analytic == pytest.approx(VOLUME_FACTOR * c3t)


@pytest.mark.parametrize("T, c3", [(1e-5, 6.1e-7), (2.0, 3.0), (0.5, 1e-4)])
def test_volume_integral_is_scale_invariant(T, c3):
    result = volume_integral_check(T, c3)
    reference = volume_integral_check(1.0, 1.0)
    assert result.integral / (c3 * T) == pytest.approx(reference.integral, rel=1e-12)


def test_volume_integral_without_storage():
    result = volume_integral_check(0.0, 1.0)
    assert result.integral == 0.0
    assert result.ratio == 1.0


def test_cutoff_integrals():
    # a very large sphere recovers the full cosine integral
    assert cosine_volume_integral(1.0, 1.0, 1e4) == pytest.approx(VOLUME_FACTOR, rel=1e-6)
    assert cosine_volume_integral(1.0, 1.0, math.inf) == pytest.approx(VOLUME_FACTOR)
    # the sine integral grows like 4π ln(R / r_c) once R >> r_c
    grow = sine_volume_integral(1.0, 1.0, 1e4) - sine_volume_integral(1.0, 1.0, 1e2)
    assert grow == pytest.approx(4.0 * math.pi * math.log(100.0), rel=1e-6)


def test_sine_integral_scales_with_rc3():
    small = sine_volume_integral(1.0, 1.0, 50.0)
    assert sine_volume_integral(8.0, 1.0, 100.0) == pytest.approx(8.0 * small, rel=1e-12)


def test_sine_integral_needs_cutoff():
    with pytest.raises(ParameterError, match="cutoff"):
        sine_volume_integral(1.0, 1.0, math.inf)
    with pytest.raises(ParameterError):
        volume_integral_check(-1.0, 1.0)
