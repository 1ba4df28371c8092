# --- tests/core/test_quadrature.py ---
import math

import numpy as np
import pytest

from src.rydberg_ramsey.core.exceptions import QuadratureError
from src.rydberg_ramsey.core.quadrature import (
    _exp_moments,
    checked_quad,
    filon_exp,
    gauss_legendre_panels,
    geometric_nodes,
    quad_exp,
)


def test_filon_is_exact_for_linear_functions():
    # ∫_0^{50} (1 + w) exp(-iw) dw over a handful of many-period panels
    nodes = np.array([0.0, 7.3, 31.0, 50.0])
    exact = (-1j * (1 - np.exp(-50j))) + (1j * 50 * np.exp(-50j) + np.exp(-50j) - 1)
    assert filon_exp(nodes, 1.0 + nodes) == pytest.approx(exact, abs=1e-12)


def test_filon_smooth_function():
    nodes = np.linspace(1.0, 40.0, 40001)
    value = filon_exp(nodes, 1.0 / nodes ** 2)
    reference, ok = quad_exp(lambda w: 1.0 / w ** 2, 1.0, 40.0)
    assert ok
    assert value == pytest.approx(reference, abs=1e-6)


def test_moments_on_both_sides_of_the_series_cutoff():
    for d in (0.999e-3, 1.001e-3):
        m0, m1 = _exp_moments(np.array([d]))
        half = 2.0 * math.sin(0.5 * d) ** 2
        assert m0[0] == pytest.approx(complex(math.sin(d), -half), rel=1e-9)
        assert m1[0] == pytest.approx(complex(d * math.sin(d) - half, -(math.sin(d) - d * math.cos(d))), rel=1e-5)


def test_geometric_nodes():
    nodes = geometric_nodes(0.1, 10.0, 0.01)
    assert nodes[0] == pytest.approx(0.1)
    assert nodes[-1] == pytest.approx(10.0)
    assert np.all(nodes[1:] / nodes[:-1] <= 1.01 + 1e-12)


def test_gauss_legendre_panels():
    nodes, weights = gauss_legendre_panels([0.0, 0.5, 2.0, math.pi])
    assert nodes.size == 48
    assert weights.sum() == pytest.approx(math.pi)
    assert np.sum(weights * np.sin(nodes)) == pytest.approx(2.0, abs=1e-14)


def test_gauss_legendre_panels_rejects_bad_breakpoints():
    with pytest.raises(QuadratureError):
        gauss_legendre_panels([0.0, 1.0, 1.0])
    with pytest.raises(QuadratureError):
        gauss_legendre_panels([0.0])


def test_checked_quad_reports_convergence():
    value, ok = checked_quad(math.exp, 0.0, 1.0)
    assert ok
    assert value == pytest.approx(math.e - 1.0)
    _, ok = checked_quad(lambda x: math.sin(1.0 / x) / x, 1e-8, 1.0, limit=5)
    assert not ok


def test_checked_quad_strict_raises():
    with pytest.raises(QuadratureError, match="did not converge"):
        checked_quad(lambda x: math.sin(1.0 / x) / x, 1e-8, 1.0, strict=True, limit=5)


def test_quad_exp_fourier_mode():
    # ∫_0^∞ exp(-w) exp(-iw) dw = 1 / (1 + i)
    value, ok = quad_exp(lambda w: math.exp(-w), 0.0, math.inf)
    assert ok
    assert value == pytest.approx(1.0 / (1.0 + 1j), abs=1e-8)
