# --- core/quadrature.py ---
from __future__ import annotations
import logging
import math
import warnings
from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import roots_legendre

from src.rydberg_ramsey.core.exceptions import QuadratureError

logger = logging.getLogger(__name__)

# Below this panel phase the closed-form moments lose digits; use their series.
_SERIES_CUTOFF = 1e-3


def _exp_moments(delta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    M0 = ∫_0^Δ exp(-it) dt and M1 = ∫_0^Δ t exp(-it) dt, elementwise.
    """
    delta = np.asarray(delta, dtype=float)
    e = np.exp(-1j * delta)
    m0 = -1j * (1.0 - e)
    m1 = 1j * delta * e + e - 1.0
    small = delta < _SERIES_CUTOFF
    if np.any(small):
        d = delta[small]
        m0[small] = d - 0.5j * d ** 2 - d ** 3 / 6.0 + 1j * d ** 4 / 24.0 + d ** 5 / 120.0
        m1[small] = d ** 2 / 2.0 - 1j * d ** 3 / 3.0 - d ** 4 / 8.0 + 1j * d ** 5 / 30.0 + d ** 6 / 144.0
    return m0, m1


def filon_exp(nodes: np.ndarray, values: np.ndarray) -> complex:
    """
    ∫ exp(-iw) h(w) dw over [nodes[0], nodes[-1]] with h piecewise linear between nodes.

    Each panel is integrated exactly against the oscillating factor, so panels
    may span many periods.

    :param nodes: Strictly increasing abscissae.
    :param values: h at the nodes (real or complex).
    """
    w = np.asarray(nodes, dtype=float)
    h = np.asarray(values)
    if w.size < 2:
        return 0j
    delta = np.diff(w)
    slopes = np.diff(h) / delta
    m0, m1 = _exp_moments(delta)
    return complex(np.sum(np.exp(-1j * w[:-1]) * (h[:-1] * m0 + slopes * m1)))


def geometric_nodes(lo: float, hi: float, ratio: float) -> np.ndarray:
    """Nodes from lo to hi (both > 0) whose successive quotients stay below 1 + ratio."""
    count = max(1, int(math.ceil(math.log(hi / lo) / math.log1p(ratio))))
    return lo * (hi / lo) ** (np.arange(count + 1) / count)


@lru_cache(maxsize=8)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_panels(breakpoints: Sequence[float], order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre nodes and weights over consecutive [b_i, b_(i+1)] panels.
    """
    b = np.asarray(breakpoints, dtype=float)
    if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0):
        raise QuadratureError("Panel breakpoints must be strictly increasing")
    x, w = _legendre(order)
    half = 0.5 * np.diff(b)
    mid = 0.5 * (b[1:] + b[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def checked_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    strict: bool = False,
    **kwargs
) -> Tuple[float, bool]:
    """
    scipy.integrate.quad that reports IntegrationWarning as converged=False instead of printing it.

    Keyword arguments are passed through (weight, wvar, limit, limlst, ...).
    Not thread-safe: warning capture is process-wide.

    :param strict: Raise instead of returning converged=False.
    :raises QuadratureError: If strict and quad did not converge.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value = quad(func, a, b, **kwargs)[0]
    problems = [w for w in caught if issubclass(w.category, IntegrationWarning)]
    if problems:
        if strict:
            raise QuadratureError(f"quad over [{a:g}, {b:g}] did not converge: {problems[0].message}")
        logger.debug("quad over [%g, %g] did not converge: %s", a, b, problems[0].message)
    return value, not problems


def quad_exp(
    func: Callable[[float], float],
    a: float,
    b: float,
    omega: float = 1.0,
    **kwargs
) -> Tuple[complex, bool]:
    """
    ∫_a^b f(w) exp(-iωw) dw for real f through quad's cos/sin weights.

    b = inf selects the Fourier-integral mode (QAWF), a finite b the QAWO mode.
    """
    if b == math.inf:
        kwargs.setdefault("limlst", 200)
    else:
        kwargs.setdefault("limit", 1000)
    re, ok_re = checked_quad(func, a, b, weight="cos", wvar=omega, **kwargs)
    im, ok_im = checked_quad(func, a, b, weight="sin", wvar=omega, **kwargs)
    return complex(re, -im), ok_re and ok_im
