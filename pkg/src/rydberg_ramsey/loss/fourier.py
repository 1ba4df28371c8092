# --- loss/fourier.py ---
from __future__ import annotations
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import sici

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.quadrature import checked_quad, gauss_legendre_panels, quad_exp
from src.rydberg_ramsey.core.series import CorrelationSeries
from src.rydberg_ramsey.loss.profiles import LossProfile, z_array, lossless_amplitude

logger = logging.getLogger(__name__)

# Upper end of the oscillatory tail integral over u > 1; the remainder is O(u^-5).
TAIL_END = 1000.0
# The Gaussian filter exp(-ℓ²k²) is dropped beyond k = K_SPAN / ℓ.
K_SPAN = 6.0
PANEL_WIDTH = 0.25
GRADED_LEVELS = 20


def _inner_part(k: float) -> Tuple[complex, bool]:
    """∫_0^1 exp(-i u^-3) cos(ku) du, as ∫_1^∞ exp(-iw) cos(k w^-1/3) w^-4/3 / 3 dw."""
    def c(w):
        return math.cos(k * w ** (-1.0 / 3.0)) * w ** (-4.0 / 3.0) / 3.0
    # past the stationary point of w + k w^-1/3 the cosine factor is slow
    split = max(2.0, (2.0 * k / 3.0) ** 0.75)
    head, ok_head = quad_exp(c, 1.0, split)
    tail, ok_tail = quad_exp(c, split, math.inf)
    return head + tail, ok_head and ok_tail


def _outer_part(k: float) -> Tuple[complex, bool]:
    """∫_1^∞ [(cos φ - 1) - i (sin φ - φ)] cos(ku) du with φ = u^-3."""
    def re(u):
        return math.cos(u ** -3) - 1.0

    def im(u):
        phi = u ** -3
        return -(math.sin(phi) - phi)

    if k == 0:
        a, ok_a = checked_quad(re, 1.0, TAIL_END, limit=200)
        b, ok_b = checked_quad(im, 1.0, TAIL_END, limit=200)
    else:
        a, ok_a = checked_quad(re, 1.0, TAIL_END, weight="cos", wvar=k, limit=1000)
        b, ok_b = checked_quad(im, 1.0, TAIL_END, weight="cos", wvar=k, limit=1000)
    return complex(a, b), ok_a and ok_b


def _inverse_cube_cosine(k: float) -> float:
    """∫_1^∞ cos(ku) u^-3 du = cos k / 2 - k sin k / 2 + (k²/2) Ci(k)."""
    if k == 0:
        return 0.5
    return 0.5 * math.cos(k) - 0.5 * k * math.sin(k) + 0.5 * k ** 2 * float(sici(k)[1])


def i_tilde_protocol(k: float) -> Tuple[complex, bool]:
    """
    Ĩ(k) = i ∫ (exp(-i/|z|^3) - 1) exp(ikz) dz in units of r_c, even in k.

    The 1/u^3 tail of the bracket is integrated in closed form; the rest goes
    through quad's Fourier-weighted modes.

    :return: (value, converged)
    """
    k = abs(float(k))
    inner, ok_inner = _inner_part(k)
    outer, ok_outer = _outer_part(k)
    sinc = float(np.sinc(k / math.pi))
    value = 2j * (inner - sinc + outer - 1j * _inverse_cube_cosine(k))
    return value, ok_inner and ok_outer


def i_tilde(k_grid: Sequence[float], T: float, c3: float) -> CorrelationSeries:
    """
    Fourier transform of the lossless amplitude, k in 1/m; values in metres.

    A non-convergent quadrature at any k is flagged, not raised.
    """
    k = np.asarray(k_grid, dtype=float)
    if k.ndim != 1 or k.size == 0 or not np.all(np.isfinite(k)):
        raise ParameterError("k_grid must be a non-empty finite 1D sequence")
    r_c = (c3 * T) ** (1.0 / 3.0)
    results = [i_tilde_protocol(x * r_c) for x in k]
    failed = sum(not ok for _, ok in results)
    flags = [f"quadrature-not-converged:{failed}"] if failed else []
    if failed:
        logger.warning("i_tilde: quadrature did not converge at %d of %d wavenumbers", failed, k.size)
    return CorrelationSeries(
        grid=k,
        values=r_c * np.array([v for v, _ in results]),
        grid_kind="k",
        units="si",
        metadata={"r_c": r_c},
        flags=tuple(flags),
    )


def k_breakpoints(loss_length: float, z_max: float) -> np.ndarray:
    """
    Panel ends on [0, K_SPAN/ℓ]: graded by halving toward k = 0, then uniform
    panels no wider than min(PANEL_WIDTH, π/z_max).
    """
    k_max = K_SPAN / loss_length
    graded = PANEL_WIDTH * 2.0 ** -np.arange(GRADED_LEVELS, -1, -1, dtype=float)
    points = [0.0] + [b for b in graded if b < k_max]
    start = points[-1]
    if k_max > start:
        width = min(PANEL_WIDTH, math.pi / z_max) if z_max > 0 else PANEL_WIDTH
        count = max(1, int(math.ceil((k_max - start) / width)))
        points.extend(np.linspace(start, k_max, count + 1)[1:].tolist())
    return np.array(points)


def fourier_lossy_values(z: np.ndarray, loss_length: float, order: int = 16) -> Tuple[np.ndarray, List[str]]:
    """
    I'(z) = (1/π) ∫_0^∞ Ĩ(k) cos(kz) exp(-ℓ²k²) dk by composite Gauss-Legendre, protocol units.
    """
    z = np.asarray(z, dtype=float)
    nodes, weights = gauss_legendre_panels(k_breakpoints(loss_length, float(np.abs(z).max())), order)
    results = [i_tilde_protocol(k) for k in nodes]
    spectrum = np.array([v for v, _ in results])
    failed = sum(not ok for _, ok in results)
    logger.debug("Fourier route: %d wavenumber nodes for %d points", nodes.size, z.size)
    filtered = weights * spectrum * np.exp(-(loss_length * nodes) ** 2)
    values = np.cos(np.outer(z, nodes)) @ filtered / math.pi
    flags = [f"quadrature-not-converged:{failed}"] if failed else []
    return values, flags


def lossy_profile_fourier(
    z_grid: Sequence[float],
    T: float,
    c3: float,
    L: float,
    alpha: float,
    order: int = 16
) -> LossProfile:
    """
    I'(z) through the Fourier route: the Gaussian loss filter applied to Ĩ(k) and
    transformed back. Agrees with lossy_profile on the same grid.
    """
    if not (L > 0 and alpha > 0):
        raise ParameterError("L and alpha must be positive")
    z = z_array(z_grid)
    r_c = (c3 * T) ** (1.0 / 3.0)
    loss_length = L / math.sqrt(alpha)
    values, flags = fourier_lossy_values(z / r_c, loss_length / r_c, order)
    if flags:
        logger.warning("Fourier route: %s", ", ".join(flags))
    return LossProfile(
        loss_length=loss_length,
        grid=z,
        lossless_I=lossless_amplitude(z / r_c),
        lossy_I=values,
        flags=tuple(flags),
        metadata={"r_c": r_c, "route": "fourier", "order": order},
    )
