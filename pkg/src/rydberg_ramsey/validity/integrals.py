# --- validity/integrals.py ---
from __future__ import annotations
import logging
import math
from typing import NamedTuple

from scipy.special import sici

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.quadrature import checked_quad

logger = logging.getLogger(__name__)

# (2/3)π², the volume integral of 1 - cos(r_c³/r³) in units of r_c³
VOLUME_FACTOR = 2.0 * math.pi ** 2 / 3.0


class VolumeIntegral(NamedTuple):
    integral: float
    analytic: float
    ratio: float
    converged: bool


def _protocol_cosine_integral() -> tuple:
    """∫_0^∞ 4π u² (1 - cos u^-3) du, split at u = 1."""
    # u < 1 through w = u^-3: (4π/3) ∫_1^∞ (1 - cos w) / w² dw
    oscillating, ok_inner = checked_quad(lambda w: w ** -2.0, 1.0, math.inf, weight="cos", wvar=1.0, limlst=200)
    inner = 4.0 * math.pi / 3.0 * (1.0 - oscillating)
    outer, ok_outer = checked_quad(lambda u: 8.0 * math.pi * (u * math.sin(0.5 * u ** -3.0)) ** 2, 1.0, math.inf, limit=200)
    return inner + outer, ok_inner and ok_outer


def volume_integral_check(T: float, c3: float) -> VolumeIntegral:
    """
    Radial quadrature of ∫ d³r (1 - cos[V(r)T]) against its closed form (2/3)π² C3 T.

    The integrand is taken in units of r_c = (C3 T)^(1/3), so the ratio does
    not depend on the parameters beyond round-off. T = 0 gives a zero integral
    and ratio 1.
    """
    if T < 0 or not c3 > 0:
        raise ParameterError("volume_integral_check needs T >= 0 and c3 > 0")
    analytic = VOLUME_FACTOR * c3 * T
    if T == 0:
        return VolumeIntegral(0.0, 0.0, 1.0, True)
    value, converged = _protocol_cosine_integral()
    integral = value * c3 * T
    if not converged:
        logger.warning("volume_integral_check: quadrature did not converge")
    return VolumeIntegral(integral, analytic, integral / analytic, converged)


def cosine_volume_integral(T: float, c3: float, cutoff: float) -> float:
    """∫_{r < cutoff} d³r (1 - cos[V(r)T]), closed form; tends to (2/3)π² r_c³."""
    w = _cutoff_phase(T, c3, cutoff)
    r_c3 = c3 * T
    if w == 0:
        return VOLUME_FACTOR * r_c3
    return 4.0 * math.pi / 3.0 * r_c3 * ((1.0 - math.cos(w)) / w + 0.5 * math.pi - float(sici(w)[0]))


def sine_volume_integral(T: float, c3: float, cutoff: float) -> float:
    """
    ∫_{r < cutoff} d³r sin[V(r)T] = (4π/3) r_c³ [sin w_R / w_R - Ci(w_R)], w_R = (r_c/R)³.

    Grows like log(R) without the cutoff.
    """
    w = _cutoff_phase(T, c3, cutoff)
    if w == 0:
        raise ParameterError("The sine volume integral diverges without a finite cutoff")
    return 4.0 * math.pi / 3.0 * c3 * T * (math.sin(w) / w - float(sici(w)[1]))


def _cutoff_phase(T: float, c3: float, cutoff: float) -> float:
    if not (T > 0 and c3 > 0 and cutoff > 0):
        raise ParameterError("Volume integrals need positive T, c3 and cutoff")
    return c3 * T / cutoff ** 3 if math.isfinite(cutoff) else 0.0
