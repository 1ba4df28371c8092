# --- validity/norm.py ---
from __future__ import annotations
import logging
import math
from typing import Optional, Tuple

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.ensemble.params import PhysicalParams, derive_params
from src.rydberg_ramsey.validity.integrals import cosine_volume_integral, sine_volume_integral

logger = logging.getLogger(__name__)


def norm_defect_terms(pair_density: float, rydberg_count: float) -> Tuple[float, float]:
    """
    Order-of-magnitude norm defects of the pair-truncated state.

    :param pair_density: n_Ry r_c³.
    :param rydberg_count: n_Ry 𝒱, the number of Rydberg atoms in the cloud.
    :return: ((n_Ry r_c³)² n_Ry 𝒱, (n_Ry r_c³)² (n_Ry 𝒱)²)
    """
    if pair_density < 0 or rydberg_count < 0:
        raise ParameterError("Densities and counts must be non-negative")
    x2 = pair_density ** 2
    return x2 * rydberg_count, x2 * rydberg_count ** 2


def norm_defect_estimate(
    params: PhysicalParams,
    volume: Optional[float] = None,
    integrated: bool = False
) -> Tuple[float, float]:
    """
    The two norm-defect terms for a cloud of the given volume.

    With `integrated=True` the pair sums are replaced by integrals over a
    sphere of that volume, keeping the A⁶ε⁶/4 and A⁸ε⁸/16 prefactors:
    (n_Ry³ 𝒱 / 4) |J|² and (n_Ry⁴ 𝒱² / 16) |J|², J = ∫ d³r (exp(iVT) - 1).

    :param volume: Cloud volume (m³); defaults to the geometry's volume.
    """
    volume = params.geometry.volume if volume is None else volume
    if not volume > 0:
        raise ParameterError("norm_defect_estimate needs a positive volume")
    d = derive_params(params)
    if not integrated:
        return norm_defect_terms(d.n_ry * d.r_c ** 3, d.n_ry * volume)
    if d.n_ry == 0:
        return 0.0, 0.0
    radius = (3.0 * volume / (4.0 * math.pi)) ** (1.0 / 3.0)
    real = -cosine_volume_integral(params.storage_T, params.c3, radius)
    imag = sine_volume_integral(params.storage_T, params.c3, radius)
    j2 = real ** 2 + imag ** 2
    logger.debug("Integrated norm defect: sphere radius %.3g m, |J| = %.3g r_c^3", radius, math.sqrt(j2) / d.r_c ** 3)
    return d.n_ry ** 3 * volume * j2 / 4.0, d.n_ry ** 4 * volume ** 2 * j2 / 16.0
