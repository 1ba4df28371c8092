# --- engine/spectrum.py ---
from __future__ import annotations
import logging

import numpy as np
from scipy.signal.windows import tukey

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.series import CorrelationSeries

logger = logging.getLogger(__name__)

# Edge magnitude, relative to the peak, above which the record is tapered.
EDGE_DECAY_THRESHOLD = 1e-6
TAPER_FRACTION = 0.2


def spectrum(
    g1: CorrelationSeries,
    decay_threshold: float = EDGE_DECAY_THRESHOLD,
    taper: float = TAPER_FRACTION
) -> CorrelationSeries:
    """
    S(ω) = ∫ exp(-iωτ) G^(1)(τ) dτ by trapezoid-weighted FFT.

    A grid starting at τ = 0 is first extended to negative delays with
    G^(1)(-τ) = conj(G^(1)(τ)), so a real symmetric G^(1) gives a real S.
    If the record has not decayed below `decay_threshold` of its peak at both
    ends, a Tukey window is applied and the result is flagged "windowed".

    :param g1: Series on a uniform τ grid.
    :return: Complex series on an increasing ω grid (rad per unit of τ).
    :raises ParameterError: If the grid is not uniform or too short.
    """
    if len(g1) < 3:
        raise ParameterError("spectrum needs at least three samples")
    if not g1.is_uniform():
        raise ParameterError("spectrum needs a uniform grid")
    t = g1.grid
    values = np.asarray(g1.values, dtype=complex)
    step = t[1] - t[0]
    if abs(t[0]) < 1e-9 * step:
        t = np.concatenate((-t[:0:-1], t))
        values = np.concatenate((np.conj(values[:0:-1]), values))

    flags = list(g1.flags)
    peak = np.abs(values).max()
    edge = max(abs(values[0]), abs(values[-1]))
    if peak > 0 and edge > decay_threshold * peak:
        logger.warning("spectrum: edges at %.2e of the peak; applying a Tukey(%.2f) window", edge / peak, taper)
        values = values * tukey(values.size, taper)
        flags.append("windowed")

    weights = np.ones(values.size)
    weights[0] = weights[-1] = 0.5
    omega = 2.0 * np.pi * np.fft.fftfreq(values.size, d=step)
    transform = step * np.exp(-1j * omega * t[0]) * np.fft.fft(weights * values)
    logger.debug("spectrum: %d samples, d_omega=%.4g", values.size, 2.0 * np.pi / (values.size * step))
    return CorrelationSeries(
        grid=np.fft.fftshift(omega),
        values=np.fft.fftshift(transform),
        grid_kind="omega",
        normalization=g1.normalization,
        units=g1.units,
        metadata={**g1.metadata, "samples": int(values.size), "source_grid_kind": g1.grid_kind},
        flags=tuple(flags),
    )
