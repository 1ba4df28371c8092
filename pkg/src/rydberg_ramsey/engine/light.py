# --- engine/light.py ---
from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy import fft
from scipy.integrate import quad
from scipy.spatial.distance import cdist, pdist
from scipy.special import gamma

from src.rydberg_ramsey.core.config import DEFAULT_MAX_PAIRS
from src.rydberg_ramsey.core.exceptions import CapacityError, ParameterError
from src.rydberg_ramsey.core.series import CorrelationSeries
from src.rydberg_ramsey.engine.atomic import excitation_weight, g1_at_matrix
from src.rydberg_ramsey.ensemble.cloud import AtomCloud
from src.rydberg_ramsey.ensemble.params import PhysicalParams, derive_params

logger = logging.getLogger(__name__)

# ∫_0^∞ (1 - cos u^-3) du
LINE_MOMENT = -gamma(-1.0 / 3.0) * math.cos(math.pi / 6.0) / 3.0
# ∫ d³u (1 - cos u^-3)
VOLUME_MOMENT = 2.0 * math.pi ** 2 / 3.0

# Lag step (r_c) of the continuum first-order correlation.
G1_CONTINUUM_STEP = 0.002

# Rows of reference atoms handled per cdist block.
_REFERENCE_BLOCK = 512


@dataclass(frozen=True)
class AveragingBand:
    """Pairs with | |z_j - z_k| - separation | <= half_width enter the average."""
    separation: float
    half_width: float

    def __post_init__(self) -> None:
        if not 0.0 < self.half_width < self.separation:
            raise ParameterError(
                f"Band half-width {self.half_width} must lie in (0, separation={self.separation})"
            )


def _tau_array(tau_grid: Sequence[float], allow_zero: bool) -> np.ndarray:
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0:
        raise ParameterError("tau_grid must be a non-empty 1D sequence")
    if np.any(np.diff(tau) <= 0):
        raise ParameterError("tau_grid must be strictly increasing")
    if tau[0] < 0 or (not allow_zero and tau[0] == 0):
        raise ParameterError("tau_grid must be positive")
    return tau


def _pair_signal(u: np.ndarray) -> np.ndarray:
    """|exp(-i u^-3) - 1|² = 4 sin²(u^-3 / 2)."""
    return 4.0 * np.sin(0.5 / u ** 3) ** 2


def band_for(separation: float, spacing: float, half_width: Optional[float]) -> tuple:
    """
    Averaging band at one separation, and whether it had to be clipped.

    Default half-width max(separation/20, 2 * spacing); anything not below the
    separation is clipped to separation/2.
    """
    width = half_width if half_width is not None else max(separation / 20.0, 2.0 * spacing)
    if width >= separation:
        return AveragingBand(separation, 0.5 * separation), True
    return AveragingBand(separation, width), False


def g2_light(
    cloud: Optional[AtomCloud],
    epsilon: float,
    T: float,
    c3: float,
    v_g0: float,
    tau_grid: Sequence[float],
    band_half_width: Optional[float] = None,
    normalization: str = "input-intensity-normalized",
    max_pairs: int = DEFAULT_MAX_PAIRS
) -> CorrelationSeries:
    """
    Second-order correlation of the retrieved light versus detection delay τ.

    Each τ maps to the separation v_g0 τ along z. With a cloud, G_at^(2) is
    averaged over the pairs whose |z_j - z_k| falls in the band around that
    separation, divided by the pair count N_r. With cloud=None the continuum
    law is evaluated pointwise, or band-averaged when `band_half_width` is given.

    "input-intensity-normalized" values are |exp(-iV T) - 1|²; "raw" values are
    G_at^(2) itself, i.e. (A⁴ε⁴/4) times that. The small-phase tail is
    c (r_c/(v_g0 τ))^6 / 2 with the declared constant c in the metadata.

    :param cloud: Atom positions in metres, or None for the continuum.
    :param epsilon: Probe-to-control Rabi ratio.
    :param T: Storage time (s).
    :param c3: Exchange coefficient (m^3/s).
    :param v_g0: Group velocity (m/s).
    :param tau_grid: Strictly increasing positive delays (s).
    :param band_half_width: Band half-width in metres; default per separation.
    :param normalization: "input-intensity-normalized" or "raw".
    :param max_pairs: Cap on the number of pairs held in memory.
    :return: Real series on the τ grid; empty bands give NaN and an "empty-band" flag.
    :raises ParameterError: If v_g0 min(τ) does not exceed the cloud's transverse width.
    :raises CapacityError: If the cloud has more pairs than max_pairs.
    """
    if normalization not in ("input-intensity-normalized", "raw"):
        raise ParameterError(f"Unsupported normalization for g2_light: {normalization}")
    tau = _tau_array(tau_grid, allow_zero=False)
    r_c = (c3 * T) ** (1.0 / 3.0)
    separations = v_g0 * tau / r_c
    scale = 0.25 * excitation_weight(epsilon) if normalization == "raw" else 1.0
    flags: List[str] = []
    metadata = {
        "declared_constant": 2.0 * scale,
        "r_c": r_c,
        "v_g0": v_g0,
        "epsilon": epsilon,
    }

    if cloud is None:
        values, widths, clipped = _g2_continuum(separations, band_half_width, r_c)
        metadata.update({"mode": "continuum", "band_half_width_rc": widths})
    else:
        width = cloud.geometry.transverse_width if cloud.geometry is not None else 0.0
        if width > 0 and not v_g0 * tau[0] > width:
            raise ParameterError(
                f"v_g0 * min(tau) = {v_g0 * tau[0]:.3g} m does not exceed the transverse width {width:.3g} m"
            )
        values, widths, counts, clipped = _g2_monte_carlo(cloud, separations, band_half_width, r_c, max_pairs)
        empty = [int(i) for i in np.nonzero(counts == 0)[0]]
        if empty:
            logger.warning("g2_light: %d of %d bands hold no atom pairs", len(empty), len(tau))
            flags.append(f"empty-band:{len(empty)}")
        metadata.update({
            "mode": "monte-carlo",
            "pair_counts": counts.tolist(),
            "band_half_width_rc": widths,
            "n_r": "pairs",
            "seed": cloud.seed,
            "atoms": len(cloud),
        })
    if clipped:
        logger.warning("g2_light: averaging band clipped to separation/2 at %d delays", clipped)
        flags.append(f"band-clipped:{clipped}")

    return CorrelationSeries(
        grid=tau,
        values=scale * values,
        grid_kind="tau",
        normalization=normalization,
        units="si",
        metadata=metadata,
        flags=tuple(flags),
    )


def _g2_continuum(separations: np.ndarray, band_half_width: Optional[float], r_c: float):
    if band_half_width is None:
        return _pair_signal(separations), None, 0
    values = np.empty_like(separations)
    widths = []
    clipped = 0
    for i, s in enumerate(separations):
        band, was_clipped = band_for(s, 0.0, band_half_width / r_c)
        clipped += was_clipped
        lo, hi = s - band.half_width, s + band.half_width
        integral, _ = quad(_pair_signal, lo, hi, limit=200)
        values[i] = integral / (hi - lo)
        widths.append(band.half_width)
    return values, widths, clipped


def _g2_monte_carlo(cloud, separations, band_half_width, r_c, max_pairs):
    n = len(cloud)
    n_pairs = n * (n - 1) // 2
    if n_pairs > max_pairs:
        raise CapacityError(f"{n} atoms give {n_pairs} pairs; cap is {max_pairs} (RYDBERG_MAX_PAIRS)")
    positions = cloud.positions / r_c
    dz = pdist(positions[:, 2:3])
    signal = _pair_signal(pdist(positions))
    order = np.argsort(dz, kind="stable")
    dz_sorted = dz[order]
    cumulative = np.concatenate(([0.0], np.cumsum(signal[order])))
    spacing = cloud.mean_spacing() / r_c
    hw = None if band_half_width is None else band_half_width / r_c

    values = np.full(separations.size, np.nan)
    counts = np.zeros(separations.size, dtype=int)
    widths = []
    clipped = 0
    for i, s in enumerate(separations):
        band, was_clipped = band_for(s, spacing, hw)
        clipped += was_clipped
        widths.append(band.half_width)
        lo = np.searchsorted(dz_sorted, s - band.half_width, side="left")
        hi = np.searchsorted(dz_sorted, s + band.half_width, side="right")
        counts[i] = hi - lo
        if counts[i]:
            values[i] = (cumulative[hi] - cumulative[lo]) / counts[i]
    logger.debug("g2_light: %d atoms, %d pairs, %d delays", n, n_pairs, separations.size)
    return values, widths, counts, clipped


def intensity_samples(
    cloud: AtomCloud,
    epsilon: float,
    T: float,
    c3: float,
    interior_margin: Optional[float] = None
) -> np.ndarray:
    """
    Retrieved-to-input intensity ratio A⁴(ε²/2) Σ_k (1 - cos V_jk T) seen from each reference atom j.

    :param interior_margin: If given (metres), only atoms at least this far from
        every face of the cloud's geometry serve as references.
    :raises ParameterError: If no reference atom remains.
    """
    r_c = (c3 * T) ** (1.0 / 3.0) if T > 0 else 1.0
    positions = cloud.positions
    references = positions
    if interior_margin is not None:
        if cloud.geometry is None:
            raise ParameterError("interior_margin needs a cloud with a geometry")
        references = positions[cloud.geometry.boundary_distance(positions) >= interior_margin]
    if references.shape[0] == 0:
        raise ParameterError("No reference atoms left for the intensity average")
    prefactor = 0.5 * epsilon ** 2 / (1.0 + epsilon ** 2) ** 2
    if T == 0:
        return np.zeros(references.shape[0])

    sums = np.empty(references.shape[0])
    for start in range(0, references.shape[0], _REFERENCE_BLOCK):
        d = cdist(references[start:start + _REFERENCE_BLOCK], positions) / r_c
        d = np.where(d > 0, d, np.inf)
        sums[start:start + _REFERENCE_BLOCK] = (2.0 * np.sin(0.5 / d ** 3) ** 2).sum(axis=1)
    return prefactor * sums


def intensity_ratio(
    cloud: AtomCloud,
    epsilon: float,
    T: float,
    c3: float = 1.0,
    interior_margin: Optional[float] = None
) -> float:
    """Mean of intensity_samples over the reference atoms; non-negative."""
    return float(np.mean(intensity_samples(cloud, epsilon, T, c3, interior_margin)))


def intensity_ratio_continuum(
    epsilon: float,
    T: float,
    c3: float,
    density: float,
    dim_mode: str = "full-3D"
) -> float:
    """
    Homogeneous-medium intensity ratio.

    full-3D:    A⁴ ε² n π² r_c³ / 3
    reduced-1D: A⁴ ε² n_lin r_c ∫_0^∞ (1 - cos u^-3) du, `density` per metre
    """
    r_c = (c3 * T) ** (1.0 / 3.0)
    prefactor = 0.5 * epsilon ** 2 / (1.0 + epsilon ** 2) ** 2
    if dim_mode == "full-3D":
        return prefactor * density * VOLUME_MOMENT * r_c ** 3
    if dim_mode == "reduced-1D":
        return prefactor * density * r_c * 2.0 * LINE_MOMENT
    raise ParameterError(f"Unknown dim_mode: {dim_mode}")


def regularized_autocorrelation(separations: np.ndarray, step: float = G1_CONTINUUM_STEP) -> np.ndarray:
    """
    C(s) = ∫ conj(a(x)) a(x + s) dx for a(x) = exp(-i|x|^-3) - 1, lengths in r_c.

    Below z_ε = (12 step/π)^(1/4) the phase advances more than π/4 per step and
    a is replaced by its oscillation average -1; the lost |a|² weight (2 z_ε)
    is restored at s = 0. The result is real and even in s.
    """
    s = np.abs(np.asarray(separations, dtype=float))
    extent = max(64.0, 2.0 * float(s.max()) + 16.0)
    n = int(math.ceil(extent / step))
    x = np.arange(-n, n + 1) * step
    z_eps = (12.0 * step / math.pi) ** 0.25
    ax = np.abs(x)
    with np.errstate(divide="ignore"):
        a = np.where(ax < z_eps, -1.0 + 0j, np.expm1(-1j / np.where(ax < z_eps, 1.0, ax) ** 3))
    size = fft.next_fast_len(2 * x.size)
    spectrum = fft.fft(a, size)
    lags = int(math.ceil(s.max() / step)) + 2
    corr = fft.ifft(np.conj(spectrum) * spectrum)[:lags] * step
    lag_grid = np.arange(lags) * step
    values = np.interp(s, lag_grid, corr.real)
    values = values + np.where(s < 0.5 * step, 2.0 * z_eps, 0.0)
    logger.debug("Continuum autocorrelation: %d nodes, z_eps=%.4f, imag residual %.2e", x.size, z_eps, np.abs(corr.imag).max())
    return values


def g1_light(
    params: PhysicalParams,
    tau_grid: Sequence[float],
    cloud: Optional[AtomCloud] = None,
    band_half_width: Optional[float] = None,
    normalization: str = "raw",
    step: float = G1_CONTINUUM_STEP
) -> CorrelationSeries:
    """
    First-order correlation of the retrieved light versus delay τ >= 0.

    Continuum mode (cloud=None) integrates the pair amplitudes over a homogeneous
    line of density density_n times the cross-section:
    G^(1)(τ) = (A⁴ε⁴/4) n_lin r_c C(v_g0 τ / r_c). With a cloud, G_at^(1)(r_j, r_k)
    is band-averaged over pairs with z_k - z_j ≈ v_g0 τ.

    :param normalization: "raw" or "peak-normalized" (divided by the τ = 0 value in continuum
        mode, by the first sample with a cloud).
    """
    if normalization not in ("raw", "peak-normalized"):
        raise ParameterError(f"Unsupported normalization for g1_light: {normalization}")
    tau = _tau_array(tau_grid, allow_zero=True)
    d = derive_params(params)
    separations = d.v_g0 * tau / d.r_c
    weight = 0.25 * excitation_weight(d.epsilon)
    flags: List[str] = []
    metadata = {"r_c": d.r_c, "v_g0": d.v_g0, "epsilon": d.epsilon}

    if cloud is None:
        line_density = params.linear_density
        correlation = regularized_autocorrelation(np.concatenate(([0.0], separations)), step)
        values = weight * line_density * d.r_c * correlation[1:].astype(complex)
        peak = weight * line_density * d.r_c * correlation[0]
        metadata.update({"mode": "continuum", "linear_density": line_density, "lag_step_rc": step})
    else:
        values, empty = _g1_band_average(cloud, params, d, separations, band_half_width)
        peak = None
        if empty:
            logger.warning("g1_light: %d of %d bands hold no atom pairs", empty, tau.size)
            flags.append(f"empty-band:{empty}")
        metadata.update({"mode": "monte-carlo", "seed": cloud.seed, "atoms": len(cloud)})

    if normalization == "peak-normalized":
        if peak is None:
            peak = float(np.real(values[0]))
        values = values / peak
    return CorrelationSeries(
        grid=tau,
        values=values,
        grid_kind="tau",
        normalization=normalization,
        units="si",
        metadata=metadata,
        flags=tuple(flags),
    )


def _g1_band_average(cloud, params, d, separations, band_half_width):
    scaled = cloud.scaled(1.0 / d.r_c)
    g1 = g1_at_matrix(scaled, d.epsilon, 1.0, 1.0)
    z = scaled.z
    signed = z[None, :] - z[:, None]
    spacing = cloud.mean_spacing() / d.r_c
    hw = None if band_half_width is None else band_half_width / d.r_c
    values = np.full(separations.size, np.nan + 0j)
    empty = 0
    for i, s in enumerate(separations):
        width = hw if hw is not None else max(s / 20.0, 2.0 * spacing)
        mask = np.abs(signed - s) <= width
        if not np.any(mask):
            empty += 1
            continue
        values[i] = g1[mask].mean()
    return values, empty
