# --- loss/profiles.py ---
from __future__ import annotations
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson
from scipy.special import ndtr

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.core.quadrature import checked_quad, filon_exp, geometric_nodes, quad_exp
from src.rydberg_ramsey.core.series import CorrelationSeries
from src.rydberg_ramsey.ensemble.params import PhysicalParams, derive_params

logger = logging.getLogger(__name__)

# Kernel half-window, in kernel standard deviations.
KERNEL_SPAN = 10.0
# Loss lengths the medium must extend beyond a point before the kernel counts as covered.
COVERAGE_LOSS_LENGTHS = 6.0
FAR_NODES = 801
BRACKET_NODES = 4001
DEFAULT_TOLERANCE = 1e-4
DEFAULT_GRID_STEP = 1e-3
MAX_HALVINGS = 40
METHODS = ("grid", "adaptive")

Bracket = Callable[[np.ndarray], np.ndarray]


def lossless_amplitude(z: Any) -> Any:
    """I(z) = i (exp(-i/|z|^3) - 1) with z in units of r_c."""
    z = np.abs(np.asarray(z, dtype=float))
    if np.any(z == 0):
        raise ParameterError("The lossless amplitude is undefined at z = 0")
    return 1j * np.expm1(-1j / z ** 3)


def _kernel(x: np.ndarray, sigma: float) -> np.ndarray:
    return np.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))


def _near_piece(z: float, sigma: float, u_lo: float, u_hi: float, ratio: float) -> complex:
    """
    ∫_{u_lo}^{u_hi} exp(-i u^-3) [K(u - z) + K(u + z)] du, integrated over w = u^-3
    with exact panel moments.
    """
    if not u_lo < u_hi:
        return 0j
    u = geometric_nodes(u_lo, u_hi, ratio)[::-1]
    h = u ** 4 * (_kernel(u - z, sigma) + _kernel(u + z, sigma)) / 3.0
    return filon_exp(u ** -3.0, h)


def _far_piece(z: float, sigma: float, span: float = KERNEL_SPAN) -> complex:
    """∫_{|u| > 1} (exp(-i/|u|^3) - 1) K(u - z) du by Simpson's rule."""
    lo, hi = max(1.0, z - span * sigma), z + span * sigma
    if not lo < hi:
        return 0j
    u = np.linspace(lo, hi, FAR_NODES)
    f = np.expm1(-1j / u ** 3) * (_kernel(u - z, sigma) + _kernel(u + z, sigma))
    return complex(simpson(f.real, x=u), simpson(f.imag, x=u))


def _core_mass(z: float, sigma: float) -> float:
    """Kernel mass on |u| < 1, where the -1 part of the bracket is integrated exactly."""
    return float(ndtr((1.0 - z) / sigma) - ndtr((-1.0 - z) / sigma))


def initial_cut(grid_step: float) -> float:
    """Distance below which the phase u^-3 advances more than π/4 per grid step."""
    return min(0.5, (12.0 * grid_step / math.pi) ** 0.25)


def lossy_amplitude_grid(
    z: float,
    loss_length: float,
    grid_step: float = DEFAULT_GRID_STEP,
    tol: float = DEFAULT_TOLERANCE,
    span: float = KERNEL_SPAN
) -> Tuple[complex, float, bool]:
    """
    I'(z) = i ∫ (exp(-i/|u|^3) - 1) K(u - z) du, K the unit-mass Gaussian of variance
    2 loss_length², all lengths in r_c.

    Below the cut z_ε the oscillating exponential is replaced by its average 0;
    z_ε is halved until the piece it adds changes the result by less than `tol`.

    :return: (I'(z), final z_ε, whether the cut converged)
    """
    sigma = math.sqrt(2.0) * loss_length
    ratio = min(5e-4, sigma / 64.0)
    lo = max(z - span * sigma, 0.0)
    hi = min(1.0, z + span * sigma)

    z_eps = initial_cut(grid_step)
    near = _near_piece(z, sigma, max(z_eps, lo), hi, ratio)
    converged = False
    for _ in range(MAX_HALVINGS):
        smaller = 0.5 * z_eps
        piece = _near_piece(z, sigma, max(smaller, lo), min(z_eps, hi), ratio)
        near += piece
        z_eps = smaller
        if abs(piece) < tol:
            converged = True
            break
    value = 1j * (-_core_mass(z, sigma) + near + _far_piece(z, sigma, span))
    return value, z_eps, converged


def lossy_amplitude_adaptive(z: float, loss_length: float, span: float = KERNEL_SPAN) -> Tuple[complex, bool]:
    """
    Reference I'(z) by adaptive quadrature, without any cut: the inner region runs
    through quad's Fourier-weighted modes in w = u^-3.
    """
    sigma = math.sqrt(2.0) * loss_length
    lo = max(z - span * sigma, 0.0)
    hi = min(1.0, z + span * sigma)
    near, ok_near = 0j, True
    if lo < hi:
        def h(w):
            u = w ** (-1.0 / 3.0)
            return u ** 4 * (_kernel(u - z, sigma) + _kernel(u + z, sigma)) / 3.0
        near, ok_near = quad_exp(h, hi ** -3.0, lo ** -3.0 if lo > 0 else math.inf)

    far, ok_far = 0j, True
    f_lo, f_hi = max(1.0, z - span * sigma), z + span * sigma
    if f_lo < f_hi:
        def weight(u):
            return _kernel(u - z, sigma) + _kernel(u + z, sigma)
        re, ok_re = checked_quad(lambda u: math.cos(u ** -3) * weight(u) - weight(u), f_lo, f_hi, limit=200)
        im, ok_im = checked_quad(lambda u: -math.sin(u ** -3) * weight(u), f_lo, f_hi, limit=200)
        far, ok_far = complex(re, im), ok_re and ok_im
    value = 1j * (-_core_mass(z, sigma) + near + far)
    return value, ok_near and ok_far


def convolve_bracket(z: float, loss_length: float, bracket: Bracket, span: float = KERNEL_SPAN) -> complex:
    """i ∫ b(u) K(u - z) du for an arbitrary smooth bracket b, by Simpson's rule."""
    sigma = math.sqrt(2.0) * loss_length
    u = np.linspace(z - span * sigma, z + span * sigma, BRACKET_NODES)
    f = np.asarray(bracket(u), dtype=complex) * _kernel(u - z, sigma)
    return 1j * complex(simpson(f.real, x=u), simpson(f.imag, x=u))


def z_array(z_grid: Sequence[float], allow_zero: bool = False) -> np.ndarray:
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise ParameterError("z_grid must be a non-empty 1D sequence")
    if np.any(np.diff(z) <= 0):
        raise ParameterError("z_grid must be strictly increasing")
    if z[0] < 0 or (not allow_zero and z[0] == 0):
        raise ParameterError("z_grid must be positive")
    return z


def _grid_step(z: np.ndarray) -> float:
    return float(np.diff(z).min()) if z.size > 1 else DEFAULT_GRID_STEP


def lossy_values(
    z: np.ndarray,
    loss_length: float,
    method: str = "grid",
    tol: float = DEFAULT_TOLERANCE,
    grid_step: Optional[float] = None,
    bracket: Optional[Bracket] = None,
    threads: int = 1,
    span: float = KERNEL_SPAN
) -> Tuple[np.ndarray, List[str], Dict[str, Any]]:
    """
    I'(z) on protocol-unit points z >= 0.

    :param method: "grid" (cut regularization and exact panel moments) or
        "adaptive" (quad reference, always serial).
    :param bracket: Replace exp(-i/|u|^3) - 1 by another function of u.
    :param threads: Worker threads for the grid method.
    :param span: Half-width of the integrated window around each point, in kernel
        standard deviations.
    :return: (values, flags, metadata)
    """
    if method not in METHODS:
        raise ParameterError(f"Unknown method: {method} (expected one of {', '.join(METHODS)})")
    if not loss_length > 0:
        raise ParameterError("loss_length must be positive")
    if not span > 0:
        raise ParameterError("span must be positive")
    z = np.asarray(z, dtype=float)
    flags: List[str] = []
    metadata: Dict[str, Any] = {"method": method if bracket is None else "bracket", "kernel_span": span}

    if bracket is not None:
        values = np.array([convolve_bracket(x, loss_length, bracket, span) for x in z])
        return values, flags, metadata

    if method == "adaptive":
        results = [lossy_amplitude_adaptive(x, loss_length, span) for x in z]
        values = np.array([r[0] for r in results])
        failed = sum(not r[1] for r in results)
        if failed:
            logger.warning("Adaptive quadrature did not converge at %d of %d points", failed, z.size)
            flags.append(f"quadrature-not-converged:{failed}")
        return values, flags, metadata

    step = grid_step if grid_step is not None else _grid_step(z)

    def one(x):
        return lossy_amplitude_grid(x, loss_length, step, tol, span)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, z))
    else:
        results = [one(x) for x in z]
    values = np.array([r[0] for r in results])
    failed = sum(not r[2] for r in results)
    if failed:
        logger.warning("Oscillation cut did not converge at %d of %d points", failed, z.size)
        flags.append(f"cut-not-converged:{failed}")
    metadata.update({
        "initial_cut": initial_cut(step),
        "smallest_cut": min(r[1] for r in results),
        "tolerance": tol,
    })
    logger.debug("Lossy profile: %d points, loss length %.4g r_c, smallest cut %.3g", z.size, loss_length, metadata["smallest_cut"])
    return values, flags, metadata


@dataclass(frozen=True)
class LossProfile:
    """
    Lossless I(z) and lossy I'(z) on one z grid (metres).

    :param loss_length: L/√α (m).
    """
    loss_length: float
    grid: np.ndarray
    lossless_I: np.ndarray
    lossy_I: np.ndarray
    flags: Tuple[str, ...] = ()
    metadata: Dict[str, Any] = field(default_factory=dict)

    def _series(self, values: np.ndarray, kind: str) -> CorrelationSeries:
        return CorrelationSeries(
            grid=self.grid,
            values=values,
            grid_kind="z",
            normalization="input-intensity-normalized" if kind == "g2" else "raw",
            units="si",
            metadata={**self.metadata, "loss_length": self.loss_length},
            flags=self.flags,
        )

    def lossless_series(self) -> CorrelationSeries:
        return self._series(self.lossless_I, "amplitude")

    def lossy_series(self) -> CorrelationSeries:
        return self._series(self.lossy_I, "amplitude")

    def lossless_g2_series(self) -> CorrelationSeries:
        return self._series(np.abs(self.lossless_I) ** 2, "g2")

    def lossy_g2_series(self) -> CorrelationSeries:
        return self._series(np.abs(self.lossy_I) ** 2, "g2")


def lossless_profile(z_grid: Sequence[float], T: float, c3: float) -> CorrelationSeries:
    """
    I(z) = i (exp(-i V(z) T) - 1) on a positive z grid (metres); |I|² = 2(1 - cos V(z)T).
    """
    z = z_array(z_grid)
    r_c = (c3 * T) ** (1.0 / 3.0)
    return CorrelationSeries(
        grid=z,
        values=lossless_amplitude(z / r_c),
        grid_kind="z",
        units="si",
        metadata={"r_c": r_c},
    )


def lossy_profile(
    z_grid: Sequence[float],
    T: float,
    c3: float,
    L: float,
    alpha: float,
    method: str = "grid",
    tol: float = DEFAULT_TOLERANCE,
    bracket: Optional[Bracket] = None,
    extent: Optional[float] = None,
    threads: int = 1,
    span: float = KERNEL_SPAN
) -> LossProfile:
    """
    Polariton-loss smoothed amplitude I'(z) next to the lossless I(z).

    I'(z) = i (√α / (2L√π)) ∫ dz' (exp(-iV(|z'|)T) - 1) exp(-α (z' - z)² / 4L²).

    :param z_grid: Strictly increasing positive points (m).
    :param T: Storage time (s).
    :param c3: Exchange coefficient (m^3/s).
    :param L: Medium length (m).
    :param alpha: Optical density.
    :param method: "grid" or "adaptive".
    :param tol: Convergence tolerance of the oscillation cut (grid method).
    :param bracket: Optional replacement bracket, a function of z'/r_c.
    :param extent: Medium extent along z (m); coverage windows end at ±extent.
    :param threads: Worker threads (grid method).
    :param span: Half-width of the integrated window, in kernel standard deviations.

    Points whose integrated window reaches less than 6 loss lengths to either side are
    flagged "kernel-truncated:<count>".
    """
    if not (L > 0 and alpha > 0):
        raise ParameterError("L and alpha must be positive")
    z = z_array(z_grid)
    r_c = (c3 * T) ** (1.0 / 3.0)
    loss_length = L / math.sqrt(alpha)
    values, flags, metadata = lossy_values(
        z / r_c, loss_length / r_c, method=method, tol=tol, bracket=bracket, threads=threads, span=span,
    )
    reach = span * math.sqrt(2.0) * loss_length
    lower, upper = z - reach, z + reach
    if extent is not None:
        lower, upper = np.maximum(lower, -extent), np.minimum(upper, extent)
    short = np.minimum(z - lower, upper - z) < COVERAGE_LOSS_LENGTHS * loss_length
    uncovered = int(np.count_nonzero(short))
    if uncovered:
        logger.warning("%d points have an integrated window under %g loss lengths on one side", uncovered, COVERAGE_LOSS_LENGTHS)
        flags.append(f"kernel-truncated:{uncovered}")
    metadata.update({"r_c": r_c, "route": "real-space"})
    return LossProfile(
        loss_length=loss_length,
        grid=z,
        lossless_I=lossless_amplitude(z / r_c),
        lossy_I=values,
        flags=tuple(flags),
        metadata=metadata,
    )


def lossy_g2(
    z_grid: Sequence[float],
    T: float,
    c3: float,
    L: float,
    alpha: float,
    **kwargs
) -> CorrelationSeries:
    """
    |I'(z)|², input-intensity-normalized, on any increasing grid; evaluated at |z|,
    so the result is even in z.
    """
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size == 0 or np.any(np.diff(z) <= 0):
        raise ParameterError("z_grid must be a non-empty strictly increasing sequence")
    if not (L > 0 and alpha > 0):
        raise ParameterError("L and alpha must be positive")
    r_c = (c3 * T) ** (1.0 / 3.0)
    magnitudes, inverse = np.unique(np.abs(z), return_inverse=True)
    values, flags, metadata = lossy_values(magnitudes / r_c, L / math.sqrt(alpha) / r_c, **kwargs)
    metadata.update({"r_c": r_c, "loss_length": L / math.sqrt(alpha)})
    return CorrelationSeries(
        grid=z,
        values=np.abs(values[inverse]) ** 2,
        grid_kind="z",
        normalization="input-intensity-normalized",
        units="si",
        metadata=metadata,
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class PolaritonAttenuation:
    """
    Loss bookkeeping of one polariton mode.

    factor = exp(-L²k²/2α) scales the amplitude, noise_amplitude = sqrt(1 - factor²)
    the admixed noise, gamma_pol = 2Γ(v_g0 k)²/Ω_c² is an intensity rate and
    tau_prop = L/(2 v_g0), so gamma_pol * tau_prop = L²k²/α.
    """
    k: float
    factor: float
    gamma_pol: float
    tau_prop: float
    noise_amplitude: float


def polariton_attenuation(k: float, params: PhysicalParams) -> PolaritonAttenuation:
    """Attenuation of the polariton mode with wavenumber k (1/m)."""
    d = derive_params(params)
    exponent = params.length_L ** 2 * k ** 2 / params.alpha
    return PolaritonAttenuation(
        k=k,
        factor=math.exp(-0.5 * exponent),
        gamma_pol=2.0 * params.gamma_e * (d.v_g0 * k) ** 2 / params.omega_c ** 2,
        tau_prop=params.length_L / (2.0 * d.v_g0),
        noise_amplitude=math.sqrt(-math.expm1(-exponent)),
    )
