# --- validity/regime.py ---
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.rydberg_ramsey.core.config import DEFAULT_BOUNDARY_TOLERANCE, DEFAULT_REGIME_THRESHOLD, Config
from src.rydberg_ramsey.core.exceptions import ParameterError, RegimeError
from src.rydberg_ramsey.ensemble.params import PhysicalParams, derive_params, rddi_potential
from src.rydberg_ramsey.validity.norm import norm_defect_estimate

logger = logging.getLogger(__name__)

# Blockade-scale distance below which pairs are not probed, used for the Ω_rf
# check when neither the caller nor the parameters name one.
DEFAULT_RF_DISTANCE = 13e-6

HARD_CHECKS = ("pair_density", "rc_below_rry", "storage_time", "rf", "norm_defect")
SOFT_CHECKS = ("tau_loss",)


@dataclass(frozen=True)
class RegimeReport:
    """
    Regime conditions of one parameter set, with numeric margins.

    Every entry of `verdicts` is True iff its inequality holds:
      pair_density   n_Ry r_c³ <= threshold
      rc_below_rry   r_c / r_Ry <= 1
      storage_time   T / T_max <= 1
      rf             Ω_rf / V(r_rf) > 1
      norm_defect    both norm-defect terms <= threshold
      tau_loss       τ >= (1 - tolerance) loss_delay for every requested τ (soft)
    """
    n_ry_rc3: float
    rc_over_rry: float
    t_over_tmax: float
    rf_margin: float
    rf_distance: float
    loss_delay: float
    tau_grid: Tuple[float, ...]
    tau_loss_ok: Tuple[bool, ...]
    norm_defect_terms: Tuple[float, float]
    threshold: float
    tolerance: float
    verdicts: Dict[str, bool] = field(default_factory=dict)

    @property
    def hard_failures(self) -> List[str]:
        return [name for name in HARD_CHECKS if not self.verdicts[name]]

    @property
    def soft_failures(self) -> List[str]:
        return [name for name in SOFT_CHECKS if not self.verdicts[name]]

    @property
    def passed(self) -> bool:
        return not self.hard_failures

    def raise_for_failures(self) -> None:
        """
        :raises RegimeError: If any hard condition fails.
        """
        if self.hard_failures:
            raise RegimeError(f"Regime check failed: {', '.join(self.hard_failures)}")

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form; infinities become None."""
        def clean(x):
            return float(x) if np.isfinite(x) else None
        return {
            "n_ry_rc3": clean(self.n_ry_rc3),
            "rc_over_rry": clean(self.rc_over_rry),
            "t_over_tmax": clean(self.t_over_tmax),
            "rf_margin": clean(self.rf_margin),
            "rf_distance": self.rf_distance,
            "loss_delay": self.loss_delay,
            "tau_grid": list(self.tau_grid),
            "tau_loss_ok": list(self.tau_loss_ok),
            "norm_defect_terms": [clean(x) for x in self.norm_defect_terms],
            "threshold": self.threshold,
            "tolerance": self.tolerance,
            "verdicts": dict(self.verdicts),
            "passed": self.passed,
        }


def regime_check(
    params: PhysicalParams,
    tau_grid: Sequence[float] = (),
    min_distance: Optional[float] = None,
    config: Optional[Config] = None
) -> RegimeReport:
    """
    Evaluate every applicability condition of the pair treatment.

    :param params: Physical parameters.
    :param tau_grid: Delays (s) at which the retrieved light will be read.
    :param min_distance: Distance (m) for the Ω_rf > V(r) check; falls back to
        params.min_pair_distance, then DEFAULT_RF_DISTANCE.
    :param config: Supplies the threshold and the delay tolerance.
    :return: RegimeReport. Never raises on a failed condition.
    """
    threshold = config.regime_threshold if config is not None else DEFAULT_REGIME_THRESHOLD
    tolerance = config.boundary_tolerance if config is not None else DEFAULT_BOUNDARY_TOLERANCE
    tau = np.asarray(tau_grid, dtype=float).ravel()
    if np.any(~np.isfinite(tau)) or np.any(tau < 0):
        raise ParameterError("tau_grid must hold finite non-negative delays")

    d = derive_params(params)
    n_ry_rc3 = d.n_ry * d.r_c ** 3
    rc_over_rry = d.r_c / d.r_ry
    t_over_tmax = params.storage_T / d.t_max
    r_rf = min_distance or params.min_pair_distance or DEFAULT_RF_DISTANCE
    rf_margin = params.omega_rf / rddi_potential(r_rf, params.c3)
    terms = norm_defect_estimate(params)
    tau_ok = tuple(bool(t >= (1.0 - tolerance) * d.loss_delay) for t in tau)

    verdicts = {
        "pair_density": n_ry_rc3 <= threshold,
        "rc_below_rry": rc_over_rry <= 1.0,
        "storage_time": t_over_tmax <= 1.0,
        "rf": rf_margin > 1.0,
        "norm_defect": max(terms) <= threshold,
        "tau_loss": all(tau_ok),
    }
    report = RegimeReport(
        n_ry_rc3=n_ry_rc3,
        rc_over_rry=rc_over_rry,
        t_over_tmax=t_over_tmax,
        rf_margin=rf_margin,
        rf_distance=r_rf,
        loss_delay=d.loss_delay,
        tau_grid=tuple(float(t) for t in tau),
        tau_loss_ok=tau_ok,
        norm_defect_terms=terms,
        threshold=threshold,
        tolerance=tolerance,
        verdicts={name: bool(ok) for name, ok in verdicts.items()},
    )
    for name in report.hard_failures:
        logger.warning("Regime condition %s fails", name)
    if report.soft_failures:
        logger.warning("%d of %d delays lie below the loss delay %.3g s", tau_ok.count(False), len(tau_ok), d.loss_delay)
    logger.debug("Regime check: n_Ry r_c^3 = %.3g, r_c/r_Ry = %.3g, rf margin = %.3g", n_ry_rc3, rc_over_rry, rf_margin)
    return report
