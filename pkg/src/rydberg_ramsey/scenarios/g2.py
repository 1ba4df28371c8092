# --- scenarios/g2.py ---
from __future__ import annotations
import logging

import numpy as np

from src.rydberg_ramsey.engine.light import g2_light
from src.rydberg_ramsey.ensemble.cloud import sample_cloud
from src.rydberg_ramsey.ensemble.params import derive_params
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig, ScenarioResult, ScenarioTable

logger = logging.getLogger(__name__)

DEFAULT_ATOMS = 4000
# Separation range v_g0 τ / r_c of the delay grid.
SEPARATION_RANGE = (0.25, 4.0)


class G2Scenario(BaseScenario):
    """Monte Carlo G^(2)(τ) over a sampled cloud, next to the continuum law."""
    name = "g2"
    stochastic = True
    default_points = 120

    def delays(self, request: ScenarioConfig) -> np.ndarray:
        d = derive_params(request.effective_params)
        lo, hi = SEPARATION_RANGE
        return np.linspace(lo, hi, self._points(request)) * d.r_c / d.v_g0

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        config = self.simulator.config
        p = request.effective_params
        d = derive_params(p)
        tau = self.delays(request)
        cloud = sample_cloud(p, count=request.atoms or DEFAULT_ATOMS, seed=request.seed, max_atoms=config.max_cloud_atoms)
        sampled = g2_light(cloud, d.epsilon, p.storage_T, p.c3, d.v_g0, tau, max_pairs=config.max_pairs)
        continuum = g2_light(None, d.epsilon, p.storage_T, p.c3, d.v_g0, tau)

        gap = np.abs(sampled.values - continuum.values)
        summary = {
            "atoms": len(cloud),
            "delays": int(tau.size),
            "flags": self._merge_flags(sampled, continuum),
            "max_abs_difference": float(np.nanmax(gap)) if np.any(np.isfinite(gap)) else None,
        }
        logger.info("g2: %d atoms, %d delays, flags %s", len(cloud), tau.size, summary["flags"] or "none")
        table = ScenarioTable(
            columns=dict(self._columns(
                tau=tau,
                monte_carlo=sampled.values,
                continuum=continuum.values,
                pair_count=sampled.metadata["pair_counts"],
            )),
            metadata={
                "grid_kind": "tau",
                "normalization": sampled.normalization,
                "units": "si",
                "flags": summary["flags"],
                "declared_constant": sampled.metadata["declared_constant"],
                "band_half_width_rc": sampled.metadata["band_half_width_rc"],
                "n_r": sampled.metadata["n_r"],
                "atoms": len(cloud),
            },
        )
        return ScenarioResult(tables={"g2": table}, summary=summary)
