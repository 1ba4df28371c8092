# --- scenarios/spectrum.py ---
from __future__ import annotations
import logging

import numpy as np

from src.rydberg_ramsey.engine.light import g1_light
from src.rydberg_ramsey.engine.spectrum import spectrum
from src.rydberg_ramsey.ensemble.params import derive_params
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig, ScenarioResult, ScenarioTable

logger = logging.getLogger(__name__)

# Lag step in units of r_c / v_g0.
LAG_STEP = 0.01


class SpectrumScenario(BaseScenario):
    """Continuum G^(1)(τ) of the retrieved light and its spectrum S(ω)."""
    name = "spectrum"
    default_points = 15001

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        p = request.effective_params
        d = derive_params(p)
        tau = np.arange(self._points(request)) * LAG_STEP * d.r_c / d.v_g0
        g1 = g1_light(p, tau)
        s = spectrum(g1)
        width = s.fwhm()
        scale = d.v_g0 / d.r_c
        summary = {
            "fwhm_rad_per_s": width,
            "fwhm_over_vg0_per_rc": width / scale,
            "flags": self._merge_flags(g1, s),
        }
        logger.info("spectrum: FWHM %.4g rad/s (%.3g v_g0/r_c)", width, width / scale)
        return ScenarioResult(
            tables={
                "g1": ScenarioTable.from_series(g1),
                "spectrum": ScenarioTable.from_series(s),
            },
            summary=summary,
        )
