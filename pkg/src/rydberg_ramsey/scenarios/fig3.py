# --- scenarios/fig3.py ---
from __future__ import annotations
import logging
import math

import numpy as np

from src.rydberg_ramsey.loss.profiles import lossy_profile
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig, ScenarioResult, ScenarioTable

logger = logging.getLogger(__name__)

DEFAULT_LOSS_LENGTH = 0.5
Z_RANGE = (0.05, 3.0)


class Fig3Scenario(BaseScenario):
    """
    Lossless |I(z)|² and lossy |I'(z)|² on a z grid in units of r_c.

    Runs in protocol units (T = C3 = 1, α = 1, L = loss length), so only the
    loss length enters.
    """
    name = "fig3"
    default_points = 2000

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        loss_length = request.loss_length or DEFAULT_LOSS_LENGTH
        z = np.linspace(*Z_RANGE, self._points(request))
        profile = lossy_profile(z, 1.0, 1.0, loss_length, 1.0, threads=request.threads)
        lossless = profile.lossless_g2_series()
        lossy = profile.lossy_g2_series()

        peak = int(np.argmin(np.abs(z - math.pi ** (-1.0 / 3.0))))
        summary = {
            "loss_length_rc": loss_length,
            "lossless_at_first_peak": float(lossless.values[peak]),
            "lossy_max": float(lossy.values.max()),
            "lossy_argmax_rc": float(z[np.argmax(lossy.values)]),
            "flags": list(profile.flags),
        }
        logger.info("fig3: loss length %.3g r_c, lossy maximum %.4f", loss_length, summary["lossy_max"])
        table = ScenarioTable(
            columns=dict(self._columns(z=z, lossless=lossless.values, lossy=lossy.values)),
            metadata={
                "grid_kind": "z",
                "normalization": lossy.normalization,
                "units": "protocol",
                "flags": list(profile.flags),
                "loss_length_rc": loss_length,
                "initial_cut": profile.metadata.get("initial_cut"),
                "tolerance": profile.metadata.get("tolerance"),
            },
        )
        return ScenarioResult(tables={"fig3": table}, summary=summary)
