# --- scenarios/validity.py ---
from __future__ import annotations
import logging
import math

import numpy as np

from src.rydberg_ramsey.ensemble.params import derive_params
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig, ScenarioResult, ScenarioTable
from src.rydberg_ramsey.validity.integrals import sine_volume_integral, volume_integral_check
from src.rydberg_ramsey.validity.norm import norm_defect_estimate

logger = logging.getLogger(__name__)

# C3 T values, protocol units, for the volume-integral sweep.
VOLUME_SWEEP = tuple(10.0 ** k for k in range(-3, 4))


class ValidityScenario(BaseScenario):
    """Applicability diagnostics: volume-integral sweep, norm-defect estimates and the cut-off sine integral."""
    name = "validity"

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        p = request.effective_params
        d = derive_params(p)
        checks = [volume_integral_check(c3t, 1.0) for c3t in VOLUME_SWEEP]
        volume = p.geometry.volume
        cutoff = (3.0 * volume / (4.0 * math.pi)) ** (1.0 / 3.0)
        summary = {
            "volume_integral_max_error": max(abs(c.ratio - 1.0) for c in checks),
            "volume_integral_converged": all(c.converged for c in checks),
            "norm_defect_terms": list(norm_defect_estimate(p, volume)),
            "norm_defect_integrated": list(norm_defect_estimate(p, volume, integrated=True)),
            "sine_integral_rc3": sine_volume_integral(p.storage_T, p.c3, cutoff) / d.r_c ** 3,
            "sine_integral_cutoff_m": cutoff,
        }
        logger.info("validity: volume-integral error %.2e", summary["volume_integral_max_error"])
        table = ScenarioTable(
            columns=dict(self._columns(
                c3t=VOLUME_SWEEP,
                integral=[c.integral for c in checks],
                analytic=[c.analytic for c in checks],
                ratio=[c.ratio for c in checks],
                converged=[float(c.converged) for c in checks],
            )),
            metadata={"units": "protocol"},
        )
        return ScenarioResult(tables={"volume_integral": table}, summary=summary)
