# --- scenarios/derive.py ---
from __future__ import annotations
import logging

from src.rydberg_ramsey.ensemble.params import derive_params, rddi_potential
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig, ScenarioResult, ScenarioTable

logger = logging.getLogger(__name__)


class DeriveScenario(BaseScenario):
    """Derived quantities of one parameter set, in SI and in the usual lab units."""
    name = "derive"

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        p = request.effective_params
        d = derive_params(p)
        v_rc = rddi_potential(d.r_c, p.c3)
        summary = {
            "v_g0_m_per_s": d.v_g0,
            "r_c_mm": d.r_c * 1e3,
            "V_rc_MHz": v_rc * 1e-6,
            "loss_length_mm": d.loss_length * 1e3,
            "loss_delay_us": d.loss_delay * 1e6,
            "n_ry_rc3": d.n_ry * d.r_c ** 3,
            "epsilon": d.epsilon,
        }
        logger.info("v_g0 = %.4g m/s, r_c = %.4g mm, loss delay = %.4g us", d.v_g0, d.r_c * 1e3, d.loss_delay * 1e6)
        columns = self._columns(**{name: [value] for name, value in d.to_dict().items()})
        return ScenarioResult(
            tables={"derived": ScenarioTable(columns=dict(columns), metadata={"units": "si"})},
            summary=summary,
        )
