# --- scenarios/oracle_compare.py ---
from __future__ import annotations
import logging
from itertools import combinations

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.engine.atomic import g2_at_matrix, s_population_sums
from src.rydberg_ramsey.ensemble.cloud import AtomCloud
from src.rydberg_ramsey.ensemble.params import PhysicalParams
from src.rydberg_ramsey.oracle.protocol import run_protocol
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig, ScenarioResult, ScenarioTable

logger = logging.getLogger(__name__)

DEFAULT_ATOMS = 6
DEFAULT_EPSILON = 0.05
# Nearest-neighbour gaps in r_c; keeps every pair phase away from whole periods.
GAP_RANGE = (0.7, 1.5)


def random_line(atoms: int, seed: int) -> AtomCloud:
    rng = np.random.default_rng(seed)
    return AtomCloud.from_positions(np.cumsum(rng.uniform(*GAP_RANGE, atoms)))


def relative_deviation(cloud: AtomCloud, epsilon: float, max_atoms: int) -> tuple:
    """Exact and pair-engine G_at^(2) with their relative deviation over pairs j < k, plus the exact correlators."""
    exact = run_protocol(epsilon, cloud, 1.0, max_atoms=max_atoms).correlators()
    approx = g2_at_matrix(cloud, epsilon, 1.0)
    rows, cols = np.triu_indices(len(cloud), k=1)
    return exact.g2[rows, cols], approx[rows, cols], np.abs(exact.g2 - approx)[rows, cols] / approx[rows, cols], exact


class OracleCompareScenario(BaseScenario):
    """Exact many-body G_at^(2) against the pair engine on a random line of atoms, protocol units."""
    name = "oracle-compare"
    stochastic = True

    def physical_params(self, request: ScenarioConfig) -> PhysicalParams:
        # --epsilon is a kernel input here, not a change of the probe field
        return request.params

    def run(self, request: ScenarioConfig) -> ScenarioResult:
        atoms = request.atoms or DEFAULT_ATOMS
        if atoms < 2:
            raise ParameterError("oracle-compare needs at least two atoms")
        epsilon = request.epsilon if request.epsilon is not None else DEFAULT_EPSILON
        max_atoms = self.simulator.config.max_oracle_atoms
        cloud = random_line(atoms, request.seed)

        exact, approx, deviation, correlators = relative_deviation(cloud, epsilon, max_atoms)
        _, _, halved, _ = relative_deviation(cloud, 0.5 * epsilon, max_atoms)
        populations = s_population_sums(cloud, epsilon, 1.0)
        scaling = float(np.median(deviation) / np.median(halved)) if np.median(halved) > 0 else None
        summary = {
            "atoms": atoms,
            "epsilon": epsilon,
            "max_relative_deviation": float(deviation.max()),
            "median_relative_deviation": float(np.median(deviation)),
            "median_ratio_at_half_epsilon": scaling,
            "max_s_population_deviation": float(np.max(np.abs(correlators.s_population - populations))),
        }
        logger.info("oracle-compare: N=%d, eps=%g, max relative deviation %.3e", atoms, epsilon, summary["max_relative_deviation"])

        pairs = list(combinations(range(atoms), 2))
        z = cloud.z
        table = ScenarioTable(
            columns=dict(self._columns(
                j=[j for j, _ in pairs],
                k=[k for _, k in pairs],
                distance=[abs(z[k] - z[j]) for j, k in pairs],
                exact=exact,
                pair_engine=approx,
                relative_deviation=deviation,
            )),
            metadata={"units": "protocol", "epsilon": epsilon, "atoms": atoms},
        )
        return ScenarioResult(tables={"oracle_compare": table}, summary=summary)
