# --- client/simulator.py ---
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from src.rydberg_ramsey import __version__
from src.rydberg_ramsey.core.config import Config
from src.rydberg_ramsey.core.exceptions import ConfigError
from src.rydberg_ramsey.ensemble.params import derive_params
from src.rydberg_ramsey.output.base_writer import BaseWriter
from src.rydberg_ramsey.output.csv_writer import CsvWriter
from src.rydberg_ramsey.output.hashing import content_hash, file_sha256
from src.rydberg_ramsey.scenarios.base_scenario import BaseScenario, ScenarioConfig
from src.rydberg_ramsey.validity.regime import RegimeReport, regime_check

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SEED_POLICY = "numpy.random.default_rng(seed), one generator per run"


@dataclass
class RunOutcome:
    """What one scenario run produced: the manifest as written and the files behind it."""
    manifest: Dict[str, Any]
    paths: List[Path] = field(default_factory=list)
    regime: Optional[RegimeReport] = None

    @property
    def summary(self) -> Dict[str, Any]:
        return self.manifest.get("summary", {})


class Simulator:
    def __init__(
        self,
        config: Optional[Config] = None,
        writer_factory: Optional[Callable[[Union[str, Path]], BaseWriter]] = None
    ) -> None:
        """
        Scenario runner for the storage, Ramsey and retrieval protocol.

        Owns the configuration, gates every run on the regime check and writes
        the data tables and manifest through a writer.

        :param config: Optional Config instance. If None, will auto-load from environment.
        :param writer_factory: Callable building a BaseWriter for a run directory; CsvWriter by default.
        """
        self.config = config or Config()
        self.writer_factory = writer_factory or CsvWriter

        self._derive = None
        self._g2 = None
        self._fig3 = None
        self._spectrum = None
        self._oracle_compare = None
        self._validity = None

    def scenario(self, name: str) -> BaseScenario:
        """
        Return the scenario registered under `name`.

        :raises ConfigError: If no scenario has that name.
        """
        attribute = name.replace("-", "_")
        if attribute not in ("derive", "g2", "fig3", "spectrum", "oracle_compare", "validity"):
            raise ConfigError(f"Unknown scenario: {name}")
        return getattr(self, attribute)

    def run(self, request: ScenarioConfig) -> RunOutcome:
        """
        Execute one scenario and write its outputs.

        :param request: Fully resolved run request.
        :return: RunOutcome with the written manifest and file paths.
        :raises ConfigError: If a stochastic scenario has no seed.
        :raises RegimeError: If a hard regime condition fails and request.force is off.
        """
        scenario = self.scenario(request.scenario)
        if scenario.stochastic and request.seed is None:
            raise ConfigError(f"Scenario {request.scenario} is stochastic and needs --seed")

        params = scenario.physical_params(request)
        derived = derive_params(params)
        report = regime_check(params, scenario.delays(request), config=self.config)
        if report.soft_failures:
            short = sum(1 for ok in report.tau_loss_ok if not ok)
            logger.warning("%d delays lie below the loss delay %.4g s", short, report.loss_delay)
        if report.hard_failures:
            if not request.force:
                report.raise_for_failures()
            logger.warning("Regime check failed (%s); continuing because of --force", ", ".join(report.hard_failures))

        logger.info("Running scenario %s", request.scenario)
        result = scenario.run(request)

        out_dir = Path(request.out_dir) if request.out_dir else Path(self.config.output_dir) / request.scenario
        writer = self.writer_factory(out_dir)
        header = {
            "scenario": request.scenario,
            "parameters": params.to_dict(),
            "derived": derived.to_dict(),
            "regime": report.to_dict(),
            "seed": request.seed,
        }
        paths = []
        outputs = {}
        for name, table in result.tables.items():
            path = Path(writer.write_table(name, table.columns, {**table.metadata, **header, "table": name}))
            paths.append(path)
            outputs[path.name] = file_sha256(path)

        manifest = {
            "schema_version": SCHEMA_VERSION,
            "command": request.scenario,
            "tool_version": __version__,
            "seed": request.seed,
            "seed_policy": SEED_POLICY if scenario.stochastic else "deterministic",
            "parameters": params.to_dict(),
            "derived": derived.to_dict(),
            "regime": report.to_dict(),
            "forced": bool(request.force and report.hard_failures),
            "input_hash": content_hash(request.to_dict()),
            "outputs": outputs,
            "summary": result.summary,
        }
        paths.append(Path(writer.write_manifest(manifest)))
        return RunOutcome(manifest=manifest, paths=paths, regime=report)

    # Scenarios are built on first access and cached; imports stay inside the
    # properties so the scenario modules can type against Simulator.

    @property
    def derive(self):
        if self._derive is None:
            from src.rydberg_ramsey.scenarios.derive import DeriveScenario
            self._derive = DeriveScenario(self)
        return self._derive

    @property
    def g2(self):
        if self._g2 is None:
            from src.rydberg_ramsey.scenarios.g2 import G2Scenario
            self._g2 = G2Scenario(self)
        return self._g2

    @property
    def fig3(self):
        if self._fig3 is None:
            from src.rydberg_ramsey.scenarios.fig3 import Fig3Scenario
            self._fig3 = Fig3Scenario(self)
        return self._fig3

    @property
    def spectrum(self):
        if self._spectrum is None:
            from src.rydberg_ramsey.scenarios.spectrum import SpectrumScenario
            self._spectrum = SpectrumScenario(self)
        return self._spectrum

    @property
    def oracle_compare(self):
        """
        Lazy-load and return the exact-oracle comparison.

        :return: Scenario comparing the many-body oracle with the pair engine.
        """
        if self._oracle_compare is None:
            from src.rydberg_ramsey.scenarios.oracle_compare import OracleCompareScenario
            self._oracle_compare = OracleCompareScenario(self)
        return self._oracle_compare

    @property
    def validity(self):
        if self._validity is None:
            from src.rydberg_ramsey.scenarios.validity import ValidityScenario
            self._validity = ValidityScenario(self)
        return self._validity
