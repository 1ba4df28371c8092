# --- cli.py ---
from __future__ import annotations
import argparse
import json
import logging
import sys
from typing import Any, Optional, Sequence

from src.rydberg_ramsey import __version__
from src.rydberg_ramsey.client.simulator import Simulator
from src.rydberg_ramsey.core.config import Config
from src.rydberg_ramsey.core.exceptions import CapacityError, ConfigError, ParameterError, RegimeError
from src.rydberg_ramsey.core.log import configure_logging
from src.rydberg_ramsey.ensemble.presets import get_preset, load_params_file
from src.rydberg_ramsey.output.hashing import to_jsonable
from src.rydberg_ramsey.scenarios.base_scenario import SCENARIOS, ScenarioConfig

logger = logging.getLogger(__name__)

DEFAULT_PRESET = "rb87-sec5"
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3

_HELP = {
    "derive": "Print group velocity, blockade-like radius and loss scales of a parameter set.",
    "g2": "Monte Carlo and continuum G2(tau) of the retrieved light.",
    "fig3": "Lossless and lossy |I(z)|^2 for a given loss length.",
    "spectrum": "Continuum G1(tau) and the retrieved-light spectrum.",
    "oracle-compare": "Exact many-body G_at^(2) against the pair engine.",
    "validity": "Volume-integral sweep and regime diagnostics.",
}


def _emit_json(payload: Any) -> None:
    print(json.dumps(to_jsonable(payload), indent=2, sort_keys=True))


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", default=DEFAULT_PRESET, help="Built-in or file preset name.")
    common.add_argument("--config", default=None, metavar="JSON", help="Parameter file; replaces --preset.")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, metavar="DIR", help="Run directory (default: $RYDBERG_OUTPUT_DIR/<scenario>).")
    common.add_argument("--force", action="store_true", help="Run even when a hard regime condition fails.")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--atoms", type=int, default=None)
    common.add_argument("--epsilon", type=float, default=None, help="Override of Omega_p0 / Omega_c.")
    common.add_argument("--loss-length", type=float, default=None, metavar="L_OVER_RC")
    common.add_argument("--points", type=int, default=None)
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydberg-ramsey",
        description="Storage, Ramsey interferometry and retrieval of slow light in a Rydberg-dressed gas.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    for name in SCENARIOS:
        subparsers.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def _request(args: argparse.Namespace, config: Config) -> ScenarioConfig:
    if args.config:
        params, preset = load_params_file(args.config), None
    else:
        params, preset = get_preset(args.preset, config), args.preset
    return ScenarioConfig(
        scenario=args.command,
        params=params,
        preset=preset,
        seed=args.seed,
        out_dir=args.out,
        force=args.force,
        threads=args.threads if args.threads is not None else config.threads,
        atoms=args.atoms,
        epsilon=args.epsilon,
        loss_length=args.loss_length,
        points=args.points,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = Config(log_level=args.log_level)
    except ConfigError as exc:
        print(f"rydberg-ramsey: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    configure_logging(config.log_level)
    try:
        outcome = Simulator(config).run(_request(args, config))
    except RegimeError as exc:
        logger.error("%s (use --force to run anyway)", exc)
        return EXIT_REGIME
    except (ConfigError, ParameterError, CapacityError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    _emit_json(outcome.summary)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
