"""VortexLab - command-line driver for renormalized energies of circle-valued maps."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from app.controllers import (
    CommandContext,
    CommandRouter,
    bounds_router,
    disk_router,
    minimize_router,
    selftest_router,
    torus_router,
)
from app.core.config import settings
from app.core.exceptions import NumericalContractException, ValidationException
from app.repositories import ConfigRepository, ReportRepository, TableRepository
from app.schemas.problem import GridSpec, ProblemConfig, parse_config
from app.schemas.report import build_envelope, emit_report

logger = logging.getLogger('vortexlab_cli')

router = CommandRouter()
router.include_router(disk_router)
router.include_router(bounds_router)
router.include_router(minimize_router)
router.include_router(torus_router)
router.include_router(selftest_router)

COMMANDS = [
    "decompose", "energy", "lift", "detect", "bound-check", "level-flux",
    "extend", "minimize", "sweep-stability", "torus-energy", "selftest",
]


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are validation errors (exit 1), not argparse's exit 2."""

    def error(self, message: str):
        raise ValidationException(f"usage: {message}")


def parse_resolution(text: str) -> Tuple[int, int]:
    """'128x256' -> (128, 256)"""
    try:
        radial, angular = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must look like NrxNtheta, got {text!r}")
    return radial, angular


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog=settings.TOOL_NAME,
        description="Renormalized Dirichlet energy, Hodge decomposition and vortex estimates for circle-valued maps",
    )
    parser.add_argument("command", choices=COMMANDS, help="Command to run")
    parser.add_argument("--config", type=Path, help="JSON problem configuration")
    parser.add_argument("--out", type=Path, help="Report path; tables go next to it (default: report on stdout)")
    parser.add_argument("--threads", type=int, default=settings.DEFAULT_THREADS,
                        help="Worker threads (default: available cores)")
    parser.add_argument("--seed", type=int, help="Override the config seed")
    parser.add_argument("--resolution", type=parse_resolution, help="Grid resolution NrxNtheta, e.g. 128x256")
    parser.add_argument("--preset", type=str, help="Named map, plane or torus preset")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def load_config(args: argparse.Namespace) -> ProblemConfig:
    """Config file (or an empty config) with --preset, --seed and --resolution applied."""
    if args.config is not None:
        config = ConfigRepository().load(args.config, args.preset)
    else:
        config = parse_config("", args.preset)
    update = {}
    if args.seed is not None:
        update["seed"] = args.seed
    if args.resolution is not None:
        update["grid"] = GridSpec(radial=args.resolution[0], angular=args.resolution[1])
    return config.model_copy(update=update) if update else config


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch and write the report; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except ValidationException as e:
        configure_logging(False)
        logger.error(f"[CLI] {e}")
        return settings.EXIT_VALIDATION
    configure_logging(args.verbose)

    try:
        if args.threads < 1:
            raise ValidationException(f"--threads must be positive, got {args.threads}")
        config = load_config(args)
        result = router.dispatch(args.command, CommandContext(config, args.threads))
        envelope = build_envelope(args.command, config.canonical_json(), result.results)

        if args.out is not None:
            ReportRepository().save(envelope, args.out)
            TableRepository().save_tables(result.tables, args.out)
        else:
            sys.stdout.write(emit_report(envelope))

        if result.violations:
            for violation in result.violations:
                logger.error(f"[CLI] {violation}")
            return settings.EXIT_NUMERICAL
        return settings.EXIT_SUCCESS
    except (ValidationException, ValidationError) as e:
        logger.error(f"[CLI] {type(e).__name__}: {e}")
        return settings.EXIT_VALIDATION
    except NumericalContractException as e:
        logger.error(f"[CLI] Numerical contract violated: {e}")
        return settings.EXIT_NUMERICAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
