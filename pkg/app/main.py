import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from app.cli.commands import check, sweep, traj
from app.cli.parser import build_parser, build_run_config, log_level_from
from app.core.config import settings
from app.core.exceptions import KDError, NumericalError
from app.models.run import Command, RunConfig
from app.utils.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

HANDLERS: Dict[Command, Callable[[RunConfig], int]] = {
	Command.TRAJ: traj.handle,
	Command.SWEEP: sweep.handle,
	Command.CHECK: check.handle,
}


def _describe(e: ValidationError) -> str:
	parts = []
	for err in e.errors():
		where = ".".join(str(x) for x in err.get("loc", ()))
		parts.append(f"{where}: {err['msg']}" if where else err["msg"])
	return "; ".join(parts)


def main(argv: Optional[List[str]] = None) -> int:
	args = build_parser().parse_args(argv)
	setup_logging(log_level_from(args))
	logger.info(f"{settings.PLATFORM_NAME} {settings.PLATFORM_VERSION}: {args.command}")

	try:
		cfg = build_run_config(args)
		return HANDLERS[cfg.command](cfg)
	except ValidationError as e:
		logger.error(f"invalid parameters: {_describe(e)}")
		return EXIT_USAGE
	except NumericalError as e:
		logger.error(f"numerical failure: {e}")
		return EXIT_NUMERICAL
	except (KDError, ValueError) as e:
		logger.error(f"invalid parameters: {e}")
		return EXIT_USAGE
	except OSError as e:
		logger.error(f"I/O failure: {e}")
		return EXIT_IO


def run() -> None:
	sys.exit(main())


if __name__ == "__main__":
	run()
