from __future__ import annotations

import logging
import os
import sys
from typing import Mapping, Sequence, TextIO

from .commands import EXIT_USAGE, build_arg_parser, configure_logging, dispatch
from .config import load_settings


def run(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
    env: Mapping[str, str] | None = None,
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    env = dict(os.environ if env is None else env)
    logger = logging.getLogger(__name__)
    try:
        settings = load_settings(args.config, env, overrides={"log_level": args.log_level})
        configure_logging(settings.log_level)
        return dispatch(args, settings, stdout)
    except (ValueError, OSError) as exc:
        logger.debug("Command %s failed", args.verb, exc_info=True)
        print(f"lsys-model {args.verb}: error: {exc}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
