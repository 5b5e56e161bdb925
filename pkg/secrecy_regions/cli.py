"""
Command-line front end:

    secrecy-regions <command> --config <path> [--out <dir>] [--threads <k>]

Exit codes: 0 success, 2 configuration error, 3 guard violation,
4 numerical validation failure, 1 anything else. Failures print one JSON
error record on stderr.
"""

import argparse
import asyncio
import json
import logging
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .commands import CommandFailure, default_collection
from .config import RunConfig, parse_config, serialize_config
from .errors import ConfigError, SecrecyError
from .output import render_summary, write_artifacts

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    commands = default_collection().to_params()
    parser = argparse.ArgumentParser(
        prog="secrecy-regions",
        description="Secrecy rate regions with unreliable entanglement assistance.",
        epilog="commands:\n" + "\n".join(f"  {c['name']:<12} {c['description']}" for c in commands),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=[c["name"] for c in commands])
    parser.add_argument("--config", required=True, type=Path, help="key=value run configuration")
    parser.add_argument("--out", type=Path, default=Path("out"), help="artifact directory (default: out)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for independent jobs")
    parser.add_argument("--timeout", type=float, default=None, help="seconds allowed per batch of jobs")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level on stderr")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def error_record(
    kind: str, message: str, exit_code: int, details: Mapping[str, Any] | None = None
) -> str:
    record = {"error": kind, "message": message, "exit_code": exit_code, **(details or {})}
    return json.dumps(record, sort_keys=True)


def _fail(kind: str, message: str, exit_code: int, details: Mapping[str, Any] | None = None) -> int:
    sys.stderr.write(error_record(kind, message, exit_code, details) + "\n")
    return exit_code


def run(
    config: RunConfig,
    out_dir: str | Path,
    threads: int = 1,
    timeout: float | None = None,
) -> int:
    """Run the configured command and write its artifacts plus summary.json in one final phase."""
    try:
        result = asyncio.run(default_collection().run(config, threads=threads, timeout=timeout))
    except Exception as e:
        logger.debug("%s crashed", config.command, exc_info=True)
        return _fail(type(e).__name__, str(e) or repr(e), 1)
    if isinstance(result, CommandFailure):
        return _fail(result.system or "CommandFailure", result.error or "", result.exit_code, result.details)

    summary = {
        **(result.summary or {}),
        "command": config.command.value,
        "provenance": {
            "version": __version__,
            "config": serialize_config(config).splitlines(),
            "seed": config.seed,
        },
    }
    artifacts = {**(result.artifacts or {}), "summary.json": render_summary(summary)}
    try:
        write_artifacts(out_dir, artifacts)
    except OSError as e:
        return _fail("OSError", f"cannot write artifacts to {out_dir}: {e}", 1)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.threads < 1:
        return _fail("ConfigError", "--threads must be at least 1", ConfigError.exit_code)
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as e:
        return _fail("ConfigError", f"cannot read {args.config}: {e}", ConfigError.exit_code)
    try:
        config = parse_config(text, command=args.command)
    except SecrecyError as e:
        return _fail(type(e).__name__, e.message, e.exit_code, e.details())
    logger.info("running %s with %d threads", config.command, args.threads)
    return run(config, args.out, threads=args.threads, timeout=args.timeout)


if __name__ == "__main__":
    sys.exit(main())
