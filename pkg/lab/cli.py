"""
Command Line
Entry point for running scenarios, reading run directories back and the built-in lemma suite

    reulab run <config> [--force] [--seed N] [--threads K]
    reulab report <dir>
    reulab verify [--out DIR] [--force] [--seed N]

Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime abort or failed check.
"""

import argparse
import sys
from typing import List, Optional

import scipy.fft as sfft
from loguru import logger

from config.scenario import load_scenario
from config.settings import LabSettings, get_settings
from spectral.errors import ArtifactError, PicardDivergence, SolverAbort, ValidationFailure
from lab.pipelines import EXIT_ABORT, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, default_verify_spec, execute
from lab.reporting import report


class UsageError(Exception):
    """Bad command line"""


class LabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _threads(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"--threads must be >= 1, got {text}")
    return value


def build_parser() -> LabArgumentParser:
    parser = LabArgumentParser(prog="reulab", description="Rotating Euler spectral laboratory")
    parser.add_argument("--log-level", default=None, help="console log level (default from settings)")
    sub = parser.add_subparsers(dest="command", parser_class=LabArgumentParser)

    run_p = sub.add_parser("run", help="execute a scenario file")
    run_p.add_argument("config", help="scenario file")
    run_p.add_argument("--force", action="store_true", help="overwrite a non-empty output directory")
    run_p.add_argument("--seed", type=_seed, default=None, help="override data.seed")
    run_p.add_argument("--threads", type=_threads, default=None, help="FFT workers and sweep pool width")

    report_p = sub.add_parser("report", help="summarize a run directory and evaluate its checks")
    report_p.add_argument("dir", help="run directory")

    verify_p = sub.add_parser("verify", help="run the built-in lemma verifier suite")
    verify_p.add_argument("--out", default=None, help="output directory (default <output_root>/verify)")
    verify_p.add_argument("--force", action="store_true", help="overwrite a non-empty output directory")
    verify_p.add_argument("--seed", type=_seed, default=None, help="base seed of the two ensembles")
    verify_p.add_argument("--threads", type=_threads, default=None, help="FFT workers")
    return parser


def setup_logging(settings: LabSettings, level: Optional[str] = None) -> None:
    """Replace loguru's default sink with the configured stderr (and file) sinks"""
    level = (level or settings.logging.level).upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format=settings.logging.format)
    if settings.logging.file:
        logger.add(settings.logging.file, level=level, rotation="10 MB")


def _run(args: argparse.Namespace, settings: LabSettings, threads: int) -> int:
    spec = load_scenario(args.config, settings)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    result = execute(spec, force=args.force, threads=threads, settings=settings, progress=settings.runtime.progress)
    print(result.run_dir)
    return result.status


def _verify(args: argparse.Namespace, settings: LabSettings, threads: int) -> int:
    spec = default_verify_spec(settings, args.out)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    result = execute(spec, force=args.force, threads=threads, settings=settings, progress=settings.runtime.progress)
    summary = report(result.run_dir)
    print(summary.text(), end="")
    if result.status != EXIT_OK:
        return result.status
    return EXIT_OK if summary.passed else EXIT_ABORT


def _report(args: argparse.Namespace) -> int:
    summary = report(args.dir)
    print(summary.text(), end="")
    return EXIT_OK if summary.passed else EXIT_ABORT


def main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch the verb and map failures to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE

    settings = get_settings()
    setup_logging(settings, args.log_level)
    threads = getattr(args, "threads", None) or settings.runtime.threads

    try:
        with sfft.set_workers(threads):
            if args.command == "run":
                return _run(args, settings, threads)
            if args.command == "verify":
                return _verify(args, settings, threads)
            return _report(args)
    except (ValidationFailure, ArtifactError) as exc:
        logger.error(f"✗ {exc}")
        return EXIT_VALIDATION
    except OSError as exc:
        logger.error(f"✗ {exc}")
        return EXIT_VALIDATION
    except (SolverAbort, PicardDivergence) as exc:
        logger.error(f"✗ {exc}")
        return EXIT_ABORT
