"""
Derangement proportions of affine classical groups

Commands:
1. verify: partition-sum identities, series chains, classical q-series and bijection counts
2. delta: closed-form δ / δ_p of an affine family at concrete q
3. oracle: brute-force enumeration of small groups against the closed forms
4. partitions: list partitions under multiplicity and shape filters

Usage:
    python main.py verify --family sympl --max-m 10
    python main.py delta --family au --m 2 --q 2
    python main.py oracle --family ao-plus --m 1 --q 3
    python main.py partitions --n 9 --cute --parts 4

Exit codes: 0 every check equal, 2 some check unequal, 1 usage or runtime error.
"""
import argparse
import asyncio
import logging
import os
import sys
from pathlib import Path

import structlog
from dotenv import load_dotenv

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.combinatorics.partitions import render_partition
from src.services.report import EXIT_ERROR, EXIT_OK, OUTPUT_FORMATS
from src.services.verification_service import (
    CONSTRAINT_ALIASES, VerificationService, delta_values, list_partitions,
)
from src.utils.run_config import VERIFY_FAMILIES, RunConfig

LOG_FILE = "derangements.log"


def setup_logging(log_level: str = "INFO", log_format: str = "console"):
    """Configure logging: stderr plus a log file, both rendered by structlog"""
    renderer = structlog.processors.JSONRenderer() if log_format == "json" else structlog.dev.ConsoleRenderer(colors=False)
    formatter = structlog.stdlib.ProcessorFormatter(
        processor=renderer,
        foreign_pre_chain=[
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
        ],
    )
    handlers = [logging.StreamHandler(), logging.FileHandler(LOG_FILE)]
    for handler in handlers:
        handler.setFormatter(formatter)
    logging.basicConfig(level=getattr(logging, log_level), handlers=handlers, force=True)


def add_run_options(parser: argparse.ArgumentParser, default) -> None:
    """Report and execution flags, accepted before or after the command"""
    parser.add_argument("--workers", type=int, default=default,
                        help="Worker processes (overrides DERANGE_WORKERS)")
    parser.add_argument("--output", type=str, default=default,
                        help="Report file (default: <output_dir>/<command>_<family>_<time>)")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default=default,
                        help="Report format")
    parser.add_argument("--timings", action="store_true", default=default,
                        help="Record elapsed_ms per record (reports stop being byte-identical)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact derangement proportions of affine classical groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Symplectic partition-sum identity for m = 1..10
  python main.py verify --family sympl --max-m 10

  # Cute partition generating function, 12 parts, up to x^40
  python main.py verify --family cute-genfun --max-n 40 --max-parts 12

  # Closed-form proportion at q = 2, printed exactly and to 6 digits
  python main.py delta --family au --m 2 --q 2

  # Brute force over O+_2(3) against the closed form, CSV report
  python main.py oracle --family ao-plus --m 1 --q 3 --format csv --output ao.csv
        """
    )
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: INFO)"
    )
    add_run_options(parser, default=None)
    # the same flags after the command; SUPPRESS keeps a value given before it
    run_options = argparse.ArgumentParser(add_help=False)
    add_run_options(run_options, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Check identities exactly", parents=[run_options])
    verify.add_argument("--family", required=True, choices=VERIFY_FAMILIES)
    verify.add_argument("--max-m", type=int, help="Identity families: m = 1..max_m")
    verify.add_argument("--max-n", type=int, help="cute-genfun: coefficient bound")
    verify.add_argument("--max-parts", type=int, help="cute-genfun: part counts 1..max_parts")
    verify.add_argument("--max-a", type=int, help="bijection: a = 0..max_a")
    verify.add_argument("--order", dest="series_order", type=int, help="Chain truncation order")
    verify.add_argument("--degree-bound", type=int, help="Series degree bound for the identity families")

    for name, help_text in (("delta", "Closed-form derangement proportion"),
                            ("oracle", "Brute-force enumeration against the closed form")):
        cmd = sub.add_parser(name, help=help_text, parents=[run_options])
        cmd.add_argument("--family", required=True,
                         help="agl, au, asp, ao-odd, ao-plus or ao-minus")
        cmd.add_argument("--m", type=int, required=True)
        cmd.add_argument("--q", type=int, nargs="+", help="One or more prime powers")
        cmd.add_argument("--p-power", action="store_true", default=None,
                         help="Only elements whose linear part has p-power order")
        if name == "oracle":
            cmd.add_argument("--witt", choices=["1", "delta"], help="Witt type for ao-odd")
            cmd.add_argument("--budget", type=int, help="Largest |GL_n(q^e)| to enumerate")

    parts = sub.add_parser("partitions", help="List partitions", parents=[run_options])
    parts.add_argument("--n", type=int, required=True)
    parts.add_argument("--constraint", choices=sorted(CONSTRAINT_ALIASES))
    parts.add_argument("--parts", type=int, help="Exact number of parts")
    parts.add_argument("--cute", action="store_true", default=None)
    parts.add_argument("--fixed-point", action="store_true", default=None)
    return parser


def cmd_verify(service: VerificationService) -> int:
    report = asyncio.run(service.run_verify())
    return finish(service, report)


def cmd_oracle(service: VerificationService) -> int:
    report = asyncio.run(service.run_oracle())
    return finish(service, report)


def finish(service: VerificationService, report) -> int:
    logger = logging.getLogger(__name__)
    saved = asyncio.run(service.save_report(report))
    print(report.to_pretty())
    if not saved["success"]:
        return EXIT_ERROR
    logger.info(f"Report written to {saved['path']}")
    return report.exit_code()


def cmd_delta(config: RunConfig) -> int:
    for row in delta_values(config):
        print(f"{row['family']}_{row['dimension']}({row['q']}): {row['text']}")
    return EXIT_OK


def cmd_partitions(config: RunConfig) -> int:
    count = 0
    for lam in list_partitions(config.n, config.constraint, config.parts, config.cute, config.fixed_point):
        print(render_partition(lam))
        count += 1
    print(f"count {count}")
    return EXIT_OK


def main(argv=None) -> int:
    """Main entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; 2 is reserved for unequal checks
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    load_dotenv(Path(__file__).parent / "config" / ".env")
    setup_logging(args.log_level, os.getenv("DERANGE_LOG_FORMAT", "console"))
    logger = logging.getLogger(__name__)

    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "log_level")}
    try:
        config = RunConfig.from_sources(args.command, env=os.environ, overrides=overrides)
    except (OSError, ValueError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_ERROR
    if config.log_format != os.getenv("DERANGE_LOG_FORMAT", "console"):
        setup_logging(args.log_level, config.log_format)

    try:
        if config.command == "verify":
            return cmd_verify(VerificationService(config))
        if config.command == "oracle":
            return cmd_oracle(VerificationService(config))
        if config.command == "delta":
            return cmd_delta(config)
        return cmd_partitions(config)
    except Exception as e:
        logger.error(f"{config.command} failed: {e}", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
