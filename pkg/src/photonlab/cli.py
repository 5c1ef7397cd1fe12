"""Command line front end: verification suite and scenario runner.

Exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
3 I/O error (unreadable config or unwritable output directory).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .config import ConfigError, default_verify_config, parse_config
from .scenarios import run_scenario
from .verify import run_verify, write_verify_report

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonlab",
        description="numerical workbench for single-photon field scenarios")
    parser.add_argument("--version", action="version",
                        version=f"photonlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser(
        "verify", help="run the full invariant verification suite")
    p_verify.add_argument("--config", metavar="PATH", default=None,
                          help="optional [verify] configuration file")

    p_run = sub.add_parser("run", help="run one scenario and write its CSVs")
    p_run.add_argument("--config", metavar="PATH", required=True,
                       help="scenario configuration file")
    return parser


def _read_config_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _prepare_output(outdir: str) -> None:
    """Fail fast on an unwritable output directory, before any computation."""
    os.makedirs(outdir, exist_ok=True)
    probe = os.path.join(outdir, ".photonlab-write-probe")
    with open(probe, "w", encoding="utf-8"):
        pass
    os.remove(probe)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        if args.config is None:
            cfg = default_verify_config()
        else:
            cfg = _read_config_file(args.config)
    except ConfigError as exc:
        print(f"photonlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except OSError as exc:
        print(f"photonlab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR

    if args.command == "verify" and cfg.kind != "verify":
        print(f"photonlab: config selects scenario '{cfg.kind}'; "
              "use `photonlab run --config ...`", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if args.command == "run" and cfg.kind == "verify":
        print("photonlab: config selects the verification suite; "
              "use `photonlab verify --config ...`", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        _prepare_output(cfg.output)
    except OSError as exc:
        print(f"photonlab: cannot write to output directory: {exc}",
              file=sys.stderr)
        return EXIT_IO_ERROR

    if args.command == "verify":
        report = run_verify(cfg)
        txt_path, _ = write_verify_report(report, cfg)
        passed = report.all_passed
    else:
        outcome = run_scenario(cfg)
        txt_path = next(p for p in outcome.files if p.endswith("report.txt"))
        passed = outcome.all_passed

    with open(txt_path, "r", encoding="utf-8") as fh:
        sys.stdout.write(fh.read())
    return EXIT_PASS if passed else EXIT_CHECK_FAILURE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
