"""
Command-line interface.

    crev analyze -i matrix.json
    crev classify -i matrix.csv --output text
    crev reverser -i matrix.json --tol-witness 1e-5
    crev verify -i matrix.json --reverser h.json
    crev sl4 -i matrix.json
    crev analyze --batch ./matrices --output-dir ./reports --workers 8
    crev selftest
"""

import argparse
import json
import logging
import sys
from typing import Dict, Optional, Sequence

from . import __version__
from .analysis import (
    ALL_OUTPUTS,
    AnalysisReport,
    Output,
    ReversibilityAnalyzer,
    dumps_json,
    emit_report,
    resolve_tolerances,
    run_verify,
)
from .batch import BatchAnalyzer, batch_exit_code
from .exceptions import InvalidInputError, InvalidToleranceError, ReversibilityError
from .matrix_io import FORMATS, detect_format, load_matrix, parse_matrix
from .progress import create_log_callback, create_tqdm_callback
from .selftest import run_selftest, selftest_exit_code
from .tolerances import list_presets
from .utils import configure_logging

logger = logging.getLogger(__name__)

SUBCOMMAND_OUTPUTS = {
    "analyze": ALL_OUTPUTS,
    "classify": frozenset({Output.PAIRING, Output.CLASSIFY, Output.SL4, Output.POLYNOMIAL_CRITERION}),
    "reverser": frozenset({Output.PAIRING, Output.WITNESS}),
    "sl4": frozenset({Output.SL4}),
}

TOLERANCE_FLAGS = {
    "tol_unit": "unit_tol",
    "tol_cluster": "cluster_tol",
    "tol_witness": "witness_tol",
    "tol_res": "res_tol",
    "tol_coeff": "coeff_tol",
    "tol_det": "det_tol",
}


def _add_common(parser: argparse.ArgumentParser, batch: bool = True) -> None:
    parser.add_argument("-i", "--input", help="Matrix file, or - for stdin")
    parser.add_argument("--format", choices=FORMATS, help="Matrix format (default: from extension)")
    parser.add_argument("--output", choices=("json", "text"), default="json", help="Report format")
    parser.add_argument("--preset", default="default", help="Tolerance preset (see --list-presets)")
    parser.add_argument("--no-sl-check", action="store_true", help="Skip the det A = 1 check")
    for flag, name in TOLERANCE_FLAGS.items():
        parser.add_argument(f"--{flag.replace('_', '-')}", type=float, metavar="X", help=f"Override {name}")
    parser.add_argument(
        "--tol", action="append", default=[], metavar="NAME=VALUE", help="Override any tolerance by name"
    )
    if batch:
        parser.add_argument("--batch", metavar="DIR", help="Analyze every .json/.csv file in DIR")
        parser.add_argument("--output-dir", help="Batch report directory (default: DIR/reports)")
        parser.add_argument("--workers", type=int, default=4, help="Concurrent batch workers")
        parser.add_argument(
            "--no-progress",
            action="store_true",
            help="Log one line per batch item at INFO instead of drawing a progress bar",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crev", description="Conjugate reversibility of SL(n, C) elements"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="WARNING", help="Logging level (default: WARNING)")
    parser.add_argument("--log-file", help="Write log records to this file")
    parser.add_argument("--list-presets", action="store_true", help="List tolerance presets and exit")

    sub = parser.add_subparsers(dest="command")
    _add_common(sub.add_parser("analyze", help="Full pipeline"))
    _add_common(sub.add_parser("classify", help="Classification without a reverser"))
    _add_common(sub.add_parser("reverser", help="Construct and verify a reverser"))
    _add_common(sub.add_parser("sl4", help="SL(4) trace-coefficient decision"))

    verify = sub.add_parser("verify", help="Check a given reverser h of A")
    _add_common(verify, batch=False)
    verify.add_argument("--reverser", required=True, help="Matrix file holding h")

    selftest = sub.add_parser("selftest", help="Run the built-in self-tests")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--output", choices=("json", "text"), default="text")
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, float]:
    """Tolerance overrides from the dedicated flags and repeated --tol NAME=VALUE.

    Raises:
        InvalidToleranceError: If a --tol item is malformed
    """
    overrides: Dict[str, float] = {}
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise InvalidToleranceError(f"expected NAME=VALUE, got {item!r}")
        try:
            overrides[name.strip()] = float(value)
        except ValueError:
            raise InvalidToleranceError(f"tolerance {name.strip()} needs a number, got {value!r}")
    for flag, name in TOLERANCE_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            overrides[name] = value
    return overrides


def _write(data: bytes) -> None:
    sys.stdout.write(data.decode("utf-8"))
    sys.stdout.flush()


def _require_input(args: argparse.Namespace) -> str:
    if not args.input:
        raise InvalidInputError("an input matrix is required (-i/--input)")
    return args.input


def _analyze_single(
    args: argparse.Namespace, analyzer: ReversibilityAnalyzer, overrides: Dict[str, float]
) -> AnalysisReport:
    outputs = SUBCOMMAND_OUTPUTS[args.command]
    path = _require_input(args)
    if path == "-":
        tols = resolve_tolerances(args.preset, overrides)
        A = parse_matrix(sys.stdin.read(), args.format or "json", tols.det_tol, sl_check=False)
        return analyzer.analyze(A, outputs, args.preset, not args.no_sl_check, "<stdin>", **overrides)
    return analyzer.analyze_file(path, args.format, outputs, args.preset, not args.no_sl_check, overrides)


def cmd_analyze(args: argparse.Namespace) -> int:
    overrides = collect_overrides(args)
    analyzer = ReversibilityAnalyzer(preset=args.preset)

    if args.batch:
        batch = BatchAnalyzer(analyzer, max_workers=args.workers)
        items = batch.analyze_directory(
            args.batch,
            args.output_dir,
            fmt=args.format,
            outputs=SUBCOMMAND_OUTPUTS[args.command],
            preset=args.preset,
            sl_check=not args.no_sl_check,
            tolerance_overrides=overrides,
            mode=args.output,
            progress_callback=create_log_callback() if args.no_progress else create_tqdm_callback(),
        )
        for item in items:
            print(f"{item.input_path}: exit {item.exit_code} -> {item.output_path}")
        return batch_exit_code(items)

    report = _analyze_single(args, analyzer, overrides)
    if args.command == "sl4" and report.success and report.sl4 is None:
        raise InvalidInputError(f"sl4 needs a 4 x 4 matrix, got n = {report.request['n']}")
    _write(emit_report(report, args.output))
    return report.exit_code


def cmd_verify(args: argparse.Namespace) -> int:
    overrides = collect_overrides(args)
    tols = resolve_tolerances(args.preset, overrides)
    path = _require_input(args)
    A = load_matrix(path, args.format, tols.det_tol, sl_check=not args.no_sl_check)
    h = load_matrix(args.reverser, args.format or detect_format(args.reverser), sl_check=False)
    report = run_verify(A, h, tols, source=path)
    _write(emit_report(report, args.output))
    return report.exit_code


def cmd_selftest(args: argparse.Namespace) -> int:
    results = run_selftest(seed=args.seed)
    if args.output == "json":
        _write(dumps_json([r.to_dict() for r in results]).encode("utf-8"))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return selftest_exit_code(results)


COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_analyze,
    "reverser": cmd_analyze,
    "sl4": cmd_analyze,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        configure_logging(args.log_level, args.log_file)
    except ReversibilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    if args.list_presets:
        print(json.dumps(list_presets(), indent=2, sort_keys=True))
        return 0
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    try:
        return COMMANDS[args.command](args)
    except ReversibilityError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
