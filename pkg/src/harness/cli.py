"""
Command line entry point: ``pinvtool verify | bench | pinv``.

Exit codes: 0 every threshold passed, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from core.block_update import Backend, BlockPinvUpdater
from core.greville import PinvState
from core.logger import get_logger, setup_logging
from core.matrix_core import Tolerance
from core.matrix_io import MatrixFormatError, MatrixLoader, format_matrix_text

from .bench import Bencher
from .config import HarnessConfig
from .corpus import CorpusSpec, RankPattern
from .verifier import Verifier

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _add_corpus_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("corpus")
    group.add_argument("--spec", type=Path, help="JSON corpus spec (overrides the dimension flags)")
    group.add_argument("--m", type=int, default=6, help="rows of A")
    group.add_argument("--n", type=int, default=3, help="columns of A")
    group.add_argument("--p", type=int, default=3, help="appended columns")
    group.add_argument("--q", type=int, default=2, help="appended rows (with --rows)")
    group.add_argument("--pattern", choices=[pattern.value for pattern in RankPattern], default=RankPattern.FULL.value)
    group.add_argument("--tags", default="", help="comma separated column tags for the mixed pattern (f,r,z,d)")
    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--count", type=int, default=1, help="instances in the corpus")
    group.add_argument("--vary-shapes", action="store_true", help="draw each instance's dimensions in [1, bound]")
    group.add_argument("--scale", type=float, default=1.0)
    group.add_argument("--rows", action="store_true", help="append rows instead of columns")


def _add_numeric_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=[backend.value for backend in Backend], default=Backend.INVERSE_CHOLESKY.value)
    parser.add_argument("--eps", type=float, default=1e-10, help="squared-norm threshold of the zero residual test")
    parser.add_argument("--relative-eps", action="store_true", help="scale the threshold by the squared norm of the new column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pinvtool", description="Block Moore-Penrose pseudoinverse updates")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--debug-log", type=Path, help="also write DEBUG logs to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="check block updates against the column-by-column oracle")
    _add_corpus_arguments(verify)
    _add_numeric_arguments(verify)
    verify.add_argument("--files", nargs=2, type=Path, metavar=("A", "H"), help="verify one update read from matrix files")
    verify.add_argument("--pinv", type=Path, help="supplied pseudoinverse of A (with --files)")
    verify.add_argument("--theorems", type=int, default=0, metavar="N", help="also run the property suites with N trials")
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--cache-dir", type=Path, help="cache oracle pseudoinverses in this directory")
    verify.add_argument("--clear-cache", action="store_true", help="empty the oracle cache before verifying")
    verify.add_argument("--report", type=Path, help="write the JSON report here")
    verify.add_argument("--text", action="store_true", help="print the aligned text report")

    bench = sub.add_parser("bench", help="time the block update against the column-by-column recursion")
    _add_corpus_arguments(bench)
    _add_numeric_arguments(bench)
    bench.add_argument("--reps", type=int, default=20)
    bench.add_argument("--csv", type=Path, help="write the timing table here")

    pinv = sub.add_parser("pinv", help="one-shot update of a pseudoinverse read from matrix files")
    _add_numeric_arguments(pinv)
    pinv.add_argument("--in", dest="a_path", type=Path, required=True)
    pinv.add_argument("--append", dest="block_path", type=Path, required=True)
    pinv.add_argument("--rows", action="store_true")
    pinv.add_argument("--pinv", type=Path, help="known pseudoinverse of the input (computed when omitted)")
    pinv.add_argument("--out", type=Path, help="output file (stdout when omitted)")
    return parser


def _tolerance(args: argparse.Namespace) -> Tolerance:
    return Tolerance(zero_sq=args.eps, relative=args.relative_eps)


def _corpus_spec(args: argparse.Namespace) -> CorpusSpec:
    if args.spec is not None:
        return CorpusSpec.from_file(args.spec)
    tags = tuple(tag.strip() for tag in args.tags.split(",") if tag.strip())
    return CorpusSpec(
        m=args.m,
        n=args.n,
        p=args.p,
        q=args.q,
        rank_pattern=RankPattern(args.pattern),
        seed=args.seed,
        scale=args.scale,
        tags=tags,
        count=args.count,
        vary_shapes=args.vary_shapes,
        rows=args.rows,
    )


def _run_verify(args: argparse.Namespace) -> int:
    config = HarnessConfig(tol=_tolerance(args), backend=Backend(args.backend), cache_dir=args.cache_dir, jobs=args.jobs)
    verifier = Verifier(config)
    if args.clear_cache:
        if args.cache_dir is None:
            raise ValueError("--clear-cache needs --cache-dir")
        get_logger().info(f"verify: cleared {verifier.clear_cache()} cached oracle results")
    if args.files is not None:
        report = verifier.verify_files(args.files[0], args.files[1], args.pinv, rows=args.rows)
    else:
        report = verifier.verify_spec(_corpus_spec(args), args.theorems)

    if args.report is not None:
        report.to_json(args.report)
    if args.text:
        print(report.to_text())
    summary = report.summary()
    get_logger().info(
        f"verify: {'PASS' if summary['pass'] else 'FAIL'} ({summary['failed']}/{summary['instances']} failed, "
        f"worst residual {summary['worst_residual']:.3e}, worst deviation {summary['worst_dev']:.3e})"
    )
    info = verifier.cache_info()
    if info is not None:
        get_logger().info(f"verify: oracle cache holds {info['total_files']} files in {info['base_directory']}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _run_bench(args: argparse.Namespace) -> int:
    bencher = Bencher(HarnessConfig(tol=_tolerance(args), backend=Backend(args.backend)))
    report = bencher.run(_corpus_spec(args), args.reps)
    if args.csv is not None:
        report.to_csv(args.csv)
    print(report.to_text())
    return EXIT_PASS


def _run_pinv(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    a = MatrixLoader(args.a_path).load()
    block = MatrixLoader(args.block_path).load()
    state = PinvState(a, MatrixLoader(args.pinv).load()) if args.pinv else PinvState.from_matrix(a, tol)

    updater = BlockPinvUpdater(tol, Backend(args.backend))
    if args.rows:
        new_state, report = updater.append_rows(state, block)
    else:
        new_state, report = updater.append_columns(state, block)

    if args.out is not None:
        MatrixLoader(args.out).save(new_state.a_plus)
    else:
        sys.stdout.write(format_matrix_text(new_state.a_plus))
    get_logger().info(
        f"pinv: {new_state.m}x{new_state.n} updated through [{', '.join(report.tags)}], "
        f"worst MP residual {report.mp.worst():.3e}"
    )
    return EXIT_PASS


COMMANDS = {"verify": _run_verify, "bench": _run_bench, "pinv": _run_pinv}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits with 0, usage errors with 2
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE

    setup_logging(args.log_level, debug_log_file=args.debug_log)
    logger = get_logger()
    try:
        return COMMANDS[args.command](args)
    except MatrixFormatError as exc:
        logger.error(f"Malformed matrix file: {exc}")
    except (OSError, ValueError) as exc:
        logger.error(f"{args.command}: {exc}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
