"""padic-kelvin command line: run verification suites and write reports.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage error,
3 resource guard tripped, 4 precision or divergence guard tripped.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DomainError
from .reports import EXIT_USAGE, SUITES, SuiteConfig, run_suite


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-kelvin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--p", type=int, default=2, help="prime (default 2)")
        p.add_argument("--n", type=int, default=2, help="dimension, 2..8 (default 2)")
        p.add_argument("--alpha", type=float, action="append", default=[], help="alpha sample; repeatable")
        p.add_argument("--precision", type=int, default=32, help="p-adic digits for sampled points")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out", type=Path, help="write the report here instead of stdout")

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    common(verify)
    eigen = sub.add_parser("eigen", help="shorthand for 'verify eigen'")
    common(eigen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    suite = "eigen" if args.command == "eigen" else args.suite
    config = SuiteConfig(args.p, args.n, tuple(args.alpha), args.precision, args.seed)
    try:
        config.validate(suite)
    except DomainError as exc:
        parser.print_usage(sys.stderr)
        print(f"padic-kelvin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run_suite(suite, config)
    text = report.render(args.format)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    status = report.exit_status()
    if args.out or args.format != "text":
        s = report.summary
        print(f"{suite}: {s['passed']}/{s['total']} passed (exit {status})", file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
