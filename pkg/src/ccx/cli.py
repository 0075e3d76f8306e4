"""Command line driver: ``ccx <subcommand> [options]``.

Each subcommand runs one experiment, writes ``<claim>.json`` (and optionally a
CSV sweep plus SVG/PGM images) into ``--out`` and exits with 0 when the claim
holds, 2 when it fails and 1 on usage or internal errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Sequence

from . import tolerances
from .claims import COMMANDS, DEFAULT_SEED, ClaimReport, RunConfig

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

# "all" skips the generic slice, which needs an explicit line
SUITE = ("verify-g2", "gamma-union", "linconvex", "counterexample", "starlike", "homeo", "dual-demo")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means "claim failed" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _list(kind):
    def parse(text: str):
        try:
            return tuple(kind(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot parse {text!r} as a comma separated list")

    return parse


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_list(int), default=(), help="dimension(s), comma separated")
    common.add_argument("--t", type=_list(float), default=None, help="t values for the counterexample lines")
    common.add_argument("--x", type=_list(float), default=None, help="x values for the slope set")
    common.add_argument("--lines", type=int, default=200, help="number of random lines")
    common.add_argument("--samples", type=int, default=None, help="sample count (claim specific default)")
    common.add_argument("--grid", type=int, default=64, help="polar grid size m for the slope set")
    common.add_argument("--resolution", type=int, default=512, help="raster resolution; 2x is also checked")
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    common.add_argument("--base", type=_list(complex), default=(), help="slice base point, e.g. 0,0")
    common.add_argument("--dir", type=_list(complex), default=(), help="slice direction, e.g. 1,0")
    common.add_argument("--out", type=Path, default=Path("ccx-out"), help="output directory")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for reproducible output")
    for name, value in vars(tolerances.DEFAULT).items():
        common.add_argument(f"--tol-{name}", type=float, default=value, dest=f"tol_{name}")

    parser = _Parser(prog="ccx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=(fn.__doc__ or name).strip().splitlines()[0])
    sub.add_parser("all", parents=[common], help="run every claim except slice")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.lines < 1:
        raise UsageError("--lines must be at least 1")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.resolution < 64:
        raise UsageError("--resolution must be at least 64")
    if args.grid < 16:
        raise UsageError("--grid must be at least 16")
    extra = {}
    if args.t is not None:
        extra["t"] = args.t
    if args.x is not None:
        extra["x"] = args.x
    return RunConfig(seed=args.seed, resolution=args.resolution, n=args.n, lines=args.lines,
                     samples=args.samples, grid=args.grid, base=args.base, dir=args.dir, **extra)


def write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_json(report: ClaimReport, config: RunConfig, timestamp: bool) -> bytes:
    doc = report.to_dict(config)
    if timestamp:
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode("utf-8")


def report_csv(report: ClaimReport) -> bytes:
    """The sweep table if the claim has one, otherwise metric,value pairs."""
    buf = io.StringIO()
    if report.rows:
        head = list(report.rows[0])
        w = csv.DictWriter(buf, fieldnames=head, lineterminator="\n")
        w.writeheader()
        w.writerows(report.rows)
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "value"])
        w.writerows(report.metrics.items())
    return buf.getvalue().encode("utf-8")


def emit(report: ClaimReport, config: RunConfig, out: Path, fmt: str, timestamp: bool) -> list[Path]:
    written = []
    for art in report.artifacts:
        write_atomic(out / art.name, art.payload)
        written.append(out / art.name)
    if fmt == "csv":
        write_atomic(out / f"{report.claim}.csv", report_csv(report))
        written.append(out / f"{report.claim}.csv")
    write_atomic(out / f"{report.claim}.json", report_json(report, config, timestamp))
    written.append(out / f"{report.claim}.json")
    return written


def run(names: Sequence[str], config: RunConfig, out: Path, fmt: str, timestamp: bool) -> int:
    failed = False
    for name in names:
        start = time.perf_counter()
        report = COMMANDS[name](config)
        emit(report, config, out, fmt, timestamp)
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} {report.claim} ({name}, {time.perf_counter() - start:.1f}s)")
        failed |= not report.passed
    return EXIT_FAIL if failed else EXIT_PASS


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    names = SUITE if args.command == "all" else (args.command,)
    tol = {k[4:]: v for k, v in vars(args).items() if k.startswith("tol_")}
    try:
        config = config_from_args(args)
        with tolerances.override(**tol):
            return run(names, config, args.out, args.format, not args.no_timestamp)
    except (UsageError, ValueError) as exc:
        print(f"ccx: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # internal failure, never reported as a claim verdict
        print(f"ccx: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
