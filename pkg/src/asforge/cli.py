"""Command line entry point: asforge <command> --config PATH [options]."""

from __future__ import annotations

import argparse
import sys

from . import commands
from .config import load_config
from .curve import set_precision_floor
from .errors import AsforgeError, ConfigError, InternalAssertion
from .report import emit

EXIT_OK, EXIT_CONFIG, EXIT_INTERNAL, EXIT_OTHER = 0, 2, 3, 1


def build_parser():
    ap = argparse.ArgumentParser(prog="asforge",
                                 description="Curves with many points from Artin-Schreier "
                                             "fibre products.")
    ap.add_argument("command", choices=["solve", "analyze", "search", "verify", "lspace", "zeta"])
    ap.add_argument("--config", required=True, metavar="PATH")
    ap.add_argument("--basis", metavar="EXPR,...",
                    help="comma-separated expressions, or the name of a basis in the config")
    ap.add_argument("--max-dim", type=int, metavar="R")
    ap.add_argument("--budget", type=int, metavar="N")
    ap.add_argument("--strategy", choices=["auto", "exhaustive", "greedy", "random"])
    ap.add_argument("--seed", type=int, metavar="N")
    ap.add_argument("--precision", type=int, metavar="N")
    ap.add_argument("--threads", type=int, default=1, metavar="N")
    ap.add_argument("--format", choices=["table", "csv", "json"], default="table")
    ap.add_argument("--out", metavar="PATH")
    ap.add_argument("--allow-outside", action="store_true",
                    help="analyze functions that do not satisfy the trace conditions")
    ap.add_argument("--s-max", type=int, metavar="S", help="extension degrees for zeta")
    return ap


def _split_basis(text):
    if text is None:
        return None
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def run(args):
    job = load_config(args.config)
    precision = args.precision or job.precision
    if precision:
        set_precision_floor(precision)
    session = commands.Session(job, threads=args.threads)
    basis = _split_basis(args.basis)
    cmd = args.command
    if cmd == "solve":
        return commands.cmd_solve(job, session=session)
    if cmd == "lspace":
        return commands.cmd_lspace(job, session=session)
    if cmd == "analyze":
        return commands.cmd_analyze(job, basis, allow_outside=args.allow_outside, session=session)
    if cmd == "search":
        return commands.cmd_search(job, args.max_dim, args.budget, args.strategy, args.seed,
                                   session=session)
    if cmd == "verify":
        return commands.cmd_verify(job, basis, session=session)
    return commands.cmd_zeta(job, basis, s_max=args.s_max, session=session)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InternalAssertion as e:
        print(f"internal assertion failed ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except AsforgeError as e:
        print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_OTHER
    text = emit(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
