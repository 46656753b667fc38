"""Command-line interface: ``dupdist <command> ...``.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 ok, 2 bad input,
3 size cap or cell overflow, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
from pathlib import Path

from . import approx_engine as ae
from . import bounds as bd
from . import exact_engine as ee
from . import generators as gen
from .errors import CacheError, CapExceeded, InvalidInput, InvalidStep, TableOverflow
from .seqcore import ROOTS, BinarySeq, DedupProcess, replay, root_of

log = logging.getLogger("dupdist")

EXIT_PARSE, EXIT_CAP, EXIT_VERIFY = 2, 3, 4
DISTANCE_TABLE_CAP = 24
BIG_MEMORY_N = 25


class VerificationFailed(Exception):
    pass


def _config(max_n: int, cache=None) -> ee.SearchConfig:
    return ee.SearchConfig(max_n, ee.default_workers(), cache)


def _table(max_n: int, cache=None) -> ee.DistanceTable:
    if max_n >= BIG_MEMORY_N:
        log.warning("max_n=%d is a big-memory run", max_n)
    return ee.build_table(_config(max_n, cache))


def _write_out(text: str, dest) -> None:
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def cmd_distance(args) -> int:
    s = BinarySeq.from_str(args.seq)
    if not s.length:
        raise InvalidInput("empty sequence")
    if args.beta is not None:
        cfg = ae.BetaConfig(args.beta, ae.BETA_CAP)
        d = ae.beta_distance(s, cfg)
        print(f"f_beta={d}")
        proc = ae.beta_process(s, cfg.beta) if args.emit_process else None
    else:
        if s.length <= ee.ORACLE_CAP:
            d, table = ee.oracle_distance(s), None
        elif s.length <= DISTANCE_TABLE_CAP:
            table = _table(max(s.length, 3), args.cache)
            d = ee.f_of_seq(table, s)
        else:
            raise CapExceeded(f"exact distance supports length <= {DISTANCE_TABLE_CAP}")
        print(f"f={d} root={root_of(s)}")
        proc = ee.optimal_process(s, table) if args.emit_process else None
    if proc is not None:
        Path(args.emit_process).write_text(proc.to_json() + "\n")
    return 0


def _csv_writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def cmd_table(args) -> int:
    if not 1 <= args.max_n <= ee.MAX_N:
        raise CapExceeded(f"max_n must lie in [1, {ee.MAX_N}]")
    table = _table(max(args.max_n, 3), args.cache)
    fs = [ee.f_n(table, n) for n in range(1, args.max_n + 1)]
    # monotonicity of f(n) is observed, not assumed
    log.info("f(n) non-decreasing up to %d: %s", args.max_n, all(a <= b for a, b in zip(fs, fs[1:])))
    out = _csv_writer()
    if args.sigma == "all":
        out.writerow(["n"] + [f"f{r}" for r in ROOTS] + ["f"])
        for n in range(1, args.max_n + 1):
            per_root = [ee.f_sigma_n(table, n, r) for r in ROOTS]
            out.writerow([n] + ["" if v < 0 else v for v in per_root] + [ee.f_n(table, n)])
    else:
        out.writerow(["n", "f"])
        for n in range(1, args.max_n + 1):
            v = ee.f_n(table, n) if args.sigma is None else ee.f_sigma_n(table, n, args.sigma)
            out.writerow([n, "" if v < 0 else v])
    return 0


def cmd_fnm(args) -> int:
    if args.max_n >= BIG_MEMORY_N:
        log.warning("max_n=%d is a big-memory run", args.max_n)
    vals = ee.f_n_m_all(_config(args.max_n))
    out = _csv_writer()
    out.writerow(["n", "m", "f", "ratio"])
    best = None
    for (n, m) in sorted(vals):
        f = vals[(n, m)]
        ratio = f / (n - m)
        out.writerow([n, m, f, f"{ratio:.6g}"])
        if best is None or ratio < best[0]:
            best = (ratio, n, m, f)
    if best:
        print("summary: min ratio f(n,m)/(n-m) = %.6g at n=%d, m=%d (f=%d)" % best, file=sys.stderr)
    return 0


def _lsystem(args) -> gen.LSystem:
    if args.kind == "fibonacci":
        return gen.FIBONACCI
    if args.kind == "thue-morse":
        return gen.THUE_MORSE
    try:
        img0, img1 = args.rules.split(",")
    except (AttributeError, ValueError):
        raise InvalidInput("--rules must look like IMAGE0,IMAGE1, e.g. 01,10") from None
    return gen.LSystem(args.axiom, img0, img1)


def cmd_generate(args) -> int:
    if args.kind == "debruijn":
        s = gen.de_bruijn(args.order)
    elif args.kind == "thue-morse":
        s = gen.thue_morse(args.order)
    elif args.kind == "fibonacci":
        s = gen.fibonacci_word(args.order)
    else:
        s = gen.d0l_iterate(_lsystem(args), args.order)
    _write_out(str(s) + "\n", args.output)
    return 0


def cmd_schedule(args) -> int:
    if args.kind == "thue-morse":
        p = gen.tm_schedule(args.order)
    elif args.kind == "fibonacci":
        p = gen.fib_schedule(args.order)
    elif args.kind == "d0l":
        p = gen.lifted_schedule(_lsystem(args), args.order)
    else:
        if args.seq is None:
            raise InvalidInput("--seq is required for the heuristic schedule")
        p = ee.heuristic_schedule(BinarySeq.from_str(args.seq))
    log.info("%d steps", len(p))
    _write_out(p.to_json() + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.process in (None, "-") else Path(args.process).read_text()
    p = DedupProcess.from_json(text)
    try:
        end = replay(p)
    except (InvalidStep, InvalidInput) as exc:
        raise VerificationFailed(str(exc)) from None
    print(f"ok steps={len(p)} final={end}")
    return 0


def cmd_bounds(args) -> int:
    table = fnm = None
    if args.table_max_n:
        table = _table(args.table_max_n, args.cache)
        fnm = ee.f_n_m_all(_config(args.table_max_n))
    rep = bd.bound_report(args.n, table, fnm, alpha=args.alpha, beta=args.beta)
    print(rep.to_json())
    return 0


def cmd_find_repeat(args) -> int:
    if args.random is not None:
        rng = random.Random(args.seed)
        s = BinarySeq(args.random, rng.getrandbits(args.random))
    elif args.seq:
        s = BinarySeq.from_str(args.seq)
    else:
        raise InvalidInput("give a sequence or --random N")
    if args.exponent is not None:
        w = ae.nonlinear_repeat_finder(s, args.exponent)
    else:
        w = ae.plotkin_repeat_finder(s, args.beta, args.k)
    print(json.dumps(w.to_dict()))
    return 0


def cmd_cache(args) -> int:
    if args.action == "build":
        table = _table(args.max_n, args.path)
        print(f"cached max_n={table.max_n} at {args.path}")
    else:
        table = ee.DistanceTable.load(args.path)
        print(f"max_n={table.max_n} bytes={len(table.to_bytes())}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dupdist", description="Tandem-duplication distance to the root")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="exact or beta distance of one sequence")
    p.add_argument("seq")
    p.add_argument("--beta", type=float)
    p.add_argument("--emit-process", metavar="PATH")
    p.add_argument("--cache")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("table", help="f(n) (or f_sigma(n)) as CSV")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--sigma", choices=list(ROOTS) + ["all"])
    p.add_argument("--cache")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("fnm", help="f(n,m) grid as CSV")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_fnm)

    lsys = argparse.ArgumentParser(add_help=False)
    lsys.add_argument("--axiom", default="0")
    lsys.add_argument("--rules", help="IMAGE0,IMAGE1 for --kind d0l")
    lsys.add_argument("--output", "-o")

    p = sub.add_parser("generate", parents=[lsys], help="emit a sequence")
    p.add_argument("--kind", choices=["debruijn", "thue-morse", "fibonacci", "d0l"], required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("schedule", parents=[lsys], help="emit a deduplication process as JSON")
    p.add_argument("--kind", choices=["thue-morse", "fibonacci", "d0l", "heuristic"], required=True)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--seq")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("verify", help="replay a process JSON (file or stdin)")
    p.add_argument("process", nargs="?")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="bound report for n as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--beta", type=float)
    p.add_argument("--table-max-n", type=int)
    p.add_argument("--cache")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("find-repeat", help="constructive beta-repeat witness as JSON")
    p.add_argument("seq", nargs="?")
    p.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta", type=float, default=0.6)
    p.add_argument("--k", type=int)
    p.add_argument("--exponent", type=float, help="use the 1/2 + h^-a budget instead of beta")
    p.set_defaults(func=cmd_find_repeat)

    p = sub.add_parser("cache", help="build or inspect a distance cache file")
    p.add_argument("action", choices=["build", "info"])
    p.add_argument("path")
    p.add_argument("--max-n", type=int, default=20)
    p.set_defaults(func=cmd_cache)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CapExceeded, TableOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InvalidInput, InvalidStep, CacheError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
