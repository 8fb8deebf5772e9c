"""Command-line front end: ``fairgame solve|check|bench|derand|steps``."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from . import bench
from .check import cross_check, oracle_form
from .fixpoint import solve, solve_gen_rabin
from .gamefile import ParseError, emit_game, parse_game
from .model import Owner, StochasticGameGraph, ValidationError, validate
from .oracle import OracleBudgetError
from .stochastic import derand, mdp_almost_sure_oracle
from .strategy import _gen_rabin_form, extract_p0_strategy, extract_rabin_ranks, format_rank

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for invalid games here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError("%s: error: %s" % (self.prog, message))


def _accel(s: str) -> int:
    m = int(s)
    if m < 0:
        raise argparse.ArgumentTypeError("M must be >= 0")
    return m


def _accel_list(s: str) -> list[int]:
    return [_accel(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairgame", description="Solve games under strong transition fairness")
    parser.add_argument("--jobs", type=int, default=1, help="max worker processes (default 1)")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="print the winning region of P0")
    p.add_argument("file")
    p.add_argument("--accel", type=_accel, default=0, metavar="M", help="acceleration bound (0 = off)")
    p.add_argument("--strategy", metavar="OUT", help="write a winning P0 strategy ('-' for stdout)")
    p.add_argument("--frames", action="store_true", help="print per-vertex ranks from the recorded iterates")
    p.add_argument("--stats", action="store_true", help="print step totals and iteration counts")
    p.add_argument("--kv", action="store_true", help="stats as key=value lines")

    p = sub.add_parser("check", help="compare the solver with the brute-force oracle")
    p.add_argument("file")
    p.add_argument("--accel", type=_accel, default=0, metavar="M")
    p.add_argument("--budget", type=int, default=10**6, help="max memoryless strategies to enumerate")

    p = sub.add_parser("bench", help="emit a random game file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--owner-frac", type=float, default=0.5)
    p.add_argument("--live-frac", type=float, default=0.05)
    p.add_argument("--member-frac", type=float, default=0.05)
    p.add_argument("--gadget-chain", type=int, metavar="m", help="emit the m-gadget chain instead")
    p.add_argument("--as", dest="encoding", choices=("buchi", "rabin", "parity"), default="buchi")
    p.add_argument("-o", "--out", help="output file (default stdout)")

    p = sub.add_parser("derand", help="replace random vertices by P1 vertices with live edges")
    p.add_argument("file")
    p.add_argument("-o", "--out")

    p = sub.add_parser("steps", help="symbolic step counts for several acceleration bounds")
    p.add_argument("file", nargs="?")
    p.add_argument("--accel", type=_accel_list, default=[0, 2, 4, 16], metavar="M,M,…")
    p.add_argument("--gadget-chain", metavar="m,m,…", help="use the gadget chain family instead of a file")
    p.add_argument("--as", dest="encoding", choices=("buchi", "rabin", "parity"), default="buchi",
                   help="condition used for the gadget chain (default buchi)")
    p.add_argument("--kv", action="store_true")
    return parser


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _names(g, s) -> str:
    return " ".join(g.name(v) for v in s)


def _load(path: str):
    game, cond = parse_game(path)
    rep = validate(game, cond)
    for w in rep.warnings:
        print("warning: " + w, file=sys.stderr)
    if not rep.ok:
        raise ValidationError(rep)
    return game, cond


def _arena(game):
    return derand(game) if isinstance(game, StochasticGameGraph) else game


def stats_lines(res, kv: bool = False) -> list[str]:
    rows = [("steps.total", res.steps.get("total", 0))]
    rows += [("steps." + k, v) for k, v in sorted(res.steps.items()) if k != "total"]
    rows += [("iterations." + k, v) for k, v in sorted(res.iterations.items())]
    rows.append(("cache_hits", res.cache_hits))
    if kv:
        return ["%s=%s" % (k, v) for k, v in rows]
    width = max(len(k) for k, _ in rows)
    return ["%-*s  %s" % (width, k, v) for k, v in rows]


def cmd_solve(args) -> int:
    game, cond = _load(args.file)
    g = _arena(game)
    res = solve(g, cond, args.accel)
    print("winning: " + _names(g, res.region))
    if args.stats:
        print("\n".join(stats_lines(res, args.kv)))
    if args.frames:
        print("ranks:")
        _print_ranks(g, cond)
    if args.strategy:
        _, strat = extract_p0_strategy(g, cond)
        _write("".join(line + "\n" for line in strat.lines(g)), args.strategy)
    return EXIT_OK


def _print_ranks(g, cond) -> None:
    pairs, order = _gen_rabin_form(g, cond)
    if pairs is None:
        # non-Rabin classes: print the recorded iterate index per vertex
        res = solve(g, cond, 0, True)
        best = {}
        for rec in res.records or ():
            for v in rec.X:
                best[v] = min(best.get(v, rec.counters[-1]), rec.counters[-1])
        for v in range(g.n):
            print("  %s %s" % (g.name(v), best[v] if v in best else "inf"))
        return
    res = solve_gen_rabin(g, pairs, 0, True, order=order)
    ranks = extract_rabin_ranks(res, pairs)
    for mem in sorted(ranks.ranks):
        tag = "" if mem == () else " @" + ".".join(str(x + 1) for x in mem)
        for v in range(g.n):
            print("  %s%s %s" % (g.name(v), tag, format_rank(ranks.rank(v, mem))))


def cmd_check(args) -> int:
    game, cond = _load(args.file)
    if isinstance(game, StochasticGameGraph) and Owner.P1 not in game.owner:
        # 1½-player game: compare with the end-component oracle
        g = derand(game)
        _, pairs, exact = oracle_form(g, cond)
        if not exact:
            print("check: no end-component oracle for this condition", file=sys.stderr)
            return EXIT_USAGE
        region = solve(g, cond, args.accel).region
        truth = mdp_almost_sure_oracle(game, pairs, args.budget)
        problems = [] if region == truth else [
            "region mismatch: solver %s, oracle %s" % (_names(g, region), _names(g, truth))]
    else:
        problems = cross_check(_arena(game), cond, args.accel, args.budget)
    for p in problems:
        print("mismatch: " + p)
    if problems:
        return EXIT_MISMATCH
    print("check: ok")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.gadget_chain is not None:
        g, cond = bench.gadget_chain(args.gadget_chain, args.encoding)
    else:
        g, cond = bench.random_fair_game(args.seed, args.n, args.k, args.owner_frac,
                                         args.live_frac, args.member_frac)
    _write(emit_game(g, cond), args.out)
    return EXIT_OK


def cmd_derand(args) -> int:
    game, cond = _load(args.file)
    _write(emit_game(_arena(game), cond), args.out)
    return EXIT_OK


def _steps_row(job):
    label, g, cond, M = job
    res = solve(g, cond, M)
    return label, M, res.total_steps, res.cache_hits, res.region


def cmd_steps(args) -> int:
    if args.gadget_chain:
        sizes = [int(x) for x in args.gadget_chain.split(",") if x]
        games = [("m=%d" % m, *bench.gadget_chain(m, args.encoding)) for m in sizes]
    elif args.file:
        game, cond = _load(args.file)
        games = [(args.file, _arena(game), cond)]
    else:
        raise UsageError("steps: give a file or --gadget-chain")
    jobs = [(label, g, cond, M) for label, g, cond in games for M in args.accel]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_steps_row, jobs))
    else:
        rows = [_steps_row(j) for j in jobs]
    base = {}
    for label, M, steps, hits, region in rows:
        base.setdefault(label, (steps, region))
    ok = True
    out = []
    for label, M, steps, hits, region in rows:
        same = region == base[label][1]
        ok &= same
        if args.kv:
            out.append("instance=%s M=%d steps=%d cache_hits=%d region=%d same_region=%s"
                       % (label, M, steps, hits, len(region), "yes" if same else "no"))
        else:
            out.append((label, str(M), str(steps), str(hits), str(len(region)), "yes" if same else "NO"))
    if not args.kv:
        head = ("instance", "M", "steps", "cache_hits", "|region|", "same_region")
        widths = [max(len(r[i]) for r in [head] + out) for i in range(len(head))]
        out = ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
               for r in [head] + out]
    print("\n".join(out))
    return EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {"solve": cmd_solve, "check": cmd_check, "bench": cmd_bench,
            "derand": cmd_derand, "steps": cmd_steps}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        return COMMANDS[args.cmd](args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as e:
        # --help and friends
        return e.code if isinstance(e.code, int) else EXIT_OK
    except (OracleBudgetError, OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
