"""Command line entry point: ``cayleytrick <command> ...``.

Exit status: 0 on success, 1 for bad input, 2 when a budget runs out.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import census, flipdyn, ratlp, render, tropic
from .cayley import to_triangulation
from .minkowski import subdivision_document
from .trigrid import LabeledTiling, MalformedInput, ParseError, parse, serialize

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2

DEFAULT_NODES = 10**7
DEFAULT_LPS = 10**5

REGIME_NAMES = {"all": flipdyn.ALL_LOZENGE, "trapezoid": flipdyn.TRAPEZOID_ONLY,
                "bistellar": flipdyn.BISTELLAR}


class InputError(Exception):
    pass


class BudgetExceeded(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    regime: str = flipdyn.ALL_LOZENGE
    fmt: str = "json"
    max_nodes: int = DEFAULT_NODES
    max_lps: int = DEFAULT_LPS
    seed: int | None = None
    time_limit: float | None = None  # seconds

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise InputError("k must be at least 1")
        if self.max_nodes <= 0 or self.max_lps <= 0:
            raise InputError("budgets must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InputError("the time limit must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_tiling(path: str) -> LabeledTiling:
    try:
        t = parse(_read(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except MalformedInput as exc:
        raise InputError(f"{path}: {exc}") from exc
    return t if isinstance(t, LabeledTiling) else LabeledTiling.default(t)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands

def cmd_count(args) -> int:
    RunConfig("count", args.k)
    value = census.count_triangulations(args.k) if args.triangulations else census.count_tilings(args.k)
    print(value)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cfg = RunConfig("enumerate", args.k, fmt=args.format, max_nodes=args.budget)
    try:
        for t in census.enumerate_tilings(cfg.k, budget=cfg.max_nodes):
            print(serialize(t) if cfg.fmt == "json" else t.key())
    except census.EnumerationBudgetExceeded as exc:
        sys.stdout.flush()
        raise BudgetExceeded(str(exc)) from exc
    return EXIT_OK


def cmd_render(args) -> int:
    t = _load_tiling(args.file)
    if args.zones is not None and not 1 <= args.zones <= t.k:
        raise InputError(f"zone {args.zones} outside 1..{t.k}")
    text = render.to_ascii(t, args.zones) if args.ascii else render.to_svg(t, args.zones)
    _write(text, args.output)
    return EXIT_OK


def cmd_flipgraph(args) -> int:
    cfg = RunConfig("flipgraph", args.k, regime=REGIME_NAMES[args.regime], max_nodes=args.budget)
    try:
        g = flipdyn.build_flip_graph(cfg.k, cfg.regime, labeled=args.labeled, budget=cfg.max_nodes)
    except flipdyn.FlipGraphOverflow as exc:
        raise BudgetExceeded(str(exc)) from exc
    summary = g.summary()
    if args.diameter:
        summary["diameter"] = flipdyn.diameter(g) if summary["components"] == 1 else None
    if args.export:
        Path(args.export).write_text("\n".join(g.adjacency_lines()) + "\n", encoding="utf-8")
    print(" ".join(f"{key}={value}" for key, value in summary.items()))
    return EXIT_OK


def cmd_regularity(args) -> int:
    cfg = RunConfig("regularity", max_lps=args.max_lps, time_limit=args.time_limit)
    deadline = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit
    if args.sweep:
        try:
            k = int(args.target)
        except ValueError:
            raise InputError("--sweep needs an integer k") from None
        RunConfig("regularity", k)
        tilings = census.enumerate_tilings(k)
    else:
        tilings = [_load_tiling(args.target)]
    counts = {ratlp.REGULAR: 0, ratlp.NON_REGULAR: 0}
    witness = None
    used = 0
    for t in tilings:
        out_of_time = deadline is not None and time.monotonic() > deadline
        if used >= cfg.max_lps or out_of_time:
            print(f"regular={counts[ratlp.REGULAR]} non_regular={counts[ratlp.NON_REGULAR]} partial=true")
            if out_of_time:
                raise BudgetExceeded(f"time limit of {cfg.time_limit}s exhausted")
            raise BudgetExceeded(f"LP budget of {cfg.max_lps} exhausted")
        lt = t if isinstance(t, LabeledTiling) else LabeledTiling.default(t)
        cert = ratlp.check_regular_triangulation(lt)
        used += 1
        counts[cert.verdict] += 1
        if not args.quiet:
            print(f"{lt.key()}\t{cert.verdict}")
        if cert.verdict == ratlp.NON_REGULAR and witness is None:
            witness = {"tiling": json.loads(serialize(lt)), "certificate": json.loads(cert.to_json())}
            if args.first:
                break
    print(f"regular={counts[ratlp.REGULAR]} non_regular={counts[ratlp.NON_REGULAR]}")
    if witness is not None:
        text = json.dumps(witness, separators=(",", ":"))
        if args.witness:
            Path(args.witness).write_text(text + "\n", encoding="utf-8")
        else:
            print("witness " + text)
    return EXIT_OK


def cmd_tropical(args) -> int:
    if args.random is not None:
        cfg = RunConfig("tropical", args.random, seed=args.seed)
        M = tropic.random_matrix(cfg.k, cfg.seed)
        print(f"# seed={cfg.seed} k={cfg.k}")
    elif args.file:
        try:
            M = tropic.parse_matrix(_read(args.file))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed matrix: {exc}") from exc
        if len(M[0]) != 3:
            raise InputError("the matrix needs exactly 3 columns")
    else:
        raise InputError("give a matrix file or --random K")
    try:
        ls = tropic.coherent_subdivision(M, perturb=args.perturb)
    except tropic.DegenerateMatrix as exc:
        raise InputError(str(exc)) from exc
    print(json.dumps(subdivision_document(ls), separators=(",", ":")))
    check = "not applicable (subdivision is not fine)"
    if ls.is_fine() and not args.perturb:
        lt = ls.to_labeled_tiling()
        rows, _ = ratlp.triangulation_system(to_triangulation(lt))
        h = tropic.cayley_heights(M)
        ok = all(sum(a * b for a, b in zip(r, h)) > 0 for r in rows)
        check = "REGULAR (matrix heights verified)" if ok else "FAILED"
    print(json.dumps({"witness_check": check}))
    return EXIT_OK


def cmd_report(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = census.entropy_report(args.k_max)
    beta = census.beta_constant(1e-7)
    print("k\tcount\tentropy_ratio\tlower_bound\tupper_bound\twithin_bounds")
    for r in rows:
        lower = "" if r.lower is None else f"{r.lower:.6f}"
        print(f"{r.k}\t{r.count}\t{r.ratio:.6f}\t{lower}\t{r.upper:.6f}\t{str(r.within_bounds).lower()}")
    print(f"# beta={beta:.8f}")
    render.entropy_figure(rows, beta, out / "entropy.png")
    render.counts_figure(rows, out / "counts.png")
    sample = LabeledTiling.default(next(iter(census.enumerate_tilings(min(args.k_max, 4)))))
    render.zones_figure(sample, out / "zones.png")
    for name in ("entropy.png", "counts.png", "zones.png"):
        print(f"# figure={out / name}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cayleytrick", description="Lozenge tilings, mixed subdivisions and "
                "triangulations of the product of a triangle and a simplex.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="number of tilings of T_k")
    c.add_argument("k", type=int)
    c.add_argument("--triangulations", action="store_true", help="count labeled tilings instead")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("enumerate", help="one tiling document per line")
    e.add_argument("k", type=int)
    e.add_argument("--format", choices=("json", "text"), default="json")
    e.add_argument("--budget", type=int, default=DEFAULT_NODES, help="maximum search nodes")
    e.set_defaults(func=cmd_enumerate)

    r = sub.add_parser("render", help="draw a tiling document")
    r.add_argument("file", help="tiling JSON file, or - for stdin")
    kind = r.add_mutually_exclusive_group()
    kind.add_argument("--svg", action="store_true", help="SVG output (default)")
    kind.add_argument("--ascii", action="store_true")
    r.add_argument("--zones", type=int, metavar="I", help="highlight zone I")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)

    f = sub.add_parser("flipgraph", help="flip graph summary")
    f.add_argument("k", type=int)
    f.add_argument("--regime", choices=sorted(REGIME_NAMES), default="all")
    f.add_argument("--labeled", action="store_true")
    f.add_argument("--diameter", action="store_true")
    f.add_argument("--export", metavar="FILE", help="write the adjacency list here")
    f.add_argument("--budget", type=int, default=DEFAULT_NODES, help="maximum number of nodes")
    f.set_defaults(func=cmd_flipgraph)

    g = sub.add_parser("regularity", help="regularity of one tiling or of all tilings of T_k")
    g.add_argument("target", help="k with --sweep, otherwise a tiling file")
    g.add_argument("--sweep", action="store_true")
    g.add_argument("--first", action="store_true", help="stop at the first non-regular tiling")
    g.add_argument("--quiet", action="store_true", help="only print the totals")
    g.add_argument("--max-lps", type=int, default=DEFAULT_LPS)
    g.add_argument("--time-limit", type=float, metavar="SECONDS", help="stop the sweep after this long")
    g.add_argument("--witness", metavar="FILE", help="write the non-regular witness here")
    g.set_defaults(func=cmd_regularity)

    t = sub.add_parser("tropical", help="coherent mixed subdivision of a k x 3 lifting matrix")
    t.add_argument("file", nargs="?", help="matrix as CSV or JSON")
    t.add_argument("--random", type=int, metavar="K", help="use a seeded random K x 3 matrix")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--perturb", action="store_true", help="refine by a symbolic perturbation")
    t.set_defaults(func=cmd_tropical)

    rep = sub.add_parser("report", help="entropy table (TSV) and figures")
    rep.add_argument("--k-max", type=int, default=16)
    rep.add_argument("--out", default="report")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
