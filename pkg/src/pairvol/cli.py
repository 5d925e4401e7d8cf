"""Command-line front end.

Every subcommand prints ``key = value`` lines with rationals in lowest terms.
Exit status is 0 on success, 2 when the input is outside the domain of the
computation, and 64 on usage errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import classify0, extremal, pairs
from .errors import CertificateFailure, DomainError, NotLogTerminal, ZeroCoefficient
from .graph import load, random_blow_ups, validate
from .ratcore import fmt_rat
from .star import ChainShape, NotStar, detect_star, lct_star, star_pcp

EXIT_DOMAIN = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(out, key, value):
    if isinstance(value, Fraction):
        value = fmt_rat(value)
    elif isinstance(value, bool):
        value = "true" if value else "false"
    print(f"{key} = {value}", file=out)


def _read(args):
    try:
        g = load(args.graph)
    except OSError as exc:
        raise UsageError(f"cannot read {args.graph}: {exc.strerror}") from None
    return validate(g)


def _prepare(args, g):
    if getattr(args, "drop_zero_arrows", False):
        g = pairs.drop_zero_arrows(g)
    return pairs.normalized_or_raw(g) if args.normalize else g


def _both_ways(args, g, compute):
    value = compute(_prepare(args, g))
    if args.check:
        other = compute(g if args.normalize else pairs.normalized_or_raw(g))
        if other != value:
            raise CertificateFailure(f"normalized and raw graphs disagree: {fmt_rat(value)} vs {fmt_rat(other)}")
    return value


def cmd_validate(args, out):
    g = _read(args)
    _emit(out, "valid", True)
    _emit(out, "vertices", len(g.vertices))
    _emit(out, "edges", len(g.edges))
    _emit(out, "arrows", len(g.arrows))


def cmd_pcp(args, out):
    g = _read(args)
    _emit(out, "pcp", _both_ways(args, g, pairs.pcp))
    if args.check:
        _emit(out, "check", "ok")


def cmd_volume(args, out):
    g = _read(args)
    if args.drop_zero_arrows:
        g = pairs.drop_zero_arrows(g)
    for a in g.arrows:
        if a.n is not None:
            _emit(out, f"arrow.{a.id}.n", a.n)
        _emit(out, f"arrow.{a.id}.c", a.c)
        _emit(out, f"arrow.{a.id}.cbar", 1 - a.c)
    _emit(out, "volume", _both_ways(args, g, pairs.volume))
    if args.check:
        _emit(out, "check", "ok")


def cmd_classify(args, out):
    g = _prepare(args, _read(args))
    label = pairs.classify(g)
    for vid, a in pairs.discrepancies(g).items():
        _emit(out, f"a.{vid}", a)
    _emit(out, "classification", label)
    _emit(out, "pcp", pairs.pcp(g))


def cmd_lct(args, out):
    g = _read(args)
    _emit(out, "lct", pairs.lct(g, normalize=args.normalize))


def cmd_star(args, out):
    g = _prepare(args, _read(args))
    shape = detect_star(g)
    if isinstance(shape, ChainShape):
        _emit(out, "shape", "chain")
        _emit(out, "vertices", " ".join(shape.vertices))
        return
    if isinstance(shape, NotStar):
        _emit(out, "shape", "not_star")
        _emit(out, "reason", shape.reason)
        return
    _emit(out, "shape", "star")
    _emit(out, "center", shape.center)
    _emit(out, "genus", shape.genus)
    _emit(out, "d", shape.d)
    _emit(out, "t", shape.t)
    for i, b in enumerate(shape.branches):
        c = b.chain
        weight = f" n={b.n}" if b.n is not None else (f" c={fmt_rat(b.c)}" if b.arrow else "")
        _emit(out, f"branch.{i}", f"m={c.m} q={c.q} q'={c.q_prime}{weight}")
    _emit(out, "chi", shape.chi)
    _emit(out, "eps", shape.eps)
    _emit(out, "chi_C", shape.chi_c())
    value, _ = star_pcp(shape)
    _emit(out, "pcp", value)
    try:
        _emit(out, "lct", lct_star(shape))
    except (NotLogTerminal, DomainError) as exc:
        _emit(out, "lct", f"undefined ({exc})")


def cmd_vol0(args, out):
    g = _read(args)
    case = classify0.match_case(g)
    _emit(out, "case", case.label)
    _emit(out, "parameters", case.describe() or "-")
    _emit(out, "volume", case.volume)


def cmd_search_min(args, out):
    if args.deficiency is not None:
        best, witness = extremal.min_positive_deficiency(args.deficiency, args.max_k)
        _emit(out, "u", args.deficiency)
        _emit(out, "min_positive", best if best is not None else "none")
        _emit(out, "witness", ",".join(map(str, witness)) if witness else "-")
        return
    bounds = extremal.SearchBounds.parse(args.bounds)
    res = extremal.rdp_star_search(bounds)
    _emit(out, "bounds", f"m={bounds.m},n={bounds.n},nprime={bounds.nprime},d={bounds.d}")
    _emit(out, "vol_max", bounds.vol_max if bounds.vol_max is not None else "none")
    _emit(out, "examined", res.examined)
    _emit(out, "cross_checked", res.checked)
    _emit(out, "distinct_volumes", len(res.volumes))
    _emit(out, "minimum", res.minimum if res.minimum is not None else "none")
    for i, p in enumerate(res.argmin):
        row = extremal.census_row(p, res.minimum)
        _emit(out, f"argmin.{i}", " ".join(f"{k}={v}" for k, v in zip(extremal.CENSUS_HEADER, row) if v != ""))


def cmd_census(args, out):
    kind = args.kind
    if kind == "rdp":
        res = extremal.rdp_star_search(extremal.SearchBounds.parse(args.bounds), census=True)
        classify0.write_csv(res.rows, extremal.CENSUS_HEADER, out)
    elif kind == "vol0":
        m, n, d = args.vol0_bounds
        classify0.write_csv(classify0.vol0_census(m, n, d), ("case_label", "parameters", "volume"), out)
    elif kind == "star3":
        rows = [(*t, classify0.star3_family(t)) for t in classify0.enumerate_star3_types(args.max_k)]
        classify0.write_csv(rows, ("k1", "k2", "k3", "family"), out)
    elif kind == "halfweight":
        rows = [(i, fam.describe()) for i, fam in enumerate(classify0.halfweight_lc_determinants(), start=1)]
        classify0.write_csv(rows, ("family", "determinants"), out)
    elif kind == "weights":
        ks = tuple(int(x) for x in args.ks.split(","))
        rows = classify0.enumerate_weights(ks)
        classify0.write_csv(rows, tuple(f"n{i + 1}" for i in range(len(ks))), out)


def cmd_invariance(args, out):
    g = _read(args)
    rng = random.Random(args.seed)
    base_pcp = pairs.pcp(g)
    try:
        base_vol = pairs.volume(g)
    except ZeroCoefficient:
        base_vol = None
    failures = 0
    for _ in range(args.trials):
        h = random_blow_ups(g, rng, rng.randint(1, args.steps))
        if pairs.pcp(h) != base_pcp or (base_vol is not None and pairs.volume(h) != base_vol):
            failures += 1
    _emit(out, "seed", args.seed)
    _emit(out, "trials", args.trials)
    _emit(out, "pcp", base_pcp)
    _emit(out, "volume", base_vol if base_vol is not None else "undefined")
    _emit(out, "invariant", failures == 0)
    if failures:
        raise CertificateFailure(f"{failures} blow-up sequences changed an invariant")


def _vol0_bounds(text):
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 3 or min(parts) < 1:
        raise argparse.ArgumentTypeError("expected M,N,D")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pairvol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name, func, help_, normalize=True, check=False, drop=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("graph", help="graph file")
        if normalize:
            grp = sp.add_mutually_exclusive_group()
            grp.add_argument("--normalize", dest="normalize", action="store_true", default=True,
                             help="move arrows to the minimal orbifold form first (default)")
            grp.add_argument("--raw", dest="normalize", action="store_false", help="use the graph as given")
        if check:
            sp.add_argument("--check", action="store_true", help="also compute on the other form and compare")
        if drop:
            sp.add_argument("--drop-zero-arrows", action="store_true", help="remove arrows with c = 0 first")
        sp.set_defaults(func=func)
        return sp

    graph_cmd("validate", cmd_validate, "parse and check a graph", normalize=False)
    graph_cmd("pcp", cmd_pcp, "-P.P of K + E + sum c_i C_i", check=True, drop=True)
    graph_cmd("volume", cmd_volume, "volume of the pair", check=True, drop=True)
    graph_cmd("classify", cmd_classify, "discrepancies and log canonicity")
    graph_cmd("lct", cmd_lct, "log canonical threshold of the reduced curve")
    graph_cmd("star", cmd_star, "star-shaped invariants")
    graph_cmd("vol0", cmd_vol0, "volume-zero orbifold classification", normalize=False)

    sp = sub.add_parser("search-min", help="minimum positive volume of RDP orbifold stars")
    sp.add_argument("--bounds", default="m=7,n=12,nprime=12,d=6")
    sp.add_argument("--deficiency", type=int, metavar="U", help="minimise -2 + sum (1 - 1/k_i) over U entries")
    sp.add_argument("--max-k", type=int, default=100, help="cap on entries for --deficiency")
    sp.set_defaults(func=cmd_search_min)

    sp = sub.add_parser("census", help="CSV listings")
    sp.add_argument("kind", choices=("rdp", "vol0", "star3", "halfweight", "weights"))
    sp.add_argument("--bounds", default="m=7,n=12,nprime=12,d=6", help="bounds for the rdp census")
    sp.add_argument("--vol0-bounds", type=_vol0_bounds, default=(6, 6, 6), metavar="M,N,D")
    sp.add_argument("--max-k", type=int, default=100)
    sp.add_argument("--ks", default="2,3,4", help="k triple for the weights listing")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("invariance", help="check pcp and volume under random blow-ups")
    sp.add_argument("graph")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--steps", type=int, default=5)
    sp.set_defaults(func=cmd_invariance)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
