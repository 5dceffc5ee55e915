"""Command-line front end.

Reports go to stdout as ``key=value`` lines; human-oriented messages go to
stderr. Exit codes: 0 success or property holds, 1 property fails, 2 invalid
input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import __version__
from . import consistency as cons
from . import io
from . import lll
from . import ramsey
from .corpus import GENERATORS, CorpusSpec, generate
from .errors import BudgetError, InvalidInput
from .geometry import decompose, format_tree, same_order_type, same_signature
from .predicates import is_locally_consistent, iota_recover, phi_encode, psi_decode, psi_encode

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class Reporter:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout

    def kv(self, **fields):
        self.stream.write(" ".join(f"{k}={_fmt(v)}" for k, v in fields.items()) + "\n")

    def raw(self, text: str):
        self.stream.write(text if text.endswith("\n") else text + "\n")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if v is None:
        return "none"
    if isinstance(v, (tuple, list)):
        return ",".join(map(str, v))
    return str(v)


def _diag(msg: str):
    sys.stderr.write(msg + "\n")


def _budget(args) -> ramsey.BuildBudget:
    return ramsey.BuildBudget(max_points=args.budget_points, max_depth=args.budget_depth)


def _emit(text: str, args, out: Reporter):
    """Write a file payload to ``--out`` or to stdout."""
    if args.out:
        io.write_text(text, args.out)
        _diag(f"wrote {args.out}")
    else:
        out.raw(text)


def _one_based(seq):
    return [i + 1 for i in seq]


# ----------------------------------------------------------------- handlers


def cmd_ordertype(args, out):
    P = io.read_points(args.points)
    out.kv(n=len(P))
    for (i, j, k), s in zip(itertools.combinations(range(len(P)), 3), P.order_type().signs):
        out.raw(f"{i + 1} {j + 1} {k + 1} {'+' if s > 0 else '-'}")
    return EXIT_OK


def cmd_signature_eq(args, out):
    P, Q = io.read_points(args.first), io.read_points(args.second)
    if args.mode == "signature":
        equal = same_signature(P, Q)
        out.kv(mode=args.mode, equal=equal)
    else:
        f = same_order_type(P, Q)
        equal = f is not None
        out.kv(mode=args.mode, equal=equal, bijection=_one_based(f) if equal else None)
    return EXIT_OK if equal else EXIT_FAIL


def cmd_decompose(args, out):
    P = io.read_points(args.points)
    tree = decompose(P)
    if tree is None:
        out.kv(decomposable=False)
        return EXIT_FAIL
    out.kv(decomposable=True)
    out.raw(f"tree={format_tree(tree)}")
    return EXIT_OK


def cmd_psi(args, out):
    if args.action == "encode":
        P = io.read_points(args.file)
        _emit(io.format_table(psi_encode(P)), args, out)
        return EXIT_OK
    if args.action == "decode":
        T = io.parse_table(io.read_text(args.file))
        ot = psi_decode(T)
        out.kv(n=ot.n, iota=iota_recover(T))
        for (i, j, k), s in zip(itertools.combinations(range(ot.n), 3), ot.signs):
            out.raw(f"{i + 1} {j + 1} {k + 1} {'+' if s > 0 else '-'}")
        return EXIT_OK
    P = io.read_points(args.file)
    T = psi_encode(P)
    ok = psi_decode(T) == P.order_type()
    out.kv(n=len(P), roundtrip=ok)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_phi(args, out):
    P = io.read_points(args.file)
    _emit(io.format_table(phi_encode(P)), args, out)
    return EXIT_OK


def cmd_check_consistency(args, out):
    P = io.read_points(args.points)
    T = io.parse_table(io.read_text(args.table))
    v = is_locally_consistent(P, T)
    if v is None:
        out.kv(consistent=True)
        return EXIT_OK
    out.kv(
        consistent=False,
        triple_a=_one_based(v.triple_a),
        triple_b=_one_based(v.triple_b),
        orientation_a=v.orientation_a,
        orientation_b=v.orientation_b,
    )
    return EXIT_FAIL


def cmd_build(args, out):
    budget = _budget(args)
    sets = [io.read_points(f) for f in args.inputs]
    cut = None
    if args.kind in ("product", "stack", "amplify") and len(sets) != 2:
        raise InvalidInput(f"build {args.kind} takes exactly two point-set files")
    if args.kind == "product":
        P = ramsey.product(sets[0], sets[1], budget)
    elif args.kind == "stack":
        P, cut = ramsey.stack_splitting(sets[0], sets[1])
    elif args.kind == "amplify":
        P, cut = ramsey.bipartite_amplifier(sets[0], sets[1], args.k or 2, budget, compact=args.compact)
    else:
        P = ramsey.ramsey_build(sets, budget, compact=args.compact)
    names = " ".join(Path(f).name for f in args.inputs)
    comments = [f"built-by: {args.kind} {names}" + (f" k={args.k or 2}" if args.kind == "amplify" else "")]
    if cut is not None:
        comments.append(f"cut: {cut}")
    text = io.format_points(P, comments)
    if args.out:
        io.write_text(text, args.out)
        out.kv(n=len(P), cut=cut)
    else:
        out.raw(text)
    return EXIT_OK


def cmd_verify(args, out):
    P = io.read_points(args.points)
    targets = [io.read_points(f) for f in args.targets]
    if args.kind == "arrow-point":
        k = args.k or len(targets)
        if k != len(targets):
            raise InvalidInput(f"--k {k} but {len(targets)} target sets")
        cex = ramsey.point_arrow_counterexample(P, targets, args.mode)
        out.kv(holds=cex is None, colorings=k ** len(P))
        if cex is not None:
            out.kv(counterexample=cex.colors)
        return EXIT_OK if cex is None else EXIT_FAIL
    k = args.k or 2
    Q = targets[0] if len(targets) == 1 else targets
    strategy = "search" if args.search else ("sampled" if args.trials else "exhaustive")
    rep = ramsey.verify_pair_arrow(P, Q, k, args.mode, strategy, seed=args.seed, trials=args.trials or 0)
    for line in rep.lines():
        out.raw(line)
    if rep.holds is False:
        return EXIT_FAIL
    return EXIT_OK


def cmd_adversary(args, out):
    P = io.read_points(args.points)
    col = ramsey.adversary_coloring(P, args.p, args.i)
    out.kv(p=args.p, i=args.i, tuples=len(col), colors_used=len(set(col.values())))
    for s, c in col.items():
        out.raw(" ".join(str(t + 1) for t in s) + f" {c}")
    return EXIT_OK


def cmd_refute(args, out):
    if args.points:
        R = io.read_points(args.points)
    elif args.regenerate:
        R = cons.find_five_point_witness()
    else:
        R = cons.five_point_witness()
    k = args.k or 2
    rep = cons.refute_monochromatic(R, k, strict=not args.control)
    out.kv(enumerated=rep.enumerated, consistent=rep.consistent)
    out.kv(k=k, witness=";".join(f"{io.format_number(p.x)},{io.format_number(p.y)}" for p in R))
    return EXIT_OK if rep.consistent == 0 else EXIT_FAIL


def cmd_search_predicate(args, out):
    P = io.read_points(args.points)
    T = cons.search_predicate(P, args.k or 2, args.budget, single_class=args.single_class)
    out.kv(found=T is not None)
    if T is None:
        return EXIT_FAIL
    _emit(io.format_table(T), args, out)
    return EXIT_OK


def cmd_search_tournament(args, out):
    P = io.read_points(args.points)
    T = cons.antisymmetric_search(P, args.budget)
    out.kv(found=T is not None)
    if T is None:
        return EXIT_FAIL
    _emit(io.format_table(T), args, out)
    return EXIT_OK


def cmd_lll(args, out):
    if args.action == "threshold":
        out.kv(n=args.n, k=lll.lll_threshold(args.n))
        return EXIT_OK
    if args.action == "sample":
        k = args.k or lll.lll_threshold(args.n)
        res = lll.moser_tardos(args.n, k, args.seed, args.max_resamples)
        out.kv(n=args.n, k=k, seed=args.seed, resamples=res.resamples, rigid=lll.is_rigid(res.function) if args.n <= 9 else None)
        _emit(io.format_pair_function(res.function), args, out)
        return EXIT_OK
    catalog = [io.read_points(f) for f in args.catalog]
    if not catalog:
        raise InvalidInput("lll synthesize needs at least one catalog file")
    k = args.k or lll.lll_threshold(max(4, len(catalog[0])))
    sp = lll.synthesize_predicate(catalog, k, args.seed, max_resamples=args.max_resamples)
    out.kv(classes=len(sp.functions), k=k, samples=sp.samples_drawn)
    for f, cid in zip(args.catalog, sp.classes):
        P = io.read_points(f)
        ok = is_locally_consistent(P, sp.table(P)) is None
        out.kv(file=Path(f).name, class_id=cid, consistent=ok)
    if args.out:
        base = Path(args.out)
        base.mkdir(parents=True, exist_ok=True)
        for cid, f in enumerate(sp.functions):
            io.write_text(io.format_pair_function(f), base / f"class_{cid:03d}.pf")
    return EXIT_OK


def cmd_gen_corpus(args, out):
    spec = CorpusSpec(args.count, args.min_size, args.max_size, args.generator, args.seed)
    sets = generate(spec)
    base = Path(args.out) if args.out else None
    if base is not None:
        base.mkdir(parents=True, exist_ok=True)
    out.kv(generator=spec.generator, count=len(sets), seed=spec.seed)
    for idx, P in enumerate(sets):
        text = io.format_points(P, [f"built-by: gen-corpus {spec.generator} seed={spec.seed} index={idx}"])
        if base is None:
            out.raw(text)
        else:
            path = base / f"{spec.generator}_{idx:04d}.pts"
            io.write_text(text, path)
            out.kv(file=path.name, n=len(P))
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-points", type=int, default=100_000)
    common.add_argument("--budget-depth", type=int, default=6)
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--mode", choices=ramsey.MODES, default="signature")
    strat = common.add_mutually_exclusive_group()
    strat.add_argument("--exhaustive", action="store_true")
    strat.add_argument("--trials", type=int, default=None)
    strat.add_argument("--search", action="store_true", help="complete backtracking search for a bad coloring")
    common.add_argument("--out", default=None)

    parser = argparse.ArgumentParser(prog="ordertypes", description="Exact order-type tools.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=func)
        return p

    add("ordertype", cmd_ordertype, help="triple orientations").add_argument("points")
    p = add("signature-eq", cmd_signature_eq, help="compare two sets by signature or order type")
    p.add_argument("first")
    p.add_argument("second")
    add("decompose", cmd_decompose, help="splitting tree or failure").add_argument("points")

    p = add("psi", cmd_psi, help="dual-arrangement predicate")
    p.add_argument("action", choices=("encode", "decode", "roundtrip"))
    p.add_argument("file")
    p = add("phi", cmd_phi, help="wheel-set predicate")
    p.add_argument("action", choices=("encode",))
    p.add_argument("file")

    p = add("check-consistency", cmd_check_consistency, help="local consistency of a table on a set")
    p.add_argument("points")
    p.add_argument("table")

    p = add("build", cmd_build, help="constructions")
    p.add_argument("kind", choices=("product", "stack", "amplify", "ramsey"))
    p.add_argument("inputs", nargs="+")
    p.add_argument("--compact", action="store_true", help="pigeonhole sets for targets of size <= 2")

    p = add("verify", cmd_verify, help="arrow relations")
    p.add_argument("kind", choices=("arrow-point", "arrow-pair"))
    p.add_argument("points")
    p.add_argument("targets", nargs="+")

    p = add("adversary-color", cmd_adversary, help="orientation coloring of p-tuples")
    p.add_argument("points")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--i", type=int, default=1)

    p = add("refute-5pt", cmd_refute, help="single-class tables on the five-point witness")
    p.add_argument("--points", default=None, help="use this 5-point set instead of the frozen witness")
    p.add_argument("--regenerate", action="store_true", help="re-run the grid search for the witness")
    p.add_argument("--control", action="store_true", help="skip the witness-shape check")

    p = add("search-predicate", cmd_search_predicate, help="first locally consistent table")
    p.add_argument("points")
    p.add_argument("--single-class", action="store_true")
    p.add_argument("--budget", type=int, default=cons.DEFAULT_SEARCH_BUDGET)

    p = add("search-tournament", cmd_search_tournament, help="first locally consistent tournament")
    p.add_argument("points")
    p.add_argument("--budget", type=int, default=cons.DEFAULT_SEARCH_BUDGET)

    p = add("lll", cmd_lll, help="collision-free pair functions")
    p.add_argument("action", choices=("threshold", "sample", "synthesize"))
    p.add_argument("catalog", nargs="*")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--max-resamples", type=int, default=lll.DEFAULT_MAX_RESAMPLES)

    p = add("gen-corpus", cmd_gen_corpus, help="seeded point-set corpora")
    p.add_argument("--generator", choices=GENERATORS, default="random-grid")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--min-size", type=int, default=3)
    p.add_argument("--max-size", type=int, default=8)
    return parser


def run(argv=None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    out = Reporter(stdout)
    try:
        return args.func(args, out)
    except InvalidInput as exc:
        _diag(f"error: {exc}")
        return EXIT_INVALID
    except BudgetError as exc:
        _diag(f"budget exceeded: {exc}")
        return EXIT_BUDGET


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
