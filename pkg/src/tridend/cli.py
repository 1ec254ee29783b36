"""Command-line front end: ``tridend <group> <command> [options]``.

Exit codes: 0 success, 1 verification counterexample, 2 usage error,
3 convention ledger missing or unresolved.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import magnus, seqalg, treekit, trialg, verify, wqsurj
from .errors import TridendError, UnresolvedConventionError
from .trialg import BASES, TriSeries

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LEDGER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(args, payload, text_lines):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _load_conventions(args) -> magnus.Conventions:
    return magnus.ConventionLedger.load(args.ledger).require()


def _matrix_text(m) -> list:
    return [[seqalg.rational_text(x) for x in row] for row in m]


# -- trees ---------------------------------------------------------------------------

def cmd_trees_enum(args):
    trees = treekit.enumerate_trees(args.degree, allow_large=args.allow_large)
    codes = [treekit.encode(t) for t in trees]
    _emit(args, {"degree": args.degree, "trees": codes}, codes)
    return EXIT_OK


def _stats_orientation(args):
    if args.orientation:
        return args.orientation
    if Path(args.ledger).exists():
        return _load_conventions(args).descent_orientation
    return treekit.AS_PRINTED


def cmd_trees_stats(args):
    orientation = _stats_orientation(args)
    if args.tree:
        trees = [treekit.parse(args.tree)]
    elif args.degree is not None:
        trees = treekit.enumerate_trees(args.degree)
    else:
        raise UsageError("trees stats needs --tree or --degree")
    rows = []
    for t in trees:
        st = treekit.descent_stats(t, orientation)
        rows.append({"tree": treekit.encode(t), "degree": treekit.degree(t),
                     "weak": st.weak, "strict": st.strict,
                     "binary": treekit.is_binary(t),
                     "closure_size": len(treekit.contraction_closure(t))})
    lines = [f"{r['tree']}  degree={r['degree']} weak={r['weak']} strict={r['strict']} "
             f"closure={r['closure_size']}" for r in rows]
    _emit(args, {"orientation": orientation, "stats": rows}, lines)
    return EXIT_OK


# -- surjections ------------------------------------------------------------------------

def cmd_surj_enum(args):
    words = [wqsurj.encode(f) for f in wqsurj.enumerate_surjections(args.n)]
    _emit(args, {"n": args.n, "surjections": words}, words)
    return EXIT_OK


def _level_orientation(args):
    if Path(args.ledger).exists():
        return _load_conventions(args).level_orientation
    return wqsurj.ROOT_DEEPEST


def cmd_surj_tree(args):
    f = wqsurj.parse(args.word)
    orientation = _level_orientation(args)
    lt = wqsurj.to_leveled_tree(f, orientation)
    blocks = wqsurj.split_blocks(f, orientation)
    std = [tuple(wqsurj.standardize(b)) if b else () for b in blocks]
    ds = wqsurj.descents(f)

    def fmt(b):
        return "(" + ",".join(map(str, b)) + ")"

    payload = {
        "word": wqsurj.encode(f),
        "blocks": [list(b) for b in blocks],
        "standardized_blocks": [list(b) for b in std],
        "shape": treekit.encode(lt.shape),
        "levels": [{"vertex": list(p), "level": lv} for p, lv in lt.vertex_levels],
        "descents": {"strict": ds.strict, "weak": ds.weak},
        "round_trip": wqsurj.from_leveled_tree(lt) == f,
    }
    lines = [
        f"word: {payload['word']}",
        "blocks: " + ",".join(fmt(b) for b in blocks),
        "standardized: " + ",".join(fmt(b) for b in std),
        f"shape: {payload['shape']}",
        "levels: " + " ".join(f"{'.'.join(map(str, p)) or 'root'}={lv}" for p, lv in lt.vertex_levels),
        f"descents: strict={ds.strict} weak={ds.weak}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


# -- algebra ---------------------------------------------------------------------------

_BINARY_OPS = {
    "<": trialg.prec, "prec": trialg.prec,
    ">": trialg.succ, "succ": trialg.succ,
    ".": trialg.dot, "dot": trialg.dot,
    "*": trialg.star, "star": trialg.star,
    "preceq": trialg.preceq, "succeq": trialg.succeq,
    "diamond": trialg.postlie_diamond,
    "rhd": lambda x, y: trialg.prelie(x, y, "rhd"),
    "lhd": lambda x, y: trialg.prelie(x, y, "lhd"),
    "urhd": lambda x, y: trialg.prelie(x, y, "urhd"),
    "ulhd": lambda x, y: trialg.prelie(x, y, "ulhd"),
}


def _operand(text, basis, truncation):
    """A basis element, ``1`` for the unit, or a path to a series JSON file."""
    if text == "1":
        return TriSeries.unit(basis, truncation)
    path = Path(text)
    if text.endswith(".json") and path.exists():
        return TriSeries.from_json(path.read_text())
    return TriSeries.basis_element(basis, basis.parse(text), truncation=truncation)


def _series_lines(x: TriSeries):
    lines = []
    if x.scalar:
        lines.append(f"{trialg.fraction_text(x.scalar)}  1")
    for b, c in x.items():
        lines.append(f"{trialg.fraction_text(c)}  {x.basis.encode(b)}")
    return lines or ["0"]


def cmd_algebra_mult(args):
    basis = BASES[args.basis]
    x = _operand(args.left, basis, args.truncation)
    y = _operand(args.right, basis, args.truncation)
    out = _BINARY_OPS[args.op](x, y)
    _emit(args, out.to_dict(), _series_lines(out))
    return EXIT_OK


# -- magnus -------------------------------------------------------------------------------

def cmd_magnus_closed(args):
    conv = _load_conventions(args)
    res = magnus.closed_formula(args.variant, args.order, BASES[args.basis], conv)
    _emit(args, res.payload.to_dict(), _series_lines(res.payload))
    return EXIT_OK


def cmd_magnus_prelie(args):
    res = magnus.prelie_magnus(args.flavor, args.order, BASES[args.basis])
    _emit(args, res.payload.to_dict(), _series_lines(res.payload))
    return EXIT_OK


def cmd_magnus_discrete(args):
    conv = _load_conventions(args)
    a = seqalg.MatSeq.from_json(Path(args.input).read_text())
    upto = a.horizon if args.upto is None else args.upto
    if upto > a.horizon:
        raise UsageError(f"--upto {upto} exceeds the input horizon {a.horizon}")
    a = a.prefix(upto)
    if args.path == "fast":
        graded = magnus.discrete_mps_sequence(a, args.order, args.variant, conv)
        values = [graded.at(N) for N in range(upto + 1)]
    else:
        values = [magnus.discrete_mps(a, N, args.order, args.variant, conv, path="diagonal")
                  for N in range(upto + 1)]
    totals = []
    for v in values:
        acc = None
        for n in sorted(v):
            acc = v[n] if acc is None else acc + v[n]
        totals.append(acc)
    payload = {
        "variant": args.variant,
        "order": args.order,
        "total": [_matrix_text(m) for m in totals],
        "by_degree": {str(n): [_matrix_text(v[n]) for v in values]
                      for n in range(1, args.order + 1)},
    }
    lines = []
    for N, v in enumerate(values):
        for n in sorted(v):
            lines.append(f"N={N} degree={n} {json.dumps(_matrix_text(v[n]))}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_magnus_resolve(args):
    degrees = tuple(int(d) for d in args.degrees.split(","))
    ledger = magnus.resolve_conventions(degrees, args.seed)
    ledger.save(args.ledger)
    conv = ledger.conventions
    lines = [f"frozen: {k}={v}" for k, v in vars(conv).items()]
    lines.append(f"written to {args.ledger}")
    _emit(args, ledger.to_dict(), lines)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def cmd_verify_suite(args):
    ledger = magnus.ConventionLedger.load(args.ledger) if Path(args.ledger).exists() else None
    status = EXIT_OK
    results = []
    for rep in verify.suite(args.max_degree, args.max_n, args.seed, ledger, args.triples):
        results.append(rep)
        if args.format == "text":
            print(f"{'PASS' if rep.ok else 'FAIL'}  {rep.name}  ({len(rep.checks)} cases)")
        if not rep.ok:
            status = EXIT_FAIL
            if args.format == "text":
                print(f"  counterexample: {rep.counterexample!r}")
                print(f"  reproduce: tridend verify suite --max-degree {args.max_degree} "
                      f"--max-n {args.max_n} --seed {args.seed} --triples {args.triples}")
    if args.format == "json":
        print(json.dumps([{"name": r.name, "ok": r.ok, "cases": len(r.checks),
                           "counterexample": None if r.ok else repr(r.counterexample)}
                          for r in results], indent=2))
    return status


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--ledger", default=magnus.DEFAULT_LEDGER,
                        help="convention ledger path (default: %(default)s)")
    common.add_argument("--seed", type=int, default=0, help="SplitMix64 seed")

    p = _Parser(prog="tridend", description="Tridendriform algebras and discrete Magnus expansions")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group, name, fn, help_):
        q = group.add_parser(name, parents=[common], help=help_)
        q.set_defaults(fn=fn)
        return q

    trees = groups.add_parser("trees", help="planar reduced trees").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    q = sub(trees, "enum", cmd_trees_enum, "list all trees of a degree")
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--allow-large", action="store_true", help="lift the degree cap")
    q = sub(trees, "stats", cmd_trees_stats, "descent statistics")
    q.add_argument("--tree")
    q.add_argument("--degree", type=int)
    q.add_argument("--orientation", choices=treekit.ORIENTATIONS)

    surj = groups.add_parser("surj", help="surjections").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    q = sub(surj, "enum", cmd_surj_enum, "list ST_n")
    q.add_argument("--n", type=int, required=True)
    q = sub(surj, "tree", cmd_surj_tree, "leveled tree of a surjection")
    q.add_argument("--word", required=True)

    alg = groups.add_parser("algebra", help="tridendriform products").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    q = sub(alg, "mult", cmd_algebra_mult, "multiply two elements")
    q.add_argument("--basis", choices=sorted(BASES), default="trees")
    q.add_argument("--op", choices=sorted(_BINARY_OPS), default="*")
    q.add_argument("--left", required=True, help="element, '1', or series .json file")
    q.add_argument("--right", required=True)
    q.add_argument("--truncation", type=int, default=8)

    mag = groups.add_parser("magnus", help="Magnus elements").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    q = sub(mag, "closed", cmd_magnus_closed, "descent-weighted closed formula")
    q.add_argument("--variant", choices=(magnus.STRICT, magnus.WEAK), default=magnus.STRICT)
    q.add_argument("--order", type=int, default=4)
    q.add_argument("--basis", choices=sorted(BASES), default="trees")
    q = sub(mag, "prelie", cmd_magnus_prelie, "pre-Lie Bernoulli recursion")
    q.add_argument("--flavor", choices=("rhd", "urhd"), default="rhd")
    q.add_argument("--order", type=int, default=4)
    q.add_argument("--basis", choices=sorted(BASES), default="trees")
    q = sub(mag, "discrete", cmd_magnus_discrete, "Omega(a)(N) for a matrix sequence")
    q.add_argument("--input", required=True, help="MatSeq JSON file")
    q.add_argument("--order", type=int, default=3)
    q.add_argument("--upto", type=int, help="largest N (default: input horizon)")
    q.add_argument("--variant", choices=(magnus.STRICT, magnus.WEAK), default=magnus.STRICT)
    q.add_argument("--path", choices=("fast", "diagonal"), default="fast")
    q = sub(mag, "resolve", cmd_magnus_resolve, "freeze the drawing conventions")
    q.add_argument("--degrees", default="2,3")

    ver = groups.add_parser("verify", help="verification battery").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    q = sub(ver, "suite", cmd_verify_suite, "run every invariant check")
    q.add_argument("--max-degree", type=int, default=4)
    q.add_argument("--max-n", type=int, default=4)
    q.add_argument("--triples", type=int, default=20)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnresolvedConventionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LEDGER
    except (TridendError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
