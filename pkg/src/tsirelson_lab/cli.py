"""Command-line front end.

Every invocation writes exactly one JSON document to stdout.  Exit codes:
0 when everything checked passes, 1 when a verification counterexample was
found, 2 on malformed input (the document then carries an ``error`` field and
a diagnostic goes to stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .core import (
    TsirelsonError,
    ZeroVectorError,
    format_rational,
    format_vector,
    parse_index_set,
    parse_vector,
)
from .harness import (
    SCHEMA,
    CorpusSpec,
    compare_oracle,
    counterexample_json,
    generate_corpus,
    run_isometry_suite,
    run_lemma_suite,
)
from .isometry import (
    NormCache,
    check_isometry,
    format_map,
    has_isometry_form,
    oddness_check,
    parse_map,
)
from .norm import (
    BRUTE_FORCE_SUPPORT_LIMIT,
    NormContext,
    brute_force_norm,
    norm_iterates,
    norm_with_witness,
    parse_theta,
    tsirelson_norm,
    witness_to_json,
)
from .schreier import (
    decompose,
    enumerate_members,
    greedy_maximal,
    is_member,
    parse_ordinal,
)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _context(args) -> NormContext:
    return NormContext(parse_theta(args.theta), parse_ordinal(args.alpha))


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return value


def _doc(**fields) -> dict:
    return {"schema": SCHEMA, **fields}


# -- commands -----------------------------------------------------------------

def run_norm(args):
    ctx = _context(args)
    x = parse_vector(args.vec)
    out = _doc(theta=format_rational(ctx.theta), alpha=str(ctx.alpha), vec=format_vector(x))
    if args.witness:
        if x.is_zero():
            raise ZeroVectorError("the zero vector has no witness")
        value, witness = norm_with_witness(x, ctx)
        out["norm"] = format_rational(value)
        out["witness"] = witness_to_json(witness, x, ctx)
    else:
        out["norm"] = format_rational(tsirelson_norm(x, ctx))
    if args.iterates is not None:
        out["iterates"] = [format_rational(v) for v in norm_iterates(x, ctx, args.iterates)]
    return out, EXIT_OK


def run_schreier(args):
    alpha = parse_ordinal(args.alpha)
    out = _doc(alpha=str(alpha), query=args.query)
    if args.query == "member":
        F = parse_index_set(args.set)
        d = decompose(F, alpha) if F and not alpha.is_zero else None
        out["set"] = list(F)
        out["member"] = is_member(F, alpha)
        out["decomposition"] = None if d is None else {
            "order": str(d.order), "blocks": [list(b) for b in d.blocks]}
    elif args.query == "enum":
        members = enumerate_members(alpha, args.max)
        out["max"] = args.max
        out["count"] = len(members)
        out["members"] = [list(F) for F in members]
    else:
        if args.start < 1:
            raise TsirelsonError("--start must be a positive integer")
        out["start"] = args.start
        out["set"] = list(greedy_maximal(args.start, alpha))
    return out, EXIT_OK


def run_isometry(args):
    ctx = _context(args)
    m = parse_map(args.map)
    extra = [parse_vector(v) for v in args.vec or []]
    corpus = extra if args.no_corpus else extra + generate_corpus(_corpus_spec(args), ctx)
    if not corpus:
        raise TsirelsonError("nothing to check: give --vec or drop --no-corpus")
    report = check_isometry(m, corpus, ctx, NormCache(ctx))
    out = _doc(
        theta=format_rational(ctx.theta), alpha=str(ctx.alpha), map=format_map(m),
        admissible_form=has_isometry_form(m, ctx), odd=oddness_check(m),
        status=report.status, pairs_checked=report.pairs_checked,
        counterexample=None if report.passed else counterexample_json(report.counterexample, format_map(m)),
    )
    return out, EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


def run_verify(args):
    ctx = _context(args)
    if args.suite == "oracle":
        report = compare_oracle(ctx, args.bound)
    else:
        corpus = generate_corpus(_corpus_spec(args), ctx)
        suite = run_lemma_suite if args.suite == "lemmas" else run_isometry_suite
        report = suite(ctx, corpus)
    return report.to_dict(include_elapsed=False), EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


def run_oracle(args):
    ctx = _context(args)
    x = parse_vector(args.vec)
    if len(x) > BRUTE_FORCE_SUPPORT_LIMIT:
        raise TsirelsonError(f"brute force is limited to support size {BRUTE_FORCE_SUPPORT_LIMIT}")
    engine, oracle = tsirelson_norm(x, ctx), brute_force_norm(x, ctx)
    out = _doc(theta=format_rational(ctx.theta), alpha=str(ctx.alpha), vec=format_vector(x),
               norm=format_rational(engine), brute_force=format_rational(oracle), agree=engine == oracle)
    return out, EXIT_OK if engine == oracle else EXIT_COUNTEREXAMPLE


def _corpus_spec(args) -> CorpusSpec:
    return CorpusSpec(max_index=args.max_index, max_support=args.max_support,
                      count=args.count, seed=args.seed)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tsirelson-lab", description="Exact norms, Schreier families and isometry checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def context(p):
        p.add_argument("--theta", required=True, help="rational in (0, 1/2], e.g. 1/2")
        p.add_argument("--alpha", required=True, help="ordinal: n, w, or w+n")

    def corpus(p):
        p.add_argument("--seed", type=_nonnegative, default=42)
        p.add_argument("--count", type=_nonnegative, default=16, help="random corpus vectors")
        p.add_argument("--max-index", type=_nonnegative, default=8)
        p.add_argument("--max-support", type=_nonnegative, default=4)

    for name in ("norm", "witness"):
        p = sub.add_parser(name, help="norm of a vector" if name == "norm" else "norm with a certificate tree")
        context(p)
        p.add_argument("--vec", required=True, help='sparse vector, e.g. "3:1,4:-1/2"')
        p.add_argument("--iterates", type=_nonnegative, metavar="N", help="also report ||x||_0..||x||_N")
        if name == "norm":
            p.add_argument("--witness", action="store_true")
        p.set_defaults(func=run_norm, witness=name == "witness")

    p = sub.add_parser("schreier", help="Schreier family queries")
    q = p.add_subparsers(dest="query", required=True, parser_class=_Parser)
    m = q.add_parser("member")
    m.add_argument("--alpha", required=True)
    m.add_argument("--set", required=True, help="comma-separated increasing integers")
    e = q.add_parser("enum")
    e.add_argument("--alpha", required=True)
    e.add_argument("--max", type=_nonnegative, required=True)
    x = q.add_parser("maximal")
    x.add_argument("--alpha", required=True)
    x.add_argument("--start", type=_nonnegative, required=True)
    p.set_defaults(func=run_schreier)

    p = sub.add_parser("isometry", help="check a coordinate map on the seeded corpus")
    context(p)
    p.add_argument("--map", required=True, help='e.g. "perm=2,1;signs=-1;default=+1"')
    p.add_argument("--vec", action="append", help="extra corpus vector (repeatable)")
    p.add_argument("--no-corpus", action="store_true", help="check only the --vec vectors")
    corpus(p)
    p.set_defaults(func=run_isometry)

    p = sub.add_parser("verify", help="run a verification suite")
    context(p)
    p.add_argument("--suite", required=True, choices=("lemmas", "isometry", "oracle"))
    p.add_argument("--bound", type=_nonnegative, default=5, help="support bound for the oracle suite")
    corpus(p)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("oracle", help="compare the engine with brute force on one vector")
    context(p)
    p.add_argument("--vec", required=True)
    p.set_defaults(func=run_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out, code = args.func(args)
    except (UsageError, TsirelsonError) as exc:
        message = str(exc)
        print(f"error: {message}", file=sys.stderr)
        print(json.dumps(_doc(error=message)))
        return EXIT_INPUT
    print(json.dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
