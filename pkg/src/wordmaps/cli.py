"""Command line front end: ``python -m wordmaps <command> ...``.

Exit status is 0 when every check passes, 1 when a violation is found and 2
on errors (bad input, budget exceeded, precondition failures).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .counting import DEFAULT_BUDGET, BudgetExceeded, distribution
from .groups import GroupError, evaluate, parse_group
from .normal_form import collect, nf_to_word, reduce_mod_R, render
from .reduction import canonicalize
from .verification import dedupe_by_collection, g_equivalent, run_census, verify_canonicalization
from .words import WordSyntaxError, enumerate_words, parse_word, random_word


def _common(p: argparse.ArgumentParser, group=True, word=True):
    if group:
        p.add_argument("--group", required=True, help='group spec, e.g. "dihedral:8"')
    if word:
        p.add_argument("--word", required=True, help='word, e.g. "x1^2*[x1,x2]"')
    p.add_argument("--rank", type=int, help="number of variables (default: largest index used)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wordmaps", description="Word maps on finite groups of class 2.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a word at a tuple of elements")
    _common(p)
    p.add_argument("--tuple", required=True, help="comma separated element indices or labels")

    p = sub.add_parser("collect", help="collected form modulo gamma_3")
    _common(p, group=False)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)

    p = sub.add_parser("canon", help="canonical word and change of variables")
    _common(p, group=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("count", help="N(G, w = c) and P(G, w = c)")
    _common(p)
    p.add_argument("--value", default="0", help="target element (index or label, default identity)")

    p = sub.add_parser("dist", help="full distribution c -> N(G, w = c)")
    _common(p)

    p = sub.add_parser("equiv", help="G-equivalence of two words")
    _common(p)
    p.add_argument("--word2", required=True)

    p = sub.add_parser("verify", help="canonicalise and check equivalence and the count bound")
    _common(p)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)

    p = sub.add_parser("census", help="probability bound over many groups and words")
    _common(p, group=False, word=False)
    p.add_argument("--group", action="append", required=True)
    p.add_argument("--word", action="append", help="explicit words (repeatable)")
    p.add_argument("--max-length", type=int, default=2, help="syllables for enumerated words")
    p.add_argument("--max-exp", type=int, default=2)
    p.add_argument("--random", type=int, help="sample this many random words instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-canonical", action="store_true")
    p.add_argument("--timing", action="store_true", help="include per-row runtimes")
    return ap


def _element(G, token: str) -> int:
    token = token.strip()
    if token in G.labels:
        return G.labels.index(token)
    return int(token)


def _emit(args, payload, text: str | None = None):
    if args.format == "json" or text is None:
        out = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    else:
        out = text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def run(args) -> int:
    cmd = args.command
    if cmd == "census":
        groups = [parse_group(g) for g in args.group]
        rank = args.rank or 2
        if args.word:
            words = [parse_word(w, rank) for w in args.word]
        elif args.random:
            rng = random.Random(args.seed)
            words = [random_word(rng, rank, args.max_length, args.max_exp) for _ in range(args.random)]
        else:
            exps = range(-args.max_exp, args.max_exp + 1)
            words = dedupe_by_collection(enumerate_words(rank, args.max_length, exps))
        report = run_census(groups, words, budget=args.budget, jobs=args.jobs, canonical=not args.no_canonical)
        if args.format == "csv":
            _emit(args, report.to_csv(args.timing))
        elif args.format == "json":
            _emit(args, report.to_json(args.timing))
        else:
            _emit(args, {}, report.to_text())
        if report.errors:
            return 2
        return 0 if report.ok else 1

    w = parse_word(args.word, args.rank)
    if cmd == "collect":
        nf = collect(w)
        if args.p and args.m:
            nf = reduce_mod_R(nf, args.p, args.m)
        _emit(args, {"word": str(w), "alpha": list(nf.alpha),
                     "beta": {f"{i},{j}": v for (i, j), v in nf.beta_dict().items()},
                     "modulus": nf.modulus, "normal_form": render(nf),
                     "expanded": str(nf_to_word(nf))}, render(nf))
        return 0
    if cmd == "canon":
        cw = canonicalize(w, args.p, args.m)
        _emit(args, cw.to_json(), str(cw))
        return 0

    G = parse_group(args.group)
    if cmd == "eval":
        values = [_element(G, t) for t in args.tuple.split(",")]
        w = w.with_rank(max(w.rank, len(values)))
        g = evaluate(w, G, values)
        _emit(args, {"value": g.index, "label": G.labels[g.index]}, G.labels[g.index])
        return 0
    if cmd == "count":
        c = _element(G, args.value)
        d = distribution(G, w, args.budget, args.jobs)
        payload = {"group": G.name, "word": str(w), "rank": w.rank, "value": G.labels[c],
                   "N": d.count(c), "total": d.total, "P": _frac(d.probability(c))}
        _emit(args, payload, f"N={d.count(c)} P={_frac(d.probability(c))}")
        return 0
    if cmd == "dist":
        d = distribution(G, w, args.budget, args.jobs)
        if args.format == "csv":
            lines = ["element,count"] + [f"{G.labels[c]},{int(v)}" for c, v in enumerate(d.counts)]
            _emit(args, "\n".join(lines))
        else:
            payload = d.to_json(w)
            text = "\n".join(f"{k}\t{v}" for k, v in payload["counts"].items())
            _emit(args, payload, text + f"\nP(w=1)={payload['probability_identity']}")
        return 0
    if cmd == "equiv":
        w2 = parse_word(args.word2, args.rank)
        eq = g_equivalent(G, w, w2, args.budget)
        _emit(args, {"group": G.name, "word": str(w), "word2": str(w2), "equivalent": eq}, str(eq).lower())
        return 0
    if cmd == "verify":
        rep = verify_canonicalization(G, w, args.p, args.m, args.budget)
        _emit(args, rep.to_json(), f"{rep.canonical}\tpassed={rep.passed}")
        return 0 if rep.passed else 1
    raise AssertionError(cmd)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (WordSyntaxError, GroupError, BudgetExceeded, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
