"""Command-line front end: ``kakeya construct|verify|bounds|search|polycheck|ifset``.

Exit codes: 0 success, 1 verification failure, 2 construction gave up,
3 I/O or parse error, 4 parameter error, 5 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import bounds as B
from . import constructions as C
from . import polymethod as PM
from . import verify as V
from .errors import AttemptsExhausted, BudgetExhausted, KakeyaError, ParseError
from .gf import field_new
from .linalg import PointSet
from .rng import DEFAULT_SEED

EXIT_OK, EXIT_FAIL, EXIT_GAVE_UP, EXIT_IO, EXIT_PARAM, EXIT_BUDGET = 0, 1, 2, 3, 4, 5

CONSTRUCT_SCHEMA = "construct-summary v1"
VERIFY_SCHEMA = "verify-report v1"
SEARCH_SCHEMA = "search-result v1"
IFSET_SCHEMA = "ifset-table v1"


def _json_default(obj):
    if isinstance(obj, (Fraction, B.SqrtExpr)):
        return B.fmt(obj)
    if hasattr(obj, "item"):  # numpy scalar
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def int_list(text: str) -> list[int]:
    """``"2,3,5"`` or ``"1-4"`` or a mix like ``"2,4-6"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    return out


# ------------------------------------------------------------ subcommands

def build_construction(args) -> C.ConstructionResult:
    F = field_new(args.q)
    cid, n = args.id, args.n
    if cid == "missing-digit":
        return C.missing_digit(n, F)
    if cid == "quadratic":
        return C.quadratic_rank1(n, F)
    if cid == "value-set":
        f = C.FunctionTable.parse(F, args.f) if args.f else C.square(F)
        return C.if_construction(f, n, F)
    if cid == "lift":
        n1 = n - args.r + 1
        if n1 < 1:
            raise KakeyaError(f"lift needs n >= r, got n={n}, r={args.r}")
        base = C.planar_rank1(F) if n1 == 2 else C.missing_digit(n1, F).set
        return C.lift(base, n, args.r, 1)
    if cid == "final-upper":
        return C.final_upper(n, args.r, F)
    if cid == "universal":
        if args.k is None:
            raise KakeyaError("universal needs --k")
        return C.universal_set(n, args.k, F)
    if cid == "kakeya-universal":
        return C.kakeya_from_universal(n, args.r, F)
    if cid == "random-rotation":
        return C.random_rotation_rank1(n, F, seed=args.seed, max_attempts=args.max_attempts)
    if cid == "product":
        n1 = args.n1 if args.n1 is not None else n // 2
        if not 1 <= n1 < n:
            raise KakeyaError(f"product needs 1 <= n1 < n, got n1={n1}")
        return C.product_construction(C.missing_digit(n1, F).set, C.missing_digit(n - n1, F).set, 1)
    raise KakeyaError(f"unknown construction id {cid!r}")  # pragma: no cover - argparse choices


def cmd_construct(args) -> int:
    t0 = time.perf_counter()
    res = build_construction(args)
    if args.out:
        res.set.save(args.out)
    summary = {"schema": CONSTRUCT_SCHEMA, "seed": args.seed, "output": args.out}
    summary.update(res.summary())
    if args.timing:
        summary["timing_s"] = round(time.perf_counter() - t0, 6)
    _emit(dumps(summary), args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    K = PointSet.load(args.file)
    if args.universal is not None:
        rep = V.is_universal(K, args.universal, mode=args.mode, samples=args.samples, seed=args.seed)
        target = {"universal_k": args.universal}
    else:
        if args.r is None:
            raise KakeyaError("verify needs --r or --universal")
        rep = V.is_kakeya(K, args.r, mode=args.mode, samples=args.samples, seed=args.seed,
                          threads=args.threads)
        target = {"rank": args.r}
    out = {"schema": VERIFY_SCHEMA, "q": K.field.q, "n": K.n, "size": K.card, **target}
    out.update(rep.to_dict())
    if args.timing:
        out["timing_s"] = round(time.perf_counter() - t0, 6)
    _emit(dumps(out), args.json)
    return EXIT_OK if rep.no_failure else EXIT_FAIL


def cmd_bounds(args) -> int:
    reports = B.atlas(args.q, args.n, args.r, build_limit=args.build_limit)
    if not reports:
        raise KakeyaError("no valid (q, n, r) combination in the requested ranges")
    text = B.atlas_csv(reports) if args.format == "csv" else B.atlas_json(reports)
    _emit(text, args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    t0 = time.perf_counter()
    F = field_new(args.q)
    try:
        res = V.min_kakeya(args.n, args.r, F, budget=args.budget)
    except BudgetExhausted as exc:
        out = {"schema": SEARCH_SCHEMA, "q": args.q, "n": args.n, "r": args.r,
               "status": "budget-exhausted", "interval": [exc.lower, exc.best_found],
               "nodes": exc.nodes}
        _emit(dumps(out), args.json)
        return EXIT_BUDGET
    cert = V.is_kakeya(res.set, args.r)
    out = {"schema": SEARCH_SCHEMA, "status": "exact", "certificate_verified": cert.verified}
    out.update(res.to_dict())
    if args.timing:
        out["timing_s"] = round(time.perf_counter() - t0, 6)
    _emit(dumps(out), args.json)
    return EXIT_OK if cert.verified else EXIT_FAIL


def cmd_polycheck(args) -> int:
    rep = PM.polycheck(field_new(args.q), trials=args.trials, seed=args.seed)
    _emit(dumps(rep.to_dict()), args.json)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_ifset(args) -> int:
    F = field_new(args.q)
    f = C.FunctionTable.parse(F, args.f) if args.f else C.quadratic_function(F)
    rows = []
    for t in range(F.q):
        prof = V.class_profile(f, t)
        rows.append({"t": t, "size": prof.num_classes,
                     "class_shape": {str(k): v for k, v in prof.shape().items()},
                     "classes": [list(c) for c in prof.classes]})
    sizes = [r["size"] for r in rows]
    out = {"schema": IFSET_SCHEMA, "q": F.q, "function": f.name, "table": list(f.values),
           "rows": rows, "max_size": max(sizes), "min_size": min(sizes)}
    _emit(dumps(out), args.json)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kakeya", description="Kakeya sets over finite fields.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
        sp.add_argument("--threads", type=int, default=1)
        if seed:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    c = sub.add_parser("construct", help="build a construction and write it as pointset text")
    c.add_argument("--id", required=True, choices=C.CONSTRUCTION_IDS)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, default=1)
    c.add_argument("--k", type=int)
    c.add_argument("--n1", type=int, help="split point for the product construction")
    c.add_argument("--f", help="function for value-set, e.g. 'x^6+x^2'")
    c.add_argument("--max-attempts", type=int, default=32)
    c.add_argument("--out", help="pointset-text output path")
    common(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a pointset file for the Kakeya or universal property")
    v.add_argument("file")
    v.add_argument("--r", type=int)
    v.add_argument("--universal", type=int, metavar="K")
    v.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    v.add_argument("--samples", type=int, default=1000)
    common(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="bounds atlas over ranges of q, n, r")
    b.add_argument("--q", type=int_list, required=True)
    b.add_argument("--n", type=int_list, required=True)
    b.add_argument("--r", type=int_list, required=True)
    b.add_argument("--format", choices=("csv", "json"), default="json")
    b.add_argument("--out")
    b.add_argument("--build-limit", type=int, default=4096)
    common(b, seed=False)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("search", help="exact minimum Kakeya set by branch and bound")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--budget", type=int, default=10**6)
    common(s, seed=False)
    s.set_defaults(func=cmd_search)

    pc = sub.add_parser("polycheck", help="polynomial-method property batteries")
    pc.add_argument("--q", type=int, required=True)
    pc.add_argument("--trials", type=int, default=200)
    common(pc)
    pc.set_defaults(func=cmd_polycheck)

    i = sub.add_parser("ifset", help="value-set sizes |I_f(t)| and class profiles")
    i.add_argument("--q", type=int, required=True)
    i.add_argument("--f", help="function expression; default is the field's standard value-set function (x^2, x^3 or x^(q-2)+x^2)")
    common(i, seed=False)
    i.set_defaults(func=cmd_ifset)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AttemptsExhausted as exc:
        print(f"error: gave up after {exc.attempts} attempts "
              f"(best direction coverage {exc.best_coverage:.4f})", file=sys.stderr)
        return EXIT_GAVE_UP
    except BudgetExhausted as exc:
        print(f"error: search budget exhausted; minimum in [{exc.lower}, {exc.best_found}]", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KakeyaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
