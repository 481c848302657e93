"""Command line front end.

Every verb maps to one library entry point and prints JSON with sorted keys.
Exit status: 0 success, 1 verification failure, 2 usage or parameter
error, 3 a size cap or the integer range was exceeded. Errors are printed
to stderr as a JSON object.
"""

import argparse
import inspect
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import bounds, encoders, predicates, randomized, table, zqlinalg
from .errors import BadParams, IpencError, UnverifiedReduction
from .modmath import factorize

_ALIASES = {"OREQ": "OR_EQ", "OR-EQ": "OR_EQ"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ipenc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out=None, summary=None):
    if out:
        _write_atomic(out, _dumps(obj))
        if summary is not None:
            sys.stdout.write(_dumps(dict(summary, out=out)))
    else:
        sys.stdout.write(_dumps(obj))


def _predicate(args, required=True):
    if getattr(args, "table", None):
        return predicates.Predicate.from_json(_load(args.table))
    if not args.predicate:
        if required:
            raise BadParams("--predicate is required")
        return None
    pid = args.predicate.upper()
    pid = _ALIASES.get(pid, pid)
    if pid in ("MPOLY", "OR_EQ"):
        pq = args.pq or args.q
        return predicates.Predicate(pid, args.n, t=args.t, d=args.d, q=pq or 0)
    return predicates.Predicate(pid, args.n, t=args.t, d=args.d)


def _add_predicate_flags(p, table_flag=False):
    p.add_argument("--predicate", help="EQ, GT, NEQ, INDEX, DISJ, ETHR, THR, MPOLY, OR_EQ")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--pq", type=int, default=0,
                   help="alphabet modulus of MPOLY/OR_EQ when it differs from --q")
    if table_flag:
        p.add_argument("--table", help="predicate JSON file (any id, including TABLE)")


def _cmd_encode(args):
    P = _predicate(args)
    if args.q:
        m = factorize(args.q)
    elif P.id == "DISJ":
        m = None
    else:
        raise BadParams("--q is required (DISJ may use --k instead)")
    if P.id == "INDEX" and args.variant != "default":
        e = encoders.encode_index(P.n, m, variant=args.variant)
    else:
        e = encoders.build_encoding(P, m, k=args.k)
    data = e.to_json(P)
    summary = {"q": e.q, "factors": list(e.factors), "length": e.length,
               "provenance": e.provenance, "predicate": P.label()}
    _emit(data, args.out, summary)
    return 0


def _cmd_verify(args):
    data = _load(args.enc)
    P = _predicate(args, required=False)
    stored = predicates.Predicate.from_json(data["predicate"]) if "predicate" in data else None
    if P is None:
        if stored is None:
            raise BadParams("the encoding file names no predicate; pass --predicate")
        P = stored
    elif stored is not None and stored != P:
        raise BadParams(f"file encodes {stored.label()}, not {P.label()}")
    e = encoders.Encoding.from_json(data, predicate=P)
    report = encoders.verify(P, e, cap=args.cap)
    out = report.to_json()
    out.update(predicate=P.label(), q=e.q, length=e.length)
    _emit(out, args.out, {"ok": report.ok, "mismatches": len(report.mismatches)})
    return 0 if report.ok else 1


def _cmd_bound(args):
    P = _predicate(args, required=True)
    if not args.q:
        raise BadParams("--q is required")
    c = bounds.builtin_bound(P, factorize(args.q), cap=args.cap)
    _emit(c.to_json(), args.out, {"bound": c.bound, "method": c.method, "predicate": P.label()})
    return 0


def _cmd_minrank(args):
    P = _predicate(args)
    z = predicates.zero_pattern(P)
    rank, F = bounds.min_rank_search(z, args.p, cap=args.cap)
    out = {"predicate": P.label(), "p": args.p, "min_rank": rank, "matrix": F.to_json()}
    _emit(out, args.out, {"min_rank": rank})
    return 0


def _cmd_rank(args):
    F = zqlinalg.ZqMatrix.from_json(_load(args.matrix))
    if not args.factor:
        _emit({"p": args.p, "rank": zqlinalg.rank_mod_p(F, args.p)}, args.out, None)
        return 0
    fr = zqlinalg.factor_rank(F, args.p)
    if args.out:
        _write_atomic(args.out + ".U.json", _dumps(fr.U.to_json()))
        _write_atomic(args.out + ".V.json", _dumps(fr.V.to_json()))
        sys.stdout.write(_dumps({"p": args.p, "rank": fr.r,
                                 "U": args.out + ".U.json", "V": args.out + ".V.json"}))
    else:
        sys.stdout.write(_dumps({"p": args.p, "rank": fr.r, "U": fr.U.to_json(),
                                 "V": fr.V.to_json()}))
    return 0


def _cmd_reduce(args):
    if args.name:
        name = args.name
    elif args.src and args.dst:
        name = f"{args.src}=>{args.dst}"
    else:
        raise BadParams("give --name, or both --from and --to")
    key = predicates._norm_name(name)
    key = {"TABLE=>ANY": "INDEX=>ANY", "INDEX=>TABLE": "INDEX=>ANY"}.get(key, key)
    builder = predicates._BUILDERS.get(key)
    if builder is None:
        raise BadParams(f"unknown reduction {name!r}; known: {', '.join(predicates.BUILTIN_REDUCTIONS)}")
    given = {"n": args.n, "t": args.t, "d": args.d, "q": args.q, "m": args.m}
    params = {}
    for pname in inspect.signature(builder).parameters:
        if pname == "predicate":
            if not args.table:
                raise BadParams(f"{key} needs --table")
            params[pname] = predicates.Predicate.from_json(_load(args.table))
        elif given.get(pname):
            params[pname] = given[pname]
        else:
            raise BadParams(f"{key} needs --{pname}")
    r = predicates.builtin_reduction(key, **params)
    if not r.check(cap=args.cap):
        raise UnverifiedReduction(f"{key} failed its exhaustive check")
    data = _load(args.enc)
    e = encoders.Encoding.from_json(data, predicate=r.target)
    lifted = predicates.apply_reduction(r, e)
    _emit(lifted.to_json(r.source), args.out,
          {"reduction": key, "predicate": r.source.label(), "q": lifted.q,
           "length": lifted.length})
    return 0


def _cmd_rand(args):
    pid = args.predicate.upper()
    eps = Fraction(args.eps) if args.eps is not None else None
    if pid == "EQ":
        pe = randomized.rand_encode_eq(args.n, args.q, eps)
    elif pid == "NEQ":
        pe = randomized.rand_encode_neq(args.n, args.q, eps)
    elif pid == "GT":
        pe = randomized.rand_encode_gt(args.n, args.q, eps=eps, buckets=args.buckets)
    else:
        raise BadParams("rand supports eq, neq and gt")
    mode = {"mc": "monte_carlo", "monte-carlo": "monte_carlo"}.get(args.mode, args.mode)
    rep = randomized.estimate_error(pe.predicate, pe, mode=mode, trials=args.trials,
                                    seed=args.seed)
    out = rep.to_json()
    out.update(predicate=pe.predicate.label(), q=pe.q, max_length=pe.max_length,
               target_eps=str(pe.target_eps), seed=args.seed,
               within_target=rep.within(pe.target_eps))
    _emit(out, args.out, {"worst_pair_error": out["worst_pair_error"],
                          "max_length": pe.max_length})
    return 0


def _cmd_table(args):
    rows = table.table_rows(args.max_n)
    if args.json:
        text = _dumps([r.to_json() for r in rows])
    else:
        text = table.render_markdown(rows)
    if args.out:
        _write_atomic(args.out, text)
        bad = sum(1 for r in rows if r.status == "UNSOUND" or not (r.verified and r.certified))
        sys.stdout.write(_dumps({"rows": len(rows), "failed": bad, "out": args.out}))
    else:
        sys.stdout.write(text)
    ok = all(r.verified and r.certified and r.status != "UNSOUND" for r in rows)
    return 0 if ok else 1


def build_parser():
    ap = _Parser(prog="ipenc", description="Inner product encodings of predicates over Z_q.")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="construct an encoding")
    _add_predicate_flags(p)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--k", type=int, default=None, help="number of primes for DISJ")
    p.add_argument("--variant", default="default", choices=["default", "printed"])
    p.add_argument("--out")
    p.set_defaults(run=_cmd_encode)

    p = sub.add_parser("verify", help="check an encoding on every pair")
    _add_predicate_flags(p)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--enc", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("bound", help="emit a lower bound certificate")
    _add_predicate_flags(p, table_flag=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_bound)

    p = sub.add_parser("minrank", help="exact minimum rank over Z_p")
    _add_predicate_flags(p, table_flag=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--cap", type=int, default=None, help="max free cells to enumerate")
    p.add_argument("--out")
    p.set_defaults(run=_cmd_minrank)

    p = sub.add_parser("rank", help="rank or rank factorization of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--factor", action="store_true")
    p.add_argument("--out")
    p.set_defaults(run=_cmd_rank)

    p = sub.add_parser("reduce", help="lift an encoding along a reduction")
    p.add_argument("--from", dest="src")
    p.add_argument("--to", dest="dst")
    p.add_argument("--name")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--table")
    p.add_argument("--enc", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("rand", help="error of a randomized encoding")
    p.add_argument("--predicate", required=True, choices=["eq", "neq", "gt", "EQ", "NEQ", "GT"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eps", default=None, help="target error, e.g. 0.125 or 1/8")
    p.add_argument("--buckets", type=int, default=None)
    p.add_argument("--mode", default="exact",
                   choices=["exact", "monte_carlo", "monte-carlo", "mc"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_rand)

    p = sub.add_parser("table", help="desk-scale summary table of bounds")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(run=_cmd_table)
    return ap


def _fail(err, code):
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        return _fail({"error": "UsageError", "message": str(exc)}, 2)
    try:
        return args.run(args)
    except IpencError as exc:
        return _fail(exc.as_dict(), exc.exit_code)
    except (OSError, ValueError, KeyError) as exc:
        return _fail({"error": type(exc).__name__, "message": str(exc)}, 2)


if __name__ == "__main__":
    sys.exit(main())
