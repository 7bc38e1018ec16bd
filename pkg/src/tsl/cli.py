"""Command-line interface: ``tsl describe|tensor|family|claims``.

Exit codes: 0 success, 1 strict-consistent failure, 2 input error,
3 budget exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .claims import Verdict, run_claims, strict_failures
from .cosets import BudgetExceeded, EnumerationBudget, todd_coxeter
from .families import (
    BadParams,
    BadPrime,
    b1_quotient,
    bieberbach_b1,
    coclass_ks,
    crystallographic_gn,
    gn_quotient,
    ks_quotient,
    predict,
)
from .lattice import abelian_from_matrix
from .presentations import (
    PresentationError,
    abelianized_relation_matrix,
    parse_presentation,
    print_presentation,
    print_word,
)
from .tensor import (
    InvariantViolation,
    Method,
    diagram_report,
    tensor_square,
)

EXIT_OK, EXIT_STRICT, EXIT_INPUT, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _budget(args) -> EnumerationBudget:
    base = EnumerationBudget.default()
    return EnumerationBudget(
        max_cosets=args.max_cosets if args.max_cosets is not None else base.max_cosets,
        max_time=args.max_time if args.max_time is not None else base.max_time,
    )


def _read(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise InputError(str(e)) from None
    return parse_presentation(text)


def cmd_describe(args, out):
    p = _read(args.file)
    ab = abelian_from_matrix(abelianized_relation_matrix(p))
    if ab.rank:
        order = "INFINITE"
    else:
        try:
            order = todd_coxeter(p, (), _budget(args)).n
        except BudgetExceeded:
            order = "INFINITE-OR-BUDGET"
    info = {
        "name": p.name,
        "generators": list(p.gens),
        "relators": [print_word(r, p.gens) for r in p.relators],
        "abelianization": str(ab),
        "order": order,
    }
    if args.format == "json":
        out.write(_dump(info) + "\n")
    else:
        out.write(f"group {p.name}\n")
        out.write(f"  generators: {', '.join(p.gens) or '(none)'}\n")
        out.write(f"  relators: {', '.join(info['relators']) or '(none)'}\n")
        out.write(f"  abelianization: {ab}\n")
        out.write(f"  order: {order}\n")
    return EXIT_OK


def _tensor_reports(p, method, budget):
    methods = [Method.NU, Method.DEFINITIONAL] if method == "both" else [Method(method)]
    reports = []
    for m in methods:
        rep = diagram_report(tensor_square(p, m, budget))
        reports.append(rep)
    return reports


def _agreement(a, b) -> bool:
    return (a.tensor_order, a.nabla, a.schur, a.j2) == (b.tensor_order, b.nabla, b.schur, b.j2)


def run_tensor(p, args, out):
    try:
        reports = _tensor_reports(p, args.method, _budget(args))
    except BudgetExceeded as e:
        sys.stderr.write(
            f"budget exceeded: {e}\nhint: the group may be infinite; "
            "try a finite quotient (for families: --mod)\n"
        )
        return EXIT_BUDGET
    except ValueError as e:
        raise InputError(str(e)) from None
    agree = len(reports) < 2 or _agreement(reports[0].data, reports[1].data)
    if args.format == "json":
        body = [r.to_json() for r in reports]
        obj = body[0] if len(body) == 1 else {"reports": body, "methods_agree": agree}
        out.write(_dump(obj) + "\n")
    else:
        for r in reports:
            d = r.data
            out.write(f"{d.group} [{d.method.value}]\n")
            out.write(f"  |G (x) G| = {_num(d.tensor_order)}")
            out.write(f"  ({d.tensor})\n" if d.tensor is not None else "\n")
            out.write(f"  Nabla = {d.nabla}\n  |G ^ G| = {_num(d.exterior_order)}\n")
            out.write(f"  J_2 = {d.j2}\n  M(G) = {d.schur}\n")
            out.write(f"  |[G,G]| = {_num(d.derived_order)}\n")
            for name, status, detail in r.checks:
                out.write(f"  {status} {name}" + (f"  {detail}" if detail else "") + "\n")
        if len(reports) == 2:
            out.write(f"methods agree: {'yes' if agree else 'NO'}\n")
    if not all(r.ok for r in reports) or not agree:
        sys.stderr.write("invariant violation: a diagram identity failed or methods disagree\n")
        return EXIT_INVARIANT
    return EXIT_OK


def _num(x):
    return "INFINITE" if x == float("inf") else str(x)


def cmd_tensor(args, out):
    return run_tensor(_read(args.file), args, out)


def _family_spec(args):
    f = args.family
    if f == "gn":
        spec = crystallographic_gn(args.n)
        pres = gn_quotient(args.n, args.mod) if args.mod else spec.presentation
        pred_params = ("GN", {"n": args.n})
    elif f == "ks":
        spec = coclass_ks(args.p, args.s)
        pres = ks_quotient(args.p, args.s, args.k) if args.k else spec.presentation
        pred_params = ("KS", {"p": args.p, "s": args.s})
    else:
        spec = bieberbach_b1(args.n)
        pres = b1_quotient(args.n, args.mod) if args.mod else spec.presentation
        pred_params = ("B1", {"n": args.n})
    return spec, pres, pred_params


def cmd_family(args, out):
    try:
        spec, pres, (fam, params) = _family_spec(args)
    except (BadParams, BadPrime) as e:
        raise InputError(str(e)) from None
    if args.tensor:
        return run_tensor(pres, args, out)
    try:
        pred = predict(fam, params).to_json()
    except ValueError:
        pred = None
    meta = {
        "family": spec.family.value,
        "params": spec.params,
        "h": spec.h_claimed,
        "abelianization": str(spec.abelianization_claimed)
        if spec.abelianization_claimed is not None else None,
        "predicted_tensor_square": pred,
        **spec.extra,
    }
    if args.format == "json":
        out.write(_dump({"presentation": print_presentation(pres), "spec": meta}) + "\n")
    else:
        out.write(print_presentation(pres) + "\n")
        for key in sorted(meta):
            out.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\n")
    return EXIT_OK


def cmd_claims(args, out):
    selection = [s.strip() for s in args.only.split(",") if s.strip()] if args.only else None
    try:
        reports = run_claims(selection, args.mode, _budget(args))
    except KeyError as e:
        raise InputError(str(e)) from None
    if args.format == "json":
        out.write(_dump([r.to_json() for r in reports]) + "\n")
    else:
        for r in reports:
            out.write(r.line() + "\n")
            if r.verdict is Verdict.MISMATCH or args.verbose:
                for p in r.parts:
                    out.write(f"    {p.mode.value}: {p.verdict.value}  {p.details}\n")
    if args.strict_consistent:
        bad = strict_failures(reports)
        if bad:
            sys.stderr.write(f"strict-consistent: unexpected MISMATCH in {', '.join(bad)}\n")
            return EXIT_STRICT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-cosets", type=int, default=None,
                        help="coset budget (default: $TSL_BUDGET_COSETS or 2000000)")
    common.add_argument("--max-time", type=float, default=None, help="seconds per enumeration")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="tsl", description="Nonabelian tensor squares.")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("describe", parents=[common], help="generators, relators, G^ab, order")
    d.add_argument("file", help="presentation file, or - for stdin")
    d.set_defaults(func=cmd_describe)

    methods = ("nu", "definitional", "both", "abelian")
    t = sub.add_parser("tensor", parents=[common], help="tensor square and diagram checks")
    t.add_argument("file", help="presentation file, or - for stdin")
    t.add_argument("--method", choices=methods, default="nu")
    t.set_defaults(func=cmd_tensor)

    f = sub.add_parser("family", parents=[common], help="family presentations")
    f.add_argument("family", choices=("gn", "ks", "b1"))
    f.add_argument("--n", type=int, default=3)
    f.add_argument("--p", type=int, default=3)
    f.add_argument("--s", type=int, default=1)
    f.add_argument("--k", type=int, default=None, help="K_s quotient: Z_p -> Z/p^k")
    f.add_argument("--mod", type=int, default=None, help="finite quotient: lattice mod m")
    f.add_argument("--tensor", action="store_true", help="compute the tensor square")
    f.add_argument("--method", choices=methods, default="nu")
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("claims", help="claims ledger")
    csub = c.add_subparsers(dest="action", required=True)
    r = csub.add_parser("run", parents=[common])
    r.add_argument("--only", default=None, help="comma-separated claim ids")
    r.add_argument("--mode", choices=("exact", "symbolic", "quotient", "all"), default="all")
    r.add_argument("--strict-consistent", action="store_true",
                   help="exit 1 on a MISMATCH that is not a known discrepancy")
    r.add_argument("--verbose", action="store_true")
    r.set_defaults(func=cmd_claims)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, PresentationError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except BudgetExceeded as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except InvariantViolation as e:
        sys.stderr.write(f"invariant violation: {e}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
