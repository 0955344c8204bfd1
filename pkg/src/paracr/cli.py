"""Command-line front end: ``paracr {analyze,normalize,derive-pde,classify,bound,fuzz}``.

Exit codes: 0 when every verdict passes, 1 when any verdict fails,
2 on parse or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Callable, Sequence

from . import coframe, generators, jets, pde, submanifold
from .parser import ExpressionSyntaxError, ModelError, load_model
from .series import SeriesError, format_rational
from .submanifold import Submanifold
from .verdict import FAIL, INCONCLUSIVE, Verdict, check_zero

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

REPORT_KEYS = (
    "model",
    "levi_rank_at_origin",
    "levi_generic_rank",
    "delta0",
    "box0",
    "beta",
    "beta_underline",
    "k_par",
    "l_var",
    "case_label",
    "pde",
    "identity_verdicts",
    "integrability",
    "coframe",
    "reliable_degree",
)

PRECONDITION_ERRORS = (
    ModelError,
    SeriesError,
    submanifold.SubmanifoldError,
    jets.JetError,
    pde.PdeError,
    coframe.CoframeError,
    OSError,
    ValueError,
)


class UsageError(Exception):
    pass


def _fmt(v):
    return None if v is None else format_rational(v)


def _load(args) -> tuple[Submanifold, dict]:
    model = load_model(args.file, default_trunc=args.degree)
    M = Submanifold.from_model(model, trunc=args.degree if args.degree_given else None)
    echo = {
        "source": model.source,
        "n": model.n,
        "m": model.m,
        "truncation": M.trunc,
        "side": model.side,
        "expression": model.expr.strip(),
    }
    if getattr(args, "normalize", False):
        M, record = submanifold.normalize_coordinates(M)
        echo["normalization"] = record.to_json()
    return M, echo


def _inconclusive(name: str, exc: Exception, reliable: int) -> Verdict:
    return Verdict(name, INCONCLUSIVE, reliable, str(exc))


def build_report(M: Submanifold, echo: dict, point: dict) -> tuple[dict, list[Verdict]]:
    verdicts: list[Verdict] = [M.functional_relations(), submanifold.check_levi_transpose(M)]
    L = submanifold.levi(M)
    report = dict.fromkeys(REPORT_KEYS)
    report["model"] = echo
    report["levi_rank_at_origin"] = L.rank0
    report["levi_generic_rank"] = L.generic_rank
    report["reliable_degree"] = min(M.Q.reliable, M.P.reliable)
    nd = jets.nondeg_report(M, point)
    report["k_par"] = {"order": nd.k_par, "k_max_searched": nd.k_max_searched}
    report["l_var"] = {"order": nd.l_var, "k_max_searched": nd.k_max_searched}
    report["delta0"] = _fmt(nd.delta0)
    report["box0"] = _fmt(nd.box0)
    report["case_label"] = nd.case_label
    integrability = None
    if M.n == 2 and M.m == 2:
        verdicts.append(submanifold.levi_determinant_relations(M))
        if L.rank0 == 1:
            try:
                nf = submanifold.normal_form_22(M)
                report["beta"], report["beta_underline"] = _fmt(nf.beta), _fmt(nf.beta_underline)
            except (submanifold.SubmanifoldError, SeriesError):
                pass
        if nd.delta0:
            S = pde.derive_pde(M)
            verdicts.append(S.roundtrip)
            verdicts.append(pde.transfer_coefficients(M, S).crosscheck)
            ids = pde.structural_identities(M, S)
            verdicts.extend(ids.verdicts)
            try:
                integrability = pde.integrability_of(S)
            except pde.InconclusiveTruncation as exc:
                integrability = _inconclusive("integrability D_x^3 F = D_y H", exc, S.F.reliable)
            report["pde"] = {**S.to_json(), "branch": ids.branch, "values": ids.to_json()["values"]}
            if ids.branch == "rank-one":
                cf = coframe.initial_coframe(M, S)
                verdicts.append(cf.contact_det)
                ct = coframe.check_contact_transfer(M, S)
                verdicts.append(ct.verdict)
                if cf.k is not None:
                    verdicts.append(coframe.check_kernel_brackets(M))
                report["coframe"] = cf.to_json()
    report["identity_verdicts"] = [v.to_json() for v in verdicts]
    report["integrability"] = None if integrability is None else integrability.to_json()
    all_verdicts = verdicts + ([integrability] if integrability else [])
    return report, all_verdicts


def _print_report(report: dict, verdicts: list[Verdict], out) -> None:
    m = report["model"]
    print(f"model: {m['side']} = {m['expression']}  (n={m['n']}, m={m['m']}, truncation {m['truncation']})", file=out)
    print(f"Levi rank at origin: {report['levi_rank_at_origin']}, generic: {report['levi_generic_rank']}", file=out)
    for key in ("delta0", "box0", "beta", "beta_underline", "case_label"):
        if report[key] is not None:
            print(f"{key}: {report[key]}", file=out)
    for key in ("k_par", "l_var"):
        v = report[key]
        order = v["order"] if v["order"] is not None else f"none up to order {v['k_max_searched']}"
        print(f"{key}: {order}", file=out)
    if report["pde"]:
        print(f"F = {report['pde']['F']}", file=out)
        print(f"H = {report['pde']['H']}", file=out)
        print(f"branch: {report['pde']['branch']}", file=out)
    if report["coframe"]:
        print(f"coframe: {'triangular' if report['coframe']['triangular'] else 'non-triangular (h4 kept)'}", file=out)
    for v in verdicts:
        print(v.line(), file=out)
    print(f"reliable degree: {report['reliable_degree']}", file=out)


def _exit_for(verdicts: list[Verdict]) -> int:
    return EXIT_FAIL if any(v.status == FAIL for v in verdicts) else EXIT_OK


def cmd_analyze(args, out) -> int:
    M, echo = _load(args)
    point = submanifold.point_dict(args.point, M.qspace.names) if args.point else {}
    report, verdicts = build_report(M, echo, point)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=False), file=out)
    else:
        _print_report(report, verdicts, out)
    return _exit_for(verdicts)


def cmd_normalize(args, out) -> int:
    model = load_model(args.file, default_trunc=args.degree)
    M = Submanifold.from_model(model, trunc=args.degree if args.degree_given else None)
    M2, record = submanifold.normalize_coordinates(M)
    r, M3 = submanifold.levi_rank_normal_form(M2)
    result = {"Q": str(M2.Q), "P": str(M2.P), "record": record.to_json(), "levi_rank": r, "rank_normal_form": str(M3.Q)}
    if M.n == 2 and M.m == 2 and r == 1:
        try:
            result["normal_form_22"] = submanifold.normal_form_22(M2, scale=args.scale).to_json()
        except submanifold.SubmanifoldError as exc:
            result["normal_form_22"] = {"error": str(exc)}
    if args.json:
        print(json.dumps(result, indent=2), file=out)
    else:
        print(f"Q' = {result['Q']}", file=out)
        print(f"P' = {result['P']}", file=out)
        print(f"y = {record.y_of}   b = {record.b_of}", file=out)
        print(f"Levi rank {r}: Q'' = {result['rank_normal_form']}", file=out)
        if "normal_form_22" in result and "beta" in result["normal_form_22"]:
            nf = result["normal_form_22"]
            print(f"beta = {nf['beta']}, beta_underline = {nf['beta_underline']}", file=out)
    return EXIT_OK


def cmd_derive_pde(args, out) -> int:
    M, echo = _load(args)
    S = pde.derive_dual_pde(M) if args.dual else pde.derive_pde(M)
    try:
        integ = pde.integrability_of(S)
    except pde.InconclusiveTruncation as exc:
        integ = _inconclusive("integrability D_x^3 F = D_y H", exc, S.F.reliable)
    verdicts = [S.roundtrip, integ]
    if args.json:
        print(json.dumps({"model": echo, "pde": S.to_json(), "integrability": integ.to_json()}, indent=2), file=out)
    else:
        jet = S.jet_vars
        lead, ind = S.space.names[:2]
        print(f"{jet[0]}_{ind} = {S.F}", file=out)
        print(f"{jet[0]}_{lead * 3} = {S.H}", file=out)
        print(f"(jet coordinates centered at {', '.join(format_rational(v) for v in S.base)})", file=out)
        for v in verdicts:
            print(v.line(), file=out)
    return _exit_for(verdicts)


def cmd_classify(args, out) -> int:
    M, echo = _load(args)
    point = submanifold.point_dict(args.point, M.qspace.names) if args.point else {}
    nd = jets.nondeg_report(M, point)
    if args.json:
        print(json.dumps({"model": echo, **nd.to_json()}, indent=2), file=out)
    else:
        for key, value in nd.to_json().items():
            print(f"{key}: {value}", file=out)
    return EXIT_OK


def cmd_bound(args, out) -> int:
    for name in ("n", "m", "k", "l"):
        if getattr(args, name) < 1:
            raise UsageError(f"{name} must be >= 1")
    value = jets.aut_dim_bound(args.n, args.m, args.k, args.l)
    print(json.dumps({"bound": value}) if args.json else value, file=out)
    return EXIT_OK


# ----------------------------------------------------------------------- fuzz
def _fuzz_checks() -> dict[str, Callable[[random.Random], list[Verdict]]]:
    def roundtrip(rng):
        return [generators.random_model(rng, *rng.choice([(1, 1), (2, 2), (2, 1)])).functional_relations()]

    def transpose(rng):
        return [submanifold.check_levi_transpose(generators.random_model(rng, *rng.choice([(1, 1), (2, 2), (2, 1)])))]

    def determinants(rng):
        return [submanifold.levi_determinant_relations(generators.random_model(rng, 2, 2))]

    def rank_relation(rng):
        M = generators.random_model(rng, *rng.choice([(1, 1), (2, 2), (2, 1)]))
        out = []
        for p in submanifold.sample_points(M.qspace.names, 5, rng.randrange(1 << 30)):
            if not M.Q.diff(M.names.b).evaluate(p):
                continue
            lhs = jets.jet_jacobian_rank(M, jets.PAR, 1, p)
            rhs = M.n + 1 + submanifold.levi_rank_at_point(M, p)
            status = "pass" if lhs == rhs else FAIL
            out.append(Verdict("first-order jet rank = n + 1 + Levi rank", status, M.Q.reliable, f"{lhs} vs {rhs}"))
        return out

    def elimination(rng):
        M = generators.random_delta_unit_model(rng)
        S = pde.derive_pde(M)
        return [S.roundtrip, pde.structural_identities(M, S).verdicts[0], pde.integrability_of(S)]

    def rank_one(rng):
        M = generators.random_rank_one_model(rng, base=rng.choice([generators.GOLDEN, generators.CUBIC_PAR]))
        S = pde.derive_pde(M)
        return [*pde.structural_identities(M, S).verdicts, coframe.check_kernel_brackets(M), pde.integrability_of(S)]

    def normalization(rng):
        M = generators.random_model(rng, *rng.choice([(1, 1), (2, 2)]))
        M2, _ = submanifold.normalize_coordinates(M)
        M3, _ = submanifold.normalize_coordinates(M2)
        ok = submanifold.is_normalized(M2)
        return [
            Verdict("normalized", "pass" if ok else FAIL, M2.Q.reliable),
            check_zero("idempotent", M3.Q - M2.Q),
        ]

    return {
        "roundtrip": roundtrip,
        "levi_transpose": transpose,
        "levi_determinants": determinants,
        "rank_relation": rank_relation,
        "elimination": elimination,
        "rank_one": rank_one,
        "normalization": normalization,
    }


def cmd_fuzz(args, out) -> int:
    checks = _fuzz_checks()
    selected = args.only or list(checks)
    failures = 0
    summary = {}
    for name in selected:
        if name not in checks:
            raise UsageError(f"unknown fuzz class {name!r}; choose from {', '.join(checks)}")
        counts = {"pass": 0, "fail": 0, "inconclusive": 0}
        for case in range(args.cases):
            rng = random.Random(f"{args.seed}:{name}:{case}")
            for v in checks[name](rng):
                counts[v.status] += 1
                if v.status == FAIL:
                    failures += 1
                    if not args.json:
                        print(f"case {case}: {v.line()}", file=out)
        summary[name] = counts
        if not args.json:
            print(f"{name}: {counts['pass']} pass, {counts['fail']} fail, {counts['inconclusive']} inconclusive", file=out)
    if args.json:
        print(json.dumps({"seed": args.seed, "cases": args.cases, "classes": summary}, indent=2), file=out)
    return EXIT_FAIL if failures else EXIT_OK


# --------------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paracr", description="Invariants of submanifolds of solutions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="model file (key = value lines)")
        p.add_argument("--degree", type=int, default=None, help="truncation degree (default: file value, else 8)")
        p.add_argument("--json", action="store_true", help="emit JSON only")
        return p

    p = model_cmd("analyze", "run the full pipeline and report all invariants")
    p.add_argument("--point", help='probe point such as "x=1/2,y=0"')
    p.add_argument("--normalize", action="store_true", help="normalize coordinates first")
    p.set_defaults(func=cmd_analyze)
    p = model_cmd("normalize", "normalize coordinates and reduce the quadratic part")
    p.add_argument("--scale", action="store_true", help="rescale to beta = beta_underline = 1 when both are nonzero")
    p.set_defaults(func=cmd_normalize)
    p = model_cmd("derive-pde", "eliminate the parameters and print the PDE system")
    p.add_argument("--dual", action="store_true", help="derive the dual system instead")
    p.add_argument("--normalize", action="store_true", help="normalize coordinates first")
    p.set_defaults(func=cmd_derive_pde)
    p = model_cmd("classify", "nondegeneracy orders, second-order determinants and case label")
    p.add_argument("--point", help='probe point such as "x=1/2,y=0"')
    p.add_argument("--normalize", action="store_true", help="normalize coordinates first")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bound", help="dimension bound for the automorphism group")
    for name in ("n", "m", "k", "l"):
        p.add_argument(name, type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fuzz", help="run the identity suite on seeded random models")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=10)
    p.add_argument("--only", action="append", help="restrict to one class (repeatable)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if hasattr(args, "degree"):
        args.degree_given = args.degree is not None
        if args.degree is None:
            args.degree = 8
        elif args.degree < 3:
            print("error: --degree must be at least 3", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args, out)
    except ExpressionSyntaxError as exc:
        print(f"SyntaxError at byte {exc.byte_offset}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PRECONDITION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
