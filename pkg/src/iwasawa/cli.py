"""Command-line entry point.

Exit codes: 0 all pass, 1 theorem violation, 2 inconclusive precision, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import seriesfile
from .functional_equation import (
    CurveContext,
    FEParams,
    Flavor,
    FunctionalEquationError,
    InconclusiveError,
    Verdict,
    check_fe,
    parity_check,
    pm_taylor_relation,
    taylor_relation,
    w_series,
    w_series_product,
)
from .harness import SuiteConfig, random_series, run_suite, run_trial
from .invariants import invariant_report, weierstrass_prepare
from .padic import PadicContext, PrecisionError
from .series import Certificate

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(seriesfile.emit_report(obj))


def _verdict_code(v: Verdict) -> int:
    return {Verdict.PASS: EXIT_PASS, Verdict.FAIL: EXIT_FAIL, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[v]


def _fe_params(args, f, meta) -> FEParams:
    Q = args.Q if args.Q is not None else meta.get("Q")
    eps = args.epsilon if args.epsilon is not None else meta.get("epsilon")
    flavor = args.flavor or meta.get("flavor", "generic")
    if Q is None or eps is None:
        raise InputError("--Q and --epsilon are required (or Q/epsilon in the file metadata)")
    try:
        return FEParams(int(Q), int(eps), f.ctx, flavor)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_invariants(args) -> int:
    f, meta = seriesfile.ingest(args.file)
    rep = invariant_report(f)
    out = {"report": rep, "metadata": meta}
    if args.prepare and rep.certificate is Certificate.CONCLUSIVE:
        try:
            prep = weierstrass_prepare(f)
            out["preparation"] = {
                "mu": prep.mu,
                "lambda": prep.lam,
                "distinguished": [str(c) for c in prep.distinguished.coeffs[:prep.lam + 1]],
                "precision": prep.precision,
                "certified_digits": prep.certified_digits,
            }
        except PrecisionError as exc:
            out["preparation"] = {"refused": str(exc)}
    _emit(out)
    return EXIT_PASS if rep.certificate is Certificate.CONCLUSIVE else EXIT_INCONCLUSIVE


def cmd_fe_check(args) -> int:
    f, meta = seriesfile.ingest(args.file)
    rep = check_fe(f, _fe_params(args, f, meta))
    _emit(rep)
    return _verdict_code(rep.verdict)


def cmd_parity(args) -> int:
    f, meta = seriesfile.ingest(args.file)
    params = _fe_params(args, f, meta)
    reps = [parity_check(f, params)]
    if args.pair:
        g, _ = seriesfile.ingest(args.pair)
        reps.append(parity_check(g, params))
    verdict = Verdict.PASS if all(r.verdict is Verdict.PASS for r in reps) else Verdict.FAIL
    if len(reps) == 2 and (reps[0].m - reps[1].m) % 2:
        verdict = Verdict.FAIL
    _emit({"reports": reps, "verdict": verdict})
    return _verdict_code(verdict)


def cmd_taylor(args) -> int:
    f, meta = seriesfile.ingest(args.file)
    params = _fe_params(args, f, meta)
    if params.flavor is Flavor.GENERIC:
        rep = taylor_relation(f, params)
    else:
        a_p = int(meta.get("a_p", 0))
        try:
            curve = CurveContext(params.Q, f.p, a_p, params.epsilon)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        rep = pm_taylor_relation(f, params.flavor, curve, f.ctx)
    _emit(rep)
    return _verdict_code(rep.verdict)


def cmd_wseries(args) -> int:
    ctx = PadicContext(args.p, args.N)
    w = w_series(args.flavor, ctx, args.M)
    agrees = w.agrees(w_series_product(args.flavor, ctx, args.M))
    sys.stdout.write(seriesfile.dumps(w, {"flavor": args.flavor, "matches_product": agrees}))
    return EXIT_PASS if agrees else EXIT_FAIL


def cmd_gen(args) -> int:
    try:
        mu, lam = (int(x) for x in args.profile.split(","))
    except ValueError:
        raise InputError("--profile expects MU,LAMBDA") from None
    ctx = PadicContext(args.p, args.N)
    f = random_series(ctx, mu, lam, args.M, seed=args.seed)
    meta = {"profile": {"mu": mu, "lambda": lam}, "seed": args.seed}
    if args.output:
        seriesfile.write_series(f, args.output, meta)
    else:
        sys.stdout.write(seriesfile.dumps(f, meta))
    return EXIT_PASS


def cmd_suite(args) -> int:
    cfg = SuiteConfig.load(args.config) if args.config else SuiteConfig()
    if args.trial:
        suite, p, i = args.trial.split(":")
        res = run_trial(suite, int(p), int(i), cfg)
        _emit(res)
        return _verdict_code(res.verdict)
    report = run_suite(cfg)
    for line in report.summary_lines():
        print(line)
    print(f"elapsed {report.elapsed['total']:.1f}s exit={report.exit_code}")
    if args.report:
        seriesfile.emit_report(report, args.report)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iwasawa", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="mu, lambda, order of vanishing of a series file")
    p.add_argument("file")
    p.add_argument("--prepare", action="store_true", help="also run Weierstrass preparation")
    p.set_defaults(func=cmd_invariants)

    def fe_args(p):
        p.add_argument("file")
        p.add_argument("--Q", type=int)
        p.add_argument("--epsilon", type=int, choices=(1, -1))
        p.add_argument("--flavor", choices=[f.value for f in Flavor])

    p = sub.add_parser("fe-check", help="verify the functional equation")
    fe_args(p)
    p.set_defaults(func=cmd_fe_check)

    p = sub.add_parser("parity", help="parity of the order of vanishing")
    fe_args(p)
    p.add_argument("--pair", help="second series file under the same data")
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("taylor", help="leading/sub-leading coefficient relation")
    fe_args(p)
    p.set_defaults(func=cmd_taylor)

    p = sub.add_parser("wseries", help="print W^+ or W^- as a series file")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--flavor", choices=["plus", "minus"], required=True)
    p.add_argument("--N", type=int, default=40)
    p.add_argument("--M", type=int, default=64)
    p.set_defaults(func=cmd_wseries)

    p = sub.add_parser("gen", help="random series with prescribed mu, lambda")
    p.add_argument("--profile", required=True, help="MU,LAMBDA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--N", type=int, default=40)
    p.add_argument("--M", type=int, default=64)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", help="run the seeded property suites")
    p.add_argument("--config", help="JSON SuiteConfig")
    p.add_argument("--report", help="write the full JSON report here")
    p.add_argument("--trial", help="replay one trial, SUITE:P:INDEX")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}; try (N, M) = {exc.suggestion}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except FunctionalEquationError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, seriesfile.SeriesFileError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
