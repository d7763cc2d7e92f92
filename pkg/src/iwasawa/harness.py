"""Random generators, the conjugate-twist operator and the seeded property suites.

Every trial draws from its own ``random.Random`` seeded by the string
``"{seed}:{key}:{p}:{index}"``, so any failure can be replayed with
:func:`run_trial`.  Coefficients are drawn at a canonical size
(``CANON_M`` terms of ``CANON_N`` digits) and then reduced, which makes the
instance at (N, M) the exact reduction of the instance at any larger (N', M')
up to the canonical size; verdicts can therefore be compared across
precisions.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .functional_equation import (
    CurveContext,
    FEParams,
    Flavor,
    InconclusiveError,
    Verdict,
    check_fe,
    f_pm_derivative_forms,
    parity_check,
    phi,
    pm_taylor_relation,
    symmetrize,
    taylor_relation,
    w_exponent,
    w_series,
    w_series_product,
)
from .invariants import DEFAULT_GUARD, lambda_invariant, mu_invariant
from .padic import PadicContext
from .series import Certificate, TruncatedSeries, sigma

CANON_M = 128
CANON_N = 128

SUITES = ("invariance", "unit", "parity", "taylor", "pm_taylor", "involution", "wseries", "fe")


def _draw(rng: random.Random, p: int, N: int, M: int) -> list[int]:
    digits = max(CANON_N, N)
    raw = [rng.randrange(p**digits) for _ in range(max(CANON_M, M))]
    m = p**N
    return [c % m for c in raw[:M]]


def random_element(ctx: PadicContext, M: int, rng: random.Random) -> TruncatedSeries:
    return TruncatedSeries(ctx, tuple(_draw(rng, ctx.p, ctx.N, M)), ctx.N)


def random_unit(ctx: PadicContext, M: int, rng: random.Random) -> TruncatedSeries:
    c = _draw(rng, ctx.p, ctx.N, M)
    if c[0] % ctx.p == 0:
        c[0] += 1
    return TruncatedSeries(ctx, tuple(c), ctx.N)


def random_series(ctx: PadicContext, mu: int, lam: int, M: int = 64, seed=None,
                  rng: random.Random | None = None, guard: int = DEFAULT_GUARD) -> TruncatedSeries:
    """p^mu * D * U with D distinguished of degree lam and U a random unit.

    The invariants of the result are measured before returning and must equal
    the targets.
    """
    if mu < 0 or lam < 0 or lam + guard >= M or mu >= ctx.N:
        raise ValueError(f"infeasible profile mu={mu}, lam={lam} for N={ctx.N}, M={M}, guard={guard}")
    if rng is None:
        rng = random.Random(seed)
    p = ctx.p
    low = _draw(rng, p, ctx.N, M)
    D = TruncatedSeries.from_coeffs(ctx, [p * c for c in low[:lam]] + [1], M)
    U = random_unit(ctx, M, rng)
    f = (D * U).times_p(mu)
    got = (mu_invariant(f), lambda_invariant(f))
    if got != ((mu, Certificate.CONCLUSIVE), (lam, Certificate.CONCLUSIVE)):
        raise RuntimeError(f"generated series has invariants {got}, wanted ({mu}, {lam})")
    return f


def twist(f: TruncatedSeries, u: TruncatedSeries) -> TruncatedSeries:
    """u * f(1/(1+T) - 1)."""
    if u.coeffs[0] % u.p == 0:
        raise ValueError("twist needs a unit multiplier")
    return u * sigma(f)


def unit_invariance_check(U: TruncatedSeries) -> Verdict:
    """sigma(U) is again a unit: its constant term is U(0)."""
    if U.coeffs[0] % U.p == 0:
        raise ValueError("input is not a unit")
    s = sigma(U)
    ok = s.coeffs[0] % s.p != 0 and s.coeffs[0] == U.coeffs[0] % s.modulus
    return Verdict.PASS if ok else Verdict.FAIL


@dataclass(frozen=True)
class SuiteConfig:
    primes: tuple[int, ...] = (2, 3, 5, 7)
    trials: int = 200
    seed: int = 0
    M: int = 64
    N: int = 40
    delta: int = 3
    delta_p2: int = 4
    suites: tuple[str, ...] = SUITES
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(self.primes))
        object.__setattr__(self, "suites", tuple(self.suites))
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        for p in self.primes:
            PadicContext(p, self.N)
        if self.trials < 1 or self.M < 2 * DEFAULT_GUARD:
            raise ValueError("need trials >= 1 and M >= 16")

    @classmethod
    def from_dict(cls, data: dict) -> SuiteConfig:
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> SuiteConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def budget(self, p: int) -> int:
        return self.delta_p2 if p == 2 else self.delta


@dataclass
class TrialResult:
    suite: str
    p: int
    index: int
    seed: str
    verdict: Verdict
    digits: int | None = None
    detail: dict = field(default_factory=dict)
    suggestion: tuple[int, int] | None = None


def trial_seed(seed: int, key: str, p: int, index: int) -> str:
    return f"{seed}:{key}:{p}:{index}"


def _random_modulus(rng: random.Random, p: int, top: int = 5000) -> int:
    q = rng.randrange(1, top)
    while q % p == 0:
        q += 1
    return q


def _symmetrized_sample(p: int, index: int, cfg: SuiteConfig, flavor=Flavor.GENERIC):
    rng = random.Random(trial_seed(cfg.seed, f"sym-{Flavor(flavor).value}", p, index))
    ctx = PadicContext(p, cfg.N)
    Q = _random_modulus(rng, p)
    if Flavor(flavor) is Flavor.GENERIC:
        eps = 1 if index % 2 == 0 else -1
    else:
        eps = rng.choice((1, -1))
    k = rng.randrange(0, 8)
    h = random_element(ctx, cfg.M, rng).shift(k)
    params = FEParams(Q, eps, ctx, flavor)
    return params, h, symmetrize(h, params)


def _invariance(p, index, cfg, rng):
    ctx = PadicContext(p, cfg.N)
    mu = rng.randrange(0, 4)
    lam = rng.randrange(0, 21)
    f = random_series(ctx, mu, lam, cfg.M, rng=rng)
    u = random_unit(ctx, cfg.M, rng)
    g = twist(f, u)
    (mf, cf), (lf, _) = mu_invariant(f), lambda_invariant(f)
    (mg, cg), (lg, _) = mu_invariant(g), lambda_invariant(g)
    detail = {"target": [mu, lam], "f": [mf, lf], "twist": [mg, lg]}
    if not (cf and cg):
        return Verdict.INCONCLUSIVE, None, detail, (2 * cfg.N, cfg.M)
    ok = (mf, lf) == (mg, lg)
    return (Verdict.PASS if ok else Verdict.FAIL), min(f.prec, g.prec), detail, None


def _unit(p, index, cfg, rng):
    U = random_unit(PadicContext(p, cfg.N), cfg.M, rng)
    return unit_invariance_check(U), U.prec, {"U0": str(U.coeffs[0])}, None


def _parity(p, index, cfg, rng):
    params, h, f = _symmetrized_sample(p, index, cfg)
    detail = {"epsilon": params.epsilon, "Q": params.Q}
    if f.is_zero():
        return Verdict.INCONCLUSIVE, None, detail, (2 * cfg.N, 2 * cfg.M)
    try:
        rep = parity_check(f, params)
    except InconclusiveError as exc:
        return Verdict.INCONCLUSIVE, None, detail, exc.suggestion
    detail["m"] = rep.m
    return rep.verdict, f.prec, detail, None


def _taylor_report(p, cfg, params, f, run):
    detail = {"epsilon": params.epsilon, "Q": params.Q, "flavor": params.flavor.value}
    if f.is_zero():
        return Verdict.INCONCLUSIVE, None, detail, (2 * cfg.N, 2 * cfg.M)
    try:
        rep = run()
    except InconclusiveError as exc:
        return Verdict.INCONCLUSIVE, None, detail, exc.suggestion
    detail.update(m=rep.m, loss=rep.loss)
    if rep.verdict is Verdict.FAIL:
        return Verdict.FAIL, rep.digits_verified, detail, None
    if rep.loss > cfg.budget(p):
        return Verdict.INCONCLUSIVE, rep.digits_verified, detail, (cfg.N + rep.loss, cfg.M)
    return Verdict.PASS, rep.digits_verified, detail, None


def _taylor(p, index, cfg, rng):
    params, h, f = _symmetrized_sample(p, index, cfg)
    return _taylor_report(p, cfg, params, f, lambda: taylor_relation(f, params))


def _pm_taylor(p, index, cfg, rng):
    flavor = Flavor.PLUS if index % 2 == 0 else Flavor.MINUS
    params, h, f = _symmetrized_sample(p, index, cfg, flavor)
    curve = CurveContext(params.Q, p, 0, params.epsilon)
    return _taylor_report(p, cfg, params, f,
                          lambda: pm_taylor_relation(f, flavor, curve, params.ctx))


def _involution(p, index, cfg, rng):
    ctx = PadicContext(p, cfg.N)
    f = random_element(ctx, cfg.M, rng)
    ok = sigma(sigma(f)) == f
    for flavor in Flavor:
        params = FEParams(_random_modulus(rng, p), rng.choice((1, -1)), ctx, flavor)
        ok = ok and phi(phi(f, params), params) == f
    return (Verdict.PASS if ok else Verdict.FAIL), f.prec, {}, None


def _fe(p, index, cfg, rng):
    ctx = PadicContext(p, cfg.N)
    flavor = list(Flavor)[index % 3]
    params = FEParams(_random_modulus(rng, p), rng.choice((1, -1)), ctx, flavor)
    h = random_element(ctx, cfg.M, rng)
    f = symmetrize(h, params)
    fixed = check_fe(f, params)
    # a fixed point f of phi is symmetrize(f) / 2, so the image of symmetrize is the fixed locus
    back = symmetrize(f, params) == f * 2
    # a random series is almost never fixed; if it is, it must still round-trip
    raw = check_fe(h, params)
    raw_ok = (not raw.passed) or symmetrize(h, params) == h * 2
    ok = fixed.passed and back and raw_ok
    detail = {"flavor": flavor.value, "raw_fixed": raw.passed}
    return (Verdict.PASS if ok else Verdict.FAIL), fixed.digits_verified, detail, None


def _wseries(p, index, cfg, rng):
    ctx = PadicContext(p, cfg.N)
    M = cfg.M
    wp, wm = w_series(Flavor.PLUS, ctx, M), w_series(Flavor.MINUS, ctx, M)
    one_plus_T = TruncatedSeries.from_coeffs(ctx, [1, 1], M)
    checks = {
        "product_is_1+T": (wp * wm).agrees(one_plus_T),
        "plus_closed_vs_product": wp.agrees(w_series_product(Flavor.PLUS, ctx, M)),
        "minus_closed_vs_product": wm.agrees(w_series_product(Flavor.MINUS, ctx, M)),
        "minus_exponent_is_1/(p+1)": w_exponent(Flavor.MINUS, p) == Fraction(1, p + 1),
        "units": wp.coeffs[0] == 1 and wm.coeffs[0] == 1,
    }
    curve = CurveContext(_random_modulus(rng, p), p, 0, rng.choice((1, -1)))
    for flavor in (Flavor.PLUS, Flavor.MINUS):
        closed, numeric = f_pm_derivative_forms(flavor, curve, ctx, M)
        checks[f"F{flavor.value}'(0)"] = closed.agrees(numeric)
    ok = all(checks.values())
    digits = min(wp.prec, wm.prec)
    return (Verdict.PASS if ok else Verdict.FAIL), digits, {"checks": checks, "N_curve": curve.N}, None


_RUNNERS = {
    "invariance": _invariance,
    "unit": _unit,
    "parity": _parity,
    "taylor": _taylor,
    "pm_taylor": _pm_taylor,
    "involution": _involution,
    "wseries": _wseries,
    "fe": _fe,
}


def _trial_count(suite: str, cfg: SuiteConfig) -> int:
    return min(cfg.trials, 10) if suite == "wseries" else cfg.trials


def run_trial(suite: str, p: int, index: int, cfg: SuiteConfig) -> TrialResult:
    """Run (or replay) one trial; the result depends only on its arguments."""
    seed = trial_seed(cfg.seed, suite, p, index)
    rng = random.Random(seed)
    verdict, digits, detail, suggestion = _RUNNERS[suite](p, index, cfg, rng)
    return TrialResult(suite, p, index, seed, verdict, digits, detail, suggestion)


def _run_task(task):
    return run_trial(*task)


@dataclass
class SuiteReport:
    config: SuiteConfig
    results: list[TrialResult]
    elapsed: dict[str, float]

    def counts(self) -> dict[tuple[str, int], Counter]:
        out: dict[tuple[str, int], Counter] = {}
        for r in self.results:
            out.setdefault((r.suite, r.p), Counter())[r.verdict] += 1
        return out

    def failures(self) -> list[TrialResult]:
        return [r for r in self.results if r.verdict is Verdict.FAIL]

    def inconclusive(self) -> list[TrialResult]:
        return [r for r in self.results if r.verdict is Verdict.INCONCLUSIVE]

    @property
    def exit_code(self) -> int:
        if self.failures():
            return 1
        if self.inconclusive():
            return 2
        return 0

    def summary_lines(self) -> list[str]:
        lines = []
        for (suite, p), c in self.counts().items():
            total = sum(c.values())
            digits = [r.digits for r in self.results if r.suite == suite and r.p == p and r.digits is not None]
            lines.append(
                f"{suite:<11} p={p:<3} trials={total:<4} pass={c[Verdict.PASS]:<4} "
                f"fail={c[Verdict.FAIL]:<3} inconclusive={c[Verdict.INCONCLUSIVE]:<3} "
                f"min_digits={min(digits) if digits else '-'}")
        for r in self.failures():
            lines.append(f"FAIL {r.suite} p={r.p} trial={r.index} seed={r.seed} {r.detail}")
        for r in self.inconclusive():
            lines.append(f"INCONCLUSIVE {r.suite} p={r.p} trial={r.index} seed={r.seed} try (N, M)={r.suggestion}")
        return lines


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    tasks = [(s, p, i, cfg) for s in cfg.suites for p in cfg.primes for i in range(_trial_count(s, cfg))]
    elapsed: dict[str, float] = {}
    if cfg.workers > 1:
        start = time.perf_counter()
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=16))
        elapsed["total"] = time.perf_counter() - start
    else:
        results = []
        for s in cfg.suites:
            start = time.perf_counter()
            results.extend(_run_task(t) for t in tasks if t[0] == s)
            elapsed[s] = time.perf_counter() - start
        elapsed["total"] = sum(elapsed.values())
    order = {s: i for i, s in enumerate(cfg.suites)}
    results.sort(key=lambda r: (order[r.suite], r.p, r.index))
    return SuiteReport(cfg, results, elapsed)
