"""Functional-equation operators and the theorem checkers built on them.

A series f satisfies the functional equation with data (Q, eps, flavor) when

    f(T) = -eps * (1+T)^(-log_gamma(Q)) * W(1+T) * f(1/(1+T) - 1),

with W = 1 (generic) or W = W^+/W^- (the a_p = 0 plus/minus case).  Writing
W = (1+T)^e, the whole prefactor is the single binomial series
(1+T)^(e - log_gamma(Q)).

Derivatives at T = 0 are replaced by Taylor coefficients throughout, which
avoids dividing by factorials.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .padic import PadicContext, PadicInt, PrecisionError, floor_log, is_prime, log_gamma
from .series import Certificate, TruncatedSeries, one_plus_T_pow, order_of_vanishing, sigma


class Flavor(enum.Enum):
    GENERIC = "generic"
    PLUS = "plus"
    MINUS = "minus"


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class FunctionalEquationError(ValueError):
    """The input series does not satisfy the functional equation it is checked against."""


class InconclusiveError(PrecisionError):
    """Precision ran out before a verdict could be certified."""

    def __init__(self, message: str, suggestion: tuple[int, int] | None = None):
        super().__init__(message)
        self.suggestion = suggestion


def w_exponent(flavor, p: int) -> Fraction:
    """Exponent e with W^±(1+T) = (1+T)^e, summed from the infinite products.

    W^+ = prod_{j>=1} (1+T)^(-p^(2j-1)(p-1)) and W^- = prod_{j>=1} (1+T)^(-p^(2j-2)(p-1))
    (for p = 2: (1+T)^(-1) prod_{j>=2} (1+T)^(-p^(2j-2)(p-1))); the exponents are
    p-adically convergent geometric series with ratio p^2.
    """
    flavor = Flavor(flavor)
    if flavor is Flavor.GENERIC:
        return Fraction(0)
    geo = Fraction(1, 1 - p * p)  # sum_{j>=0} p^(2j)
    if flavor is Flavor.PLUS:
        return -(p - 1) * p * geo
    if p == 2:
        return -1 - (p - 1) * p * p * geo
    return -(p - 1) * geo


@dataclass(frozen=True)
class FEParams:
    """Functional-equation data: tame level Q, sign eps, flavor, ambient context."""

    Q: int
    epsilon: int
    ctx: PadicContext
    flavor: Flavor = Flavor.GENERIC

    def __post_init__(self):
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if self.Q < 1 or self.Q % self.ctx.p == 0:
            raise ValueError(f"Q={self.Q} must be a positive integer coprime to p={self.ctx.p}")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")

    @property
    def L(self) -> PadicInt:
        """log_gamma(Q) at the working precision."""
        return log_gamma(self.Q, self.ctx)

    @property
    def w_exponent(self) -> Fraction:
        return w_exponent(self.flavor, self.ctx.p)

    def prefactor(self, M: int) -> TruncatedSeries:
        """(1+T)^(-log_gamma(Q)) * W(1+T) mod (p^N, T^M)."""
        return _prefactor(self, M)


@lru_cache(maxsize=512)
def _prefactor(params: FEParams, M: int) -> TruncatedSeries:
    ctx = params.ctx
    extra = floor_log(max(M - 1, 1), ctx.p)
    wide = ctx.with_precision(ctx.N + extra)
    expo = PadicInt.from_rational(params.w_exponent, ctx.p, ctx.N + extra) - log_gamma(params.Q, wide)
    return one_plus_T_pow(expo, ctx, M)


def _check_ctx(h: TruncatedSeries, params: FEParams):
    if h.ctx.p != params.ctx.p or h.ctx.kappa_gamma != params.ctx.kappa_gamma:
        raise ValueError("context mismatch between series and functional-equation data")


def phi(h: TruncatedSeries, params: FEParams) -> TruncatedSeries:
    """Right-hand side of the functional equation applied to h."""
    _check_ctx(h, params)
    return (params.prefactor(h.M) * sigma(h)) * (-params.epsilon)


def symmetrize(h: TruncatedSeries, params: FEParams) -> TruncatedSeries:
    """h + phi(h), a fixed point of phi because phi is an involution."""
    return h + phi(h, params)


@dataclass(frozen=True)
class FECheck:
    verdict: Verdict
    digits_verified: int
    terms_verified: int
    agreement_digits: int

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


def check_fe(f: TruncatedSeries, params: FEParams) -> FECheck:
    """Verify f = phi(f) mod (p^digits, T^M).

    The prefactor is built from an exponent lifted past the binomial loss and
    composition is exact at the truncation, so no digits or terms are lost.
    """
    rhs = phi(f, params)
    digits = min(f.prec, rhs.prec)
    agree = f.agreement_digits(rhs)
    verdict = Verdict.PASS if agree >= digits else Verdict.FAIL
    return FECheck(verdict, digits, f.M, agree)


def _require_fe(f, params):
    fe = check_fe(f, params)
    if not fe.passed:
        raise FunctionalEquationError(
            f"series fails the functional equation (agrees on {fe.agreement_digits} of {fe.digits_verified} digits)")
    return fe


def _order(f: TruncatedSeries) -> int:
    m, cert = order_of_vanishing(f)
    if cert is Certificate.INCONCLUSIVE:
        raise InconclusiveError(
            f"every coefficient vanishes mod p^{f.prec}", suggestion=(2 * f.ctx.N, 2 * f.M))
    return m


@dataclass(frozen=True)
class ParityReport:
    m: int
    predicted_sign: int
    observed_sign: int
    verdict: Verdict


def parity_check(f: TruncatedSeries, params: FEParams) -> ParityReport:
    """(-1)^m must equal -eps for an FE-satisfying f with order of vanishing m."""
    _require_fe(f, params)
    m = _order(f)
    predicted = -params.epsilon
    observed = (-1) ** m
    return ParityReport(m, predicted, observed, Verdict.PASS if predicted == observed else Verdict.FAIL)


def parity_pair(f_sharp: TruncatedSeries, f_flat: TruncatedSeries, params: FEParams) -> Verdict:
    """Two FE-satisfying series under the same data vanish to orders of equal parity."""
    a = parity_check(f_sharp, params)
    b = parity_check(f_flat, params)
    return Verdict.PASS if (a.m - b.m) % 2 == 0 else Verdict.FAIL


@dataclass(frozen=True)
class TaylorReport:
    m: int
    a: PadicInt
    b: PadicInt
    residual: PadicInt | None
    digits_verified: int
    loss: int
    verdict: Verdict


def taylor_relation(f: TruncatedSeries, params: FEParams) -> TaylorReport:
    """Check b = -(a/2) (log_gamma(Q) - e + m) for leading/sub-leading coefficients a, b.

    e is the W exponent (0 in the generic case).  The check is run on
    2b + a (L - e + m), which is integral; halving costs v_p(2) digits.
    """
    _require_fe(f, params)
    m = _order(f)
    if m + 1 >= f.M:
        raise InconclusiveError("sub-leading coefficient lies beyond the cap", suggestion=(f.ctx.N, 2 * f.M))
    a = f.coefficient(m)
    b = f.coefficient(m + 1)
    p = f.p
    shift = params.L - PadicInt.from_rational(params.w_exponent, p, params.ctx.N) + m
    twice = b * 2 + a * shift
    halving = 1 if p == 2 else 0
    digits = twice.k - halving
    ok = twice.residue == 0
    residual = None
    if twice.residue % 2 == 0 or p != 2:
        residual = twice / 2
    return TaylorReport(m, a, b, residual, digits, params.ctx.N - digits,
                        Verdict.PASS if ok else Verdict.FAIL)


def w_series(flavor, ctx: PadicContext, M: int = 64) -> TruncatedSeries:
    """W^±(1+T) from its closed-form exponent."""
    if Flavor(flavor) is Flavor.GENERIC:
        raise ValueError("w_series needs flavor plus or minus")
    return one_plus_T_pow(w_exponent(flavor, ctx.p), ctx, M)


def _int_power_series(n: int, ctx: PadicContext, M: int) -> TruncatedSeries:
    """(1+T)^n for an integer n, via exact integer binomials."""
    m = ctx.modulus
    coeffs = []
    if n >= 0:
        b = 1
        for k in range(M):
            if k:
                b = b * (n - k + 1) // k
            coeffs.append(b % m)
    else:
        # binom(n, k) = (-1)^k binom(-n + k - 1, k)
        b = 1
        for k in range(M):
            if k:
                b = b * (-n + k - 1) // k
            coeffs.append((-1) ** k * b % m)
    return TruncatedSeries(ctx, tuple(coeffs), ctx.N)


def product_factor_count(p: int, N: int, M: int) -> int:
    return -(-(N + floor_log(M, p) + 1) // 2)


@lru_cache(maxsize=64)
def w_series_product(flavor, ctx: PadicContext, M: int = 64, J: int | None = None) -> TruncatedSeries:
    """W^± as the literal finite product of its first J factors.

    The omitted factors are (1+T)^(p^(2J) z), whose coefficients below T^M are
    divisible by p^(2J - floor(log_p M)); the default J puts that beyond p^N.
    """
    flavor = Flavor(flavor)
    p = ctx.p
    if J is None:
        J = product_factor_count(p, ctx.N, M)
    result = TruncatedSeries.one(ctx, M)
    if flavor is Flavor.PLUS:
        exps = [-(p ** (2 * j - 1)) * (p - 1) for j in range(1, J + 1)]
    elif flavor is Flavor.MINUS:
        if p == 2:
            exps = [-1] + [-(p ** (2 * j - 2)) * (p - 1) for j in range(2, J + 1)]
        else:
            exps = [-(p ** (2 * j - 2)) * (p - 1) for j in range(1, J + 1)]
    else:
        raise ValueError("w_series_product needs flavor plus or minus")
    for n in exps:
        result = result * _int_power_series(n, ctx, M)
    return result


@dataclass(frozen=True)
class CurveContext:
    """Elliptic-curve data needed by the plus/minus relations."""

    N: int
    p: int
    a_p: int
    sign: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.N < 1 or self.N % self.p == 0:
            raise ValueError(f"p={self.p} must not divide the conductor N={self.N}")
        if self.a_p * self.a_p > 4 * self.p:
            raise ValueError(f"a_p={self.a_p} violates the Hasse bound for p={self.p}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def f_pm_derivative_forms(flavor, curve: CurveContext, ctx: PadicContext, M: int = 64):
    """(closed form, numeric) values of F^±'(0) for F^± = (1+T)^(-log_gamma(N)) W^±(1+T).

    The numeric route reads the T-coefficient of the product with W^± built
    from the literal truncated product, independent of the closed exponent.
    """
    flavor = Flavor(flavor)
    if flavor is Flavor.GENERIC:
        raise ValueError("flavor must be plus or minus")
    L = log_gamma(curve.N, ctx)
    closed = PadicInt.from_rational(w_exponent(flavor, ctx.p), ctx.p, ctx.N) - L
    wide = ctx.with_precision(ctx.N + floor_log(max(M - 1, 1), ctx.p))
    F = one_plus_T_pow(-log_gamma(curve.N, wide), ctx, M) * w_series_product(flavor, ctx, M)
    return closed, F.coefficient(1)


def f_pm_derivative_at_zero(flavor, curve: CurveContext, ctx: PadicContext) -> PadicInt:
    closed, numeric = f_pm_derivative_forms(flavor, curve, ctx)
    if not closed.agrees(numeric):
        raise ArithmeticError(f"closed form {closed!r} disagrees with product value {numeric!r}")
    return closed


def pm_taylor_relation(f: TruncatedSeries, flavor, curve: CurveContext, ctx: PadicContext) -> TaylorReport:
    """b = -(a/2)(log_gamma(N) - e + m) for the plus (e = p/(1+p)) or minus (e = 1/(1+p)) series."""
    flavor = Flavor(flavor)
    if flavor is Flavor.GENERIC:
        raise ValueError("flavor must be plus or minus")
    if curve.a_p != 0:
        raise ValueError("the plus/minus functional equations need a_p = 0")
    if curve.p != ctx.p:
        raise ValueError("curve prime differs from the context prime")
    params = FEParams(curve.N, curve.sign, ctx, flavor)
    return taylor_relation(f, params)
