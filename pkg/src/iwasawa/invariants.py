"""mu and lambda invariants and Weierstrass preparation for truncated series."""

from __future__ import annotations

from dataclasses import dataclass

from .padic import PadicInt, PrecisionError, vp
from .series import Certificate, TruncatedSeries, _kmul, invert_unit, order_of_vanishing

DEFAULT_GUARD = 8


def _valuations(f: TruncatedSeries) -> list[int | None]:
    p = f.p
    return [vp(c, p) if c else None for c in f.coeffs]


def mu_invariant(f: TruncatedSeries) -> tuple[int, Certificate]:
    """Minimum valuation over the coefficients below the cap.

    Inconclusive when every residue vanishes; the value is then the lower
    bound ``f.prec``.
    """
    vals = [v for v in _valuations(f) if v is not None]
    if not vals:
        return f.prec, Certificate.INCONCLUSIVE
    return min(vals), Certificate.CONCLUSIVE


def lambda_invariant(f: TruncatedSeries) -> tuple[int | None, Certificate]:
    """Smallest index whose coefficient attains the mu-invariant (None if inconclusive)."""
    vals = _valuations(f)
    known = [v for v in vals if v is not None]
    if not known:
        return None, Certificate.INCONCLUSIVE
    mu = min(known)
    return vals.index(mu), Certificate.CONCLUSIVE


@dataclass(frozen=True)
class InvariantReport:
    mu: int
    lam: int | None
    m: int
    leading: PadicInt | None
    subleading: PadicInt | None
    certificate: Certificate
    p: int
    N: int
    M: int
    kappa_gamma: int


def invariant_report(f: TruncatedSeries) -> InvariantReport:
    mu, c1 = mu_invariant(f)
    lam, _ = lambda_invariant(f)
    m, c2 = order_of_vanishing(f)
    conclusive = c1 is Certificate.CONCLUSIVE and c2 is Certificate.CONCLUSIVE
    return InvariantReport(
        mu=mu,
        lam=lam,
        m=m,
        leading=f.coefficient(m) if conclusive else None,
        subleading=f.coefficient(m + 1) if conclusive and m + 1 < f.M else None,
        certificate=Certificate.CONCLUSIVE if conclusive else Certificate.INCONCLUSIVE,
        p=f.p,
        N=f.prec,
        M=f.M,
        kappa_gamma=f.ctx.kappa_gamma,
    )


@dataclass(frozen=True)
class Preparation:
    """f = p^mu * D * U with D distinguished of degree lam and U a unit.

    ``distinguished`` and ``unit`` are known mod p^precision (= prec(f) - mu)
    and are the exact preparation of the polynomial representative of f.
    Only the first ``certified_digits`` digits of D are independent of the
    unknown tail of f beyond T^M.
    """

    mu: int
    lam: int
    distinguished: TruncatedSeries
    unit: TruncatedSeries
    precision: int
    certified_digits: int
    iterations: int
    certificate: Certificate

    def recompose(self) -> TruncatedSeries:
        return (self.distinguished * self.unit).times_p(self.mu)


def weierstrass_prepare(f: TruncatedSeries, guard: int = DEFAULT_GUARD) -> Preparation:
    """Weierstrass preparation by successive approximation.

    With g = f / p^mu = B + T^lam C (deg B < lam, B = 0 mod p, C a unit), the
    quotient q of T^lam = q g + r solves q = C^{-1} (1 - tau(q B)), where tau
    drops the first lam terms and shifts down.  The map contracts by p^v(B),
    so it stabilises after at most ceil(n / v(B)) rounds; D = q g and U = 1/q.
    """
    mu, cert = mu_invariant(f)
    if not cert:
        raise PrecisionError("preparation refused: mu-invariant is inconclusive")
    lam, _ = lambda_invariant(f)
    M = f.M
    if lam >= M - guard:
        raise PrecisionError(f"preparation refused: lambda={lam} too close to cap M={M} (guard {guard})")
    g = f.divide_by_p(mu)
    n = g.prec
    p = f.p
    ctx = f.ctx
    m = p**n

    if lam == 0:
        one = TruncatedSeries.one(ctx, M).reduce(n)
        return Preparation(mu, 0, one, g, n, n, 0, Certificate.CONCLUSIVE)

    B = list(g.coeffs[:lam])
    vB = min((vp(b, p) for b in B if b), default=None)
    if vB is None:
        D = TruncatedSeries.one(ctx, M).reduce(n).shift(lam)
        U = TruncatedSeries(ctx, g.coeffs[lam:] + (0,) * lam, n)
        return Preparation(mu, lam, D, U, n, n, 0, Certificate.CONCLUSIVE)

    # work on the polynomial representative at a length where the truncation
    # error cannot reach indices < M within n digits
    rounds = -(-n // vB)
    K = M + lam * rounds
    C = list(g.coeffs[lam:]) + [0] * (K - (M - lam))
    Cinv = invert_unit(TruncatedSeries(ctx, tuple(C), n)).coeffs

    q = list(Cinv)
    bound = max(ctx.N, rounds) + 2
    for it in range(1, bound + 1):
        qB = _kmul(q, B, K + lam, m)
        rhs = [(-x) % m for x in qB[lam:lam + K]]
        rhs[0] = (rhs[0] + 1) % m
        nq = _kmul(Cinv, rhs, K, m)
        if nq == q:
            break
        q = nq
    else:
        raise PrecisionError("preparation refused: successive approximation did not stabilise")

    qB = _kmul(q, B, lam, m)
    D = TruncatedSeries(ctx, tuple(qB) + (1,) + (0,) * (M - lam - 1), n)
    qs = TruncatedSeries(ctx, tuple(q[:M]), n)
    U = invert_unit(qs)
    if any(c % p for c in D.coeffs[:lam]):
        raise ArithmeticError("internal error: prepared polynomial is not distinguished")
    if not (D * U).agrees(g):
        raise ArithmeticError("internal error: preparation does not recompose")
    certified = min(n, vB * (M // lam))
    return Preparation(mu, lam, D, U, n, certified, it, Certificate.CONCLUSIVE)
