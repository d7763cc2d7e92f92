"""Truncated elements of the Iwasawa algebra Z_p[[T]].

A :class:`TruncatedSeries` is known modulo ``(p**prec, T**M)``.  Residues are
stored as plain ints; every coefficient shares the series' achieved precision.

Products use Kronecker substitution: the coefficient vectors are packed into
two big integers, multiplied once, and unpacked.  That keeps a 64-term product
at a single big-int multiplication instead of ~M^2/2 small ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .padic import PadicContext, PadicInt, PrecisionError, floor_log

DEFAULT_M = 64


class Certificate(enum.Enum):
    CONCLUSIVE = "conclusive"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self):
        return self is Certificate.CONCLUSIVE


def _pack(coeffs: Sequence[int], w: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(w, "little") for c in coeffs), "little")


def _kmul(a: Sequence[int], b: Sequence[int], n: int, mod: int) -> list[int]:
    """First n coefficients of a*b reduced mod ``mod`` (inputs nonnegative, < mod)."""
    a = a[:n]
    b = b[:n]
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return [0] * n
    bits = 2 * (mod - 1).bit_length() + min(la, lb).bit_length() + 1
    w = (bits + 7) // 8
    A = _pack(a, w)
    C = A * A if a is b else A * _pack(b, w)
    slots = min(n, la + lb - 1)
    raw = C.to_bytes(w * (la + lb), "little")
    out = [int.from_bytes(raw[i * w:(i + 1) * w], "little") % mod for i in range(slots)]
    out.extend([0] * (n - slots))
    return out


def _lift_exponent(c, ctx: PadicContext, M: int) -> PadicInt:
    if isinstance(c, PadicInt):
        return c
    return PadicInt.from_rational(Fraction(c), ctx.p, ctx.N + floor_log(max(M - 1, 1), ctx.p))


@dataclass(frozen=True)
class TruncatedSeries:
    """An element of Z_p[[T]] modulo (p^prec, T^M)."""

    ctx: PadicContext
    coeffs: tuple[int, ...]
    prec: int

    def __post_init__(self):
        if self.prec > self.ctx.N:
            raise PrecisionError(f"precision {self.prec} exceeds working precision {self.ctx.N}")
        m = self.ctx.p**self.prec
        if any(not 0 <= c < m for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(c % m for c in self.coeffs))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, ctx: PadicContext, coeffs: Iterable, M: int = DEFAULT_M,
                    prec: int | None = None) -> TruncatedSeries:
        """Build from ints, Fractions or PadicInts; pads with zeros up to M."""
        coeffs = list(coeffs)
        if len(coeffs) > M:
            coeffs = coeffs[:M]
        k = ctx.N if prec is None else prec
        for c in coeffs:
            if isinstance(c, PadicInt):
                k = min(k, c.k)
        m = ctx.p**k
        res = []
        for c in coeffs:
            if isinstance(c, PadicInt):
                res.append(c.residue % m)
            elif isinstance(c, Fraction):
                res.append(PadicInt.from_rational(c, ctx.p, k).residue)
            else:
                res.append(int(c) % m)
        res.extend([0] * (M - len(res)))
        return cls(ctx, tuple(res), k)

    @classmethod
    def zero(cls, ctx: PadicContext, M: int = DEFAULT_M) -> TruncatedSeries:
        return cls(ctx, (0,) * M, ctx.N)

    @classmethod
    def one(cls, ctx: PadicContext, M: int = DEFAULT_M) -> TruncatedSeries:
        return cls.from_coeffs(ctx, [1], M)

    @classmethod
    def gen(cls, ctx: PadicContext, M: int = DEFAULT_M) -> TruncatedSeries:
        """The variable T."""
        return cls.from_coeffs(ctx, [0, 1], M)

    # -- accessors ----------------------------------------------------------

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def modulus(self) -> int:
        return self.ctx.p**self.prec

    def coefficient(self, i: int) -> PadicInt:
        return PadicInt(self.p, self.coeffs[i] if i < self.M else 0, self.prec)

    __getitem__ = coefficient

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def reduce(self, prec: int) -> TruncatedSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        m = self.p**prec
        return TruncatedSeries(self.ctx, tuple(c % m for c in self.coeffs), prec)

    def truncate(self, M: int) -> TruncatedSeries:
        coeffs = self.coeffs[:M] + (0,) * max(0, M - self.M)
        return TruncatedSeries(self.ctx, coeffs, self.prec)

    def agrees(self, other: TruncatedSeries, prec: int | None = None) -> bool:
        """Residue equality at the lower of the two precisions (or ``prec``)."""
        self._check(other)
        k = min(self.prec, other.prec)
        if prec is not None:
            if prec > k:
                return False
            k = prec
        m = self.p**k
        return all((a - b) % m == 0 for a, b in zip(self.coeffs, other.coeffs))

    def agreement_digits(self, other: TruncatedSeries) -> int:
        """Number of p-adic digits on which all coefficients of self and other agree."""
        diff = self - other
        vals = [PadicInt(self.p, c, diff.prec).valuation() for c in diff.coeffs if c]
        return min(vals) if vals else diff.prec

    # -- ring structure -----------------------------------------------------

    def _check(self, other: TruncatedSeries):
        if other.ctx.p != self.ctx.p or other.M != self.M:
            raise ValueError(
                f"context mismatch: (p={self.p}, M={self.M}) vs (p={other.p}, M={other.M})")

    def _scalar(self, c) -> PadicInt:
        if isinstance(c, PadicInt):
            return c
        if isinstance(c, Fraction):
            return PadicInt.from_rational(c, self.p, self.prec)
        return PadicInt(self.p, c % self.modulus, self.prec)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, (int, Fraction, PadicInt)):
                return self + self.constant_like(other)
            return NotImplemented
        self._check(other)
        k = min(self.prec, other.prec)
        m = self.p**k
        return TruncatedSeries(self.ctx, tuple((a + b) % m for a, b in zip(self.coeffs, other.coeffs)), k)

    __radd__ = __add__

    def __neg__(self):
        m = self.modulus
        return TruncatedSeries(self.ctx, tuple(-c % m for c in self.coeffs), self.prec)

    def __sub__(self, other):
        if not isinstance(other, (TruncatedSeries, int, Fraction, PadicInt)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            k = min(self.prec, other.prec)
            m = self.p**k
            a = self.coeffs if self.prec == k else tuple(c % m for c in self.coeffs)
            if other is self:
                b = a
            else:
                b = other.coeffs if other.prec == k else tuple(c % m for c in other.coeffs)
            coeffs = _kmul(a, b, self.M, m)
            return TruncatedSeries(self.ctx, tuple(coeffs), k)
        if isinstance(other, (int, Fraction, PadicInt)):
            c = self._scalar(other)
            k = min(self.prec, c.k)
            m = self.p**k
            return TruncatedSeries(self.ctx, tuple(a * c.residue % m for a in self.coeffs), k)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return invert_unit(self) ** (-e)
        result = TruncatedSeries.one(self.ctx, self.M).reduce(self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def constant_like(self, c) -> TruncatedSeries:
        c = self._scalar(c)
        return TruncatedSeries.from_coeffs(self.ctx, [c], self.M)

    def shift(self, k: int) -> TruncatedSeries:
        """Multiply by T^k (truncated)."""
        if k < 0:
            raise ValueError("use a nonnegative shift")
        return TruncatedSeries(self.ctx, ((0,) * k + self.coeffs)[:self.M], self.prec)

    def divide_by_p(self, v: int) -> TruncatedSeries:
        """Exact division of every coefficient by p^v; costs v digits."""
        pv = self.p**v
        if any(c % pv for c in self.coeffs):
            raise ArithmeticError(f"series is not divisible by p^{v}")
        return TruncatedSeries(self.ctx, tuple(c // pv for c in self.coeffs), self.prec - v)

    def times_p(self, v: int) -> TruncatedSeries:
        """Exact multiplication by p^v, gaining v digits of absolute precision."""
        pv = self.p**v
        prec = min(self.ctx.N, self.prec + v)
        m = self.p**prec
        return TruncatedSeries(self.ctx, tuple(c * pv % m for c in self.coeffs), prec)

    # -- substitution and units --------------------------------------------

    def compose(self, s: TruncatedSeries) -> TruncatedSeries:
        return compose(self, s)

    def sigma(self) -> TruncatedSeries:
        return sigma(self)

    def __call__(self, s: TruncatedSeries) -> TruncatedSeries:
        return compose(self, s)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.M > 6 else ""
        return f"TruncatedSeries(p={self.p}, prec={self.prec}, M={self.M}, [{shown}{more}])"


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def compose(f: TruncatedSeries, s: TruncatedSeries) -> TruncatedSeries:
    """f(s(T)) mod (p^prec, T^M) by Horner's rule; s must have zero constant term."""
    f._check(s)
    if s.coeffs[0] % s.modulus:
        raise ValueError("substituted series must have zero constant term")
    k = min(f.prec, s.prec)
    m = f.p**k
    M = f.M
    sc = [c % m for c in s.coeffs]
    acc = [0] * M
    for a in reversed(f.coeffs):
        acc = _kmul(acc, sc, M, m)
        acc[0] = (acc[0] + a) % m
    return TruncatedSeries(f.ctx, tuple(acc), k)


def sigma_series(ctx: PadicContext, M: int = DEFAULT_M) -> TruncatedSeries:
    """1/(1+T) - 1 = -T + T^2 - T^3 + ..."""
    return TruncatedSeries.from_coeffs(ctx, [0] + [(-1) ** k for k in range(1, M)], M)


def sigma(f: TruncatedSeries) -> TruncatedSeries:
    """The involution T -> 1/(1+T) - 1.

    Equal to ``compose(f, sigma_series(...))`` but computed from
    (-T/(1+T))^k = (-1)^k sum_n binom(n-1, k-1) (-1)^(n-k) T^n, i.e.
    sigma(f)_n = (-1)^n sum_k binom(n-1, k-1) a_k: a binomial transform,
    done with ~M^2/2 additions along Pascal's triangle.
    """
    m = f.modulus
    x = list(f.coeffs[1:])
    n = len(x)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            x[i] += x[i - 1]
    out = [f.coeffs[0]]
    for i, b in enumerate(x):
        out.append((b if i % 2 else -b) % m)
    return TruncatedSeries(f.ctx, tuple(out), f.prec)


def one_plus_T_pow(c, ctx: PadicContext, M: int = DEFAULT_M) -> TruncatedSeries:
    """(1+T)^c = sum_k binom(c, k) T^k for c in Z_p.

    Exact ints and Fractions are lifted far enough to give all N digits; a
    PadicInt known mod p^n yields precision n - floor(log_p(M-1)) (capped at N).
    """
    c = _lift_exponent(c, ctx, M)
    prec = min(ctx.N, c.k - floor_log(max(M - 1, 1), ctx.p))
    if prec < 0:
        raise PrecisionError("exponent known to too few digits")
    m = ctx.p**prec
    lift = c.residue
    coeffs = []
    b = 1
    for k in range(M):
        if k:
            b = b * (lift - k + 1) // k
        coeffs.append(b % m)
    return TruncatedSeries(ctx, tuple(coeffs), prec)


def invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a unit of Z_p[[T]] by Newton iteration g <- g(2 - fg)."""
    if f.prec == 0 or f.coeffs[0] % f.p == 0:
        raise ValueError("not a unit in Lambda: constant term is divisible by p")
    m = f.modulus
    g = [pow(f.coeffs[0], -1, m)]
    n = 1
    while n < f.M:
        n = min(2 * n, f.M)
        e = _kmul(f.coeffs, g, n, m)
        e = [(-x) % m for x in e]
        e[0] = (e[0] + 2) % m
        g = _kmul(g, e, n, m)
    return TruncatedSeries(f.ctx, tuple(g), f.prec)


def order_of_vanishing(f: TruncatedSeries) -> tuple[int, Certificate]:
    """Index of the first coefficient distinguishable from 0.

    When every residue vanishes the order is only known to be >= M and the
    certificate is inconclusive.
    """
    for i, c in enumerate(f.coeffs):
        if c:
            return i, Certificate.CONCLUSIVE
    return f.M, Certificate.INCONCLUSIVE
