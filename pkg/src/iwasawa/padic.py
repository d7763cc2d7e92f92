"""p-adic integers at finite, explicitly tracked precision.

A :class:`PadicInt` is a residue modulo ``p**k`` together with its achieved
precision ``k``.  Every operation returns a value whose precision is never
larger than what the inputs actually determine, so that reducing a result
computed at higher precision always agrees with the lower-precision result
on the digits it claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb


class PrecisionError(ArithmeticError):
    """Raised when an operation would need more p-adic digits than available."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def floor_log(n: int, p: int) -> int:
    """Largest e with p**e <= n (n >= 1); equals max v_p(i) over 1 <= i <= n."""
    e = 0
    q = p
    while q <= n:
        q *= p
        e += 1
    return e


def default_kappa_gamma(p: int) -> int:
    return 5 if p == 2 else 1 + p


@dataclass(frozen=True)
class PadicContext:
    """Ambient arithmetic: prime ``p``, working precision ``N`` and kappa(gamma).

    ``kappa_gamma`` is stored as the exact integer chosen for the value of the
    cyclotomic character on the fixed topological generator; it defaults to
    ``1 + p`` (``5`` when ``p == 2``).
    """

    p: int
    N: int
    kappa_gamma: int = 0

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.N < 8:
            raise ValueError(f"working precision N={self.N} must be >= 8")
        if self.kappa_gamma == 0:
            object.__setattr__(self, "kappa_gamma", default_kappa_gamma(self.p))
        p, kg = self.p, self.kappa_gamma
        if p == 2:
            if kg % 8 != 5:
                raise ValueError("kappa_gamma must be 5 mod 8 for p = 2")
        elif kg % (p * p) != (1 + p) % (p * p):
            raise ValueError(f"kappa_gamma must be 1 + p mod p^2 (p={p})")

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def with_precision(self, N: int) -> PadicContext:
        return PadicContext(self.p, N, self.kappa_gamma)

    def __call__(self, value) -> PadicInt:
        """Coerce an int or Fraction (p-integral) into a PadicInt at precision N."""
        if isinstance(value, PadicInt):
            return value.reduce(min(value.k, self.N))
        if isinstance(value, Fraction):
            return PadicInt.from_rational(value, self.p, self.N)
        return PadicInt(self.p, value % self.modulus, self.N)


@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p known modulo ``p**k``."""

    p: int
    residue: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise PrecisionError("negative precision")
        m = self.p**self.k
        if not 0 <= self.residue < m:
            object.__setattr__(self, "residue", self.residue % m)

    @classmethod
    def from_rational(cls, x, p: int, k: int) -> PadicInt:
        x = Fraction(x)
        den = x.denominator
        if den % p == 0:
            raise ValueError(f"{x} is not a {p}-adic integer")
        m = p**k
        return cls(p, x.numerator * pow(den, -1, m) % m, k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def reduce(self, k: int) -> PadicInt:
        if k > self.k:
            raise PrecisionError(f"cannot raise precision from {self.k} to {k}")
        return PadicInt(self.p, self.residue % self.p**k, k)

    def lift(self) -> int:
        """Signed representative in (-p^k/2, p^k/2]; handy for display."""
        m = self.modulus
        r = self.residue
        return r - m if r > m // 2 else r

    def valuation(self) -> int | None:
        """Largest v < k with p^v dividing the residue, or None if indistinguishable from 0."""
        if self.residue == 0:
            return None
        return vp(self.residue, self.p)

    def is_unit(self) -> bool:
        return self.k > 0 and self.residue % self.p != 0

    def agrees(self, other, k: int | None = None) -> bool:
        """Equality on the digits both sides determine (or the first ``k``)."""
        other = self._coerce(other)
        kk = min(self.k, other.k) if k is None else k
        if kk > min(self.k, other.k):
            return False
        return (self.residue - other.residue) % self.p**kk == 0

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError("mismatched primes")
            return other
        if isinstance(other, Fraction):
            return PadicInt.from_rational(other, self.p, self.k)
        if isinstance(other, int):
            return PadicInt(self.p, other % self.modulus, self.k)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = min(self.k, other.k)
        return PadicInt(self.p, (self.residue + other.residue) % self.p**k, k)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, -self.residue % self.modulus, self.k)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = min(self.k, other.k)
        return PadicInt(self.p, self.residue * other.residue % self.p**k, k)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by p^v * unit; costs v digits."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by a value indistinguishable from 0")
        k = min(self.k, other.k) - v
        if k < 0:
            raise PrecisionError("division exhausts precision")
        sv = self.valuation()
        if sv is not None and sv < v:
            raise ArithmeticError("quotient is not a p-adic integer")
        m = self.p**k
        pv = self.p**v
        return PadicInt(self.p, (self.residue // pv) * pow(other.residue // pv, -1, m) % m, k)

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_unit():
                raise ZeroDivisionError("negative power of a non-unit")
            return PadicInt(self.p, pow(pow(self.residue, -1, self.modulus), -e, self.modulus), self.k)
        return PadicInt(self.p, pow(self.residue, e, self.modulus), self.k)

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"PadicInt({self.residue} mod {self.p}^{self.k})"


def valuation(x: PadicInt) -> int | None:
    return x.valuation()


def teichmuller(x: PadicInt) -> PadicInt:
    """Teichmüller representative omega(x): the fixed point of t -> t^p mod p^k."""
    if not x.is_unit():
        raise ValueError("Teichmüller lift needs a unit")
    m = x.modulus
    t = x.residue
    while True:
        s = pow(t, x.p, m)
        if s == t:
            return PadicInt(x.p, t, x.k)
        t = s


def one_unit_projection(x: PadicInt) -> PadicInt:
    """Projection <x> of a unit onto 1 + pZ_p (onto 1 + 4Z_2 when p = 2)."""
    if not x.is_unit():
        raise ValueError(f"{x!r} is not a unit")
    if x.p == 2:
        if x.k < 2:
            raise PrecisionError("need at least 2 digits to project onto 1 + 4Z_2")
        return x if x.residue % 4 == 1 else -x
    w = teichmuller(x)
    return x * w**-1


def _is_one_unit(x: PadicInt) -> bool:
    if x.p == 2:
        return x.k >= 2 and x.residue % 4 == 1
    return x.k >= 1 and x.residue % x.p == 1


def padic_log(x: PadicInt, ctx: PadicContext | None = None) -> PadicInt:
    """Iwasawa-free p-adic logarithm of a 1-unit.

    log maps 1 + p^k Z_p into p^k Z_p (k >= 2 when p = 2), so the residue of
    ``x`` mod p^k determines log(x) mod p^k: no digits are lost.  The series
    is summed over a widened modulus p^(k+E) so that dividing by the p-part of
    each index is exact.
    """
    if not _is_one_unit(x):
        raise ValueError(f"{x!r} is not a 1-unit")
    p, k = x.p, x.k
    y = (x.residue - 1) % x.modulus
    if y == 0:
        return PadicInt(p, 0, k)
    v = vp(y, p)
    # j*v - v_p(j) >= k kills term j; j*v - floor(log_p j) is nondecreasing in j
    J = 1
    while (J + 1) * v - floor_log(J + 1, p) < k:
        J += 1
    E = floor_log(J, p)
    big = p ** (k + E)
    mod = p**k
    total = 0
    power = 1
    for j in range(1, J + 1):
        power = power * y % big
        e = vp(j, p)
        u = j // p**e
        term = (power // p**e) * pow(u, -1, mod)
        total += term if j % 2 else -term
    return PadicInt(p, total % mod, k)


@lru_cache(maxsize=256)
def _log_kappa(p: int, kappa_gamma: int, k: int) -> PadicInt:
    return padic_log(PadicInt(p, kappa_gamma % p**k, k))


def log_gamma(x, ctx: PadicContext) -> PadicInt:
    """log<x> / log kappa(gamma).

    An exact ``int`` (or p-integral ``Fraction``) unit is evaluated at an
    internally raised precision so the result carries the full N digits.  A
    :class:`PadicInt` input loses v(log kappa(gamma)) digits (1, or 2 for p = 2).
    """
    p = ctx.p
    loss = 2 if p == 2 else 1
    if isinstance(x, PadicInt):
        xp = x
    else:
        xp = PadicInt.from_rational(Fraction(x), p, ctx.N + loss)
    if not xp.is_unit():
        raise ValueError(f"log_gamma needs a unit, got {x!r}")
    num = padic_log(one_unit_projection(xp))
    den = _log_kappa(p, ctx.kappa_gamma, xp.k)
    out = num / den
    return out.reduce(min(out.k, ctx.N))


def padic_binomial(c: PadicInt, k: int, ctx: PadicContext) -> PadicInt:
    """binom(c, k) in Z_p via an exact integer binomial of a lift of c.

    If c is known mod p^n, then binom(c, k) is known mod p^(n - floor(log_p k)):
    binom(c + h, k) - binom(c, k) = sum_{i>=1} binom(h, i) binom(c, k - i) and
    v(binom(h, i)) >= v(h) - v_p(i).  Precision is capped at N.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return PadicInt(ctx.p, 1, ctx.N)
    prec = min(ctx.N, c.k - floor_log(k, ctx.p))
    if prec < 0:
        raise PrecisionError(f"binom(c, {k}) needs more digits of c than {c.k}")
    return PadicInt(ctx.p, comb(c.residue, k) % ctx.p**prec, prec)
