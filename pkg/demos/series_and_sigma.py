"""
Truncated power series and the substitution T -> 1/(1+T) - 1
============================================================

Elements of Z_p[[T]] are kept modulo (p^N, T^M).  The involution sigma
replaces T by 1/(1+T) - 1.
"""

from fractions import Fraction

from iwasawa import PadicContext, TruncatedSeries, invert_unit, one_plus_T_pow, order_of_vanishing, sigma

ctx = PadicContext(5, 20)
M = 12
T = TruncatedSeries.gen(ctx, M)
one = TruncatedSeries.one(ctx, M)


def show(name, f):
    print(f"{name:>18}:", [c.lift() if c.k else 0 for c in (f[i] for i in range(M))])


# %%
# sigma(T) is -T + T^2 - T^3 + ..., and sigma undoes itself exactly.
show("sigma(T)", sigma(T))
f = TruncatedSeries.from_coeffs(ctx, [3, 1, 4, 1, 5, 9, 2, 6], M)
print("sigma(sigma(f)) == f:", sigma(sigma(f)) == f)

# %%
# (1+T)^c for a 5-adic exponent c, and the identity sigma((1+T)^c) = (1+T)^-c.
half = one_plus_T_pow(Fraction(1, 2), ctx, M)
show("(1+T)^(1/2)", half)
print("squared is 1+T:", half * half == one + T)
print("sigma flips the exponent:", sigma(half) == one_plus_T_pow(Fraction(-1, 2), ctx, M))

# %%
# Units invert; non-units are refused.
show("1/(1+T)", invert_unit(one + T))
try:
    invert_unit(T + 5)
except ValueError as exc:
    print("refused:", exc)

# %%
# The order of vanishing is certified: a series whose residues all vanish
# only tells us the order is at least M.
print(order_of_vanishing(T**3 * (one + T)))
print(order_of_vanishing(T * 5**20))
