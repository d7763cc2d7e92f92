"""
p-adic integers that know their own precision
=============================================

Every value carries the number of p-adic digits it is known to, and each
operation reports what it can still vouch for.
"""

from fractions import Fraction

from iwasawa import PadicContext, PadicInt, log_gamma, one_unit_projection, padic_binomial, padic_log

# %%
# A context fixes the prime, the working precision N and the generator
# kappa(gamma) of 1 + pZ_p (1 + p for odd p, 5 for p = 2).
ctx = PadicContext(3, 20)
print(ctx)

x = ctx(Fraction(1, 4))
print("1/4 in Z_3 mod 3^20:", x.residue)
print("times 4:", (x * 4).residue)

# %%
# Binary operations keep the smaller precision; dividing by p^v costs v digits.
a = PadicInt(3, 18, 20)
b = PadicInt(3, 9, 12)
print("a + b known to", (a + b).k, "digits")
print("a / b =", (a / b).residue, "known to", (a / b).k, "digits")

# %%
# The projection onto 1 + pZ_p divides out the Teichmüller representative.
u = PadicInt(5, 2, 15)
print("<2> in Z_5 is", one_unit_projection(u).residue, "which is 1 mod 5")

# %%
# The logarithm of a 1-unit loses nothing: the series is summed over a
# slightly wider modulus so that its denominators divide out exactly.
lg = padic_log(PadicInt(3, 4, 20))
print("log(4) in Z_3:", lg.residue, "with", lg.k, "digits")
print("log(16) = 2 log(4):", padic_log(PadicInt(3, 16, 20)) == lg * 2)

# %%
# log_gamma(x) = log<x> / log kappa(gamma).  Exact integer inputs are
# evaluated internally past the loss from dividing by log kappa(gamma).
for Q in (4, 7, 11, 49):
    print(f"log_gamma({Q}) =", log_gamma(Q, ctx).lift())

# %%
# Binomial coefficients of a 3-adic exponent come from one exact integer
# binomial of a lift, so they lose only floor(log_p k) digits.
c = ctx(Fraction(1, 4))
print("binom(1/4, 2) mod 27 =", padic_binomial(c, 2, ctx).reduce(3).residue)
print("binom(1/4, 9) is known to", padic_binomial(c, 9, ctx).k, "digits")
