"""
Functional equations, parity and Taylor coefficients
====================================================

A series satisfies the functional equation with data (Q, eps) when

    f(T) = -eps * (1+T)^(-log_gamma(Q)) * f(1/(1+T) - 1).

Its order of vanishing m then has parity fixed by eps, and its first two
Taylor coefficients a, b satisfy b = -(a/2)(log_gamma(Q) + m).
"""

import random

from iwasawa import (
    CurveContext,
    FEParams,
    PadicContext,
    TruncatedSeries,
    check_fe,
    f_pm_derivative_at_zero,
    parity_check,
    pm_taylor_relation,
    symmetrize,
    taylor_relation,
    w_series,
)
from iwasawa.harness import random_element

ctx = PadicContext(3, 40)
rng = random.Random(7)

# %%
# symmetrize(h) = h + phi(h) always satisfies the equation.
params = FEParams(Q=1, epsilon=-1, ctx=ctx)
f = symmetrize(TruncatedSeries.gen(ctx), params)
print("symmetrize(T) starts", [f[i].lift() for i in range(8)])
print(check_fe(f, params))

# %%
# Parity: (-1)^m = -eps.
for eps in (1, -1):
    p = FEParams(Q=11, epsilon=eps, ctx=ctx)
    g = symmetrize(random_element(ctx, 64, rng), p)
    print(f"eps={eps:+d}: m={parity_check(g, p).m}")

# %%
# The Taylor relation, checked in the integral form 2b + a(L + m) = 0.
p11 = FEParams(Q=11, epsilon=1, ctx=ctx)
g = symmetrize(random_element(ctx, 64, rng).shift(3), p11)
rep = taylor_relation(g, p11)
print(f"m={rep.m} verdict={rep.verdict.value} digits={rep.digits_verified}")

# %%
# When a_p = 0 the plus and minus series carry an extra factor
# W^+ = (1+T)^(p/(p+1)) or W^- = (1+T)^(1/(p+1)); their product is 1+T.
wp, wm = w_series("plus", ctx), w_series("minus", ctx)
print("W+ W- = 1+T:", wp * wm == TruncatedSeries.from_coeffs(ctx, [1, 1]))
curve = CurveContext(N=17, p=3, a_p=0, sign=-1)
print("(F+)'(0) =", f_pm_derivative_at_zero("plus", curve, ctx).lift())

# %%
# The plus relation b = -(a/2)(log_gamma(N) - p/(p+1) + m).
plus = FEParams(Q=17, epsilon=-1, ctx=ctx, flavor="plus")
g = symmetrize(random_element(ctx, 64, rng), plus)
print(pm_taylor_relation(g, "plus", curve, ctx).verdict.value)
