"""
mu, lambda and the conjugate twist
==================================

The mu- and lambda-invariants of f and of u * f(1/(1+T) - 1) agree for
every unit u.  Here we generate series with prescribed invariants, twist
them and factor them by Weierstrass preparation.
"""

import random

from iwasawa import PadicContext, invariant_report, random_series, twist, weierstrass_prepare
from iwasawa.harness import random_unit

ctx = PadicContext(7, 40)
rng = random.Random(2024)

# %%
# p^mu * (distinguished polynomial of degree lam) * (random unit).
f = random_series(ctx, mu=2, lam=5, M=64, rng=rng)
rep = invariant_report(f)
print(f"mu={rep.mu} lambda={rep.lam} order={rep.m} certificate={rep.certificate.value}")

# %%
# Twisting by random units never moves the invariants.
for _ in range(5):
    g = twist(f, random_unit(ctx, 64, rng))
    r = invariant_report(g)
    print(f"twist: mu={r.mu} lambda={r.lam}")

# %%
# Weierstrass preparation recovers p^mu, the distinguished factor and the unit.
prep = weierstrass_prepare(f)
print("mu, lambda:", prep.mu, prep.lam)
print("D =", [prep.distinguished[i].lift() for i in range(prep.lam + 1)])
print("digits of D independent of the truncation:", prep.certified_digits)
print("p^mu * D * U reproduces f:", prep.recompose().agrees(f))

# %%
# Preparation refuses when lambda sits too close to the cap.
try:
    weierstrass_prepare(random_series(ctx, 0, 58, M=64, rng=rng, guard=4))
except ArithmeticError as exc:
    print("refused:", exc)
