import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa.harness import random_series, random_unit
from iwasawa.invariants import (
    invariant_report,
    lambda_invariant,
    mu_invariant,
    weierstrass_prepare,
)
from iwasawa.padic import PadicContext, PrecisionError
from iwasawa.series import Certificate, TruncatedSeries

C, I = Certificate.CONCLUSIVE, Certificate.INCONCLUSIVE
primes = st.sampled_from((2, 3, 5, 7))


@st.composite
def profiles(draw, M=32):
    p = draw(primes)
    ctx = PadicContext(p, 24)
    mu = draw(st.integers(0, 3))
    lam = draw(st.integers(0, 10))
    seed = draw(st.integers(0, 2**32))
    return random_series(ctx, mu, lam, M, seed=seed), mu, lam


def test_mu_lambda_examples():
    for p in (2, 3, 5, 7):
        ctx = PadicContext(p, 20)
        assert mu_invariant(TruncatedSeries.from_coeffs(ctx, [p, p])) == (1, C)
    ctx = PadicContext(3, 20)
    f = TruncatedSeries.from_coeffs(ctx, [3, 3, 1])
    assert mu_invariant(f) == (0, C)
    assert lambda_invariant(f) == (2, C)
    zero = TruncatedSeries.from_coeffs(ctx, [3**20])
    assert mu_invariant(zero)[1] is I
    assert lambda_invariant(zero) == (None, I)


@given(primes, st.integers(0, 20), st.integers(0, 2**32))
def test_lambda_of_shifted_unit(p, k, seed):
    ctx = PadicContext(p, 20)
    u = random_unit(ctx, 32, random.Random(seed))
    assert lambda_invariant(u.shift(k)) == (k, C)
    assert mu_invariant(u.shift(k)) == (0, C)


@given(profiles())
def test_generator_hits_targets(case):
    f, mu, lam = case
    assert mu_invariant(f) == (mu, C)
    assert lambda_invariant(f) == (lam, C)


@given(profiles())
def test_scaling_and_shift(case):
    f, mu, lam = case
    assert mu_invariant(f * f.p) == (mu + 1, C)
    assert lambda_invariant(f * f.p) == (lam, C)
    assert lambda_invariant(f.shift(1)) == (lam + 1, C)
    assert mu_invariant(f.shift(1)) == (mu, C)


@given(profiles(), st.integers(0, 2**32))
def test_invariants_are_additive(case, seed):
    f, mu, lam = case
    g = random_series(f.ctx, 1, 5, f.M, seed=seed)
    assert mu_invariant(f * g) == (mu + 1, C)
    assert lambda_invariant(f * g) == (lam + 5, C)


@given(profiles())
def test_lower_precision_never_contradicts(case):
    f, mu, lam = case
    for k in (3, 8, 16):
        low = f.reduce(k)
        m, cert = mu_invariant(low)
        if cert:
            assert (m, lambda_invariant(low)[0]) == (mu, lam)
        else:
            assert mu >= k


def test_report_fields():
    ctx = PadicContext(5, 20)
    f = TruncatedSeries.from_coeffs(ctx, [0, 0, 10, 15, 1], 16)
    rep = invariant_report(f)
    assert (rep.mu, rep.lam, rep.m) == (0, 4, 2)
    assert rep.leading.residue == 10 and rep.subleading.residue == 15
    assert rep.certificate is C
    assert (rep.p, rep.N, rep.M, rep.kappa_gamma) == (5, 20, 16, 6)
    empty = invariant_report(TruncatedSeries.zero(ctx, 16))
    assert empty.certificate is I and empty.leading is None


# Weierstrass preparation

@pytest.mark.parametrize("p", (2, 3, 5, 7))
def test_prepare_distinguished_input(p):
    ctx = PadicContext(p, 20)
    f = TruncatedSeries.from_coeffs(ctx, [p, p, 1], 32)
    prep = weierstrass_prepare(f)
    assert (prep.mu, prep.lam) == (0, 2)
    assert prep.distinguished == f
    assert prep.unit == TruncatedSeries.one(ctx, 32)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
def test_prepare_p_times_unit(p):
    ctx = PadicContext(p, 20)
    u = random_unit(ctx, 32, random.Random(p))
    prep = weierstrass_prepare(u * p)
    assert (prep.mu, prep.lam) == (1, 0)
    assert prep.distinguished.coeffs == (1,) + (0,) * 31
    assert prep.unit.agrees(u)
    assert prep.recompose().agrees(u * p)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
def test_prepare_pure_power_of_T(p):
    ctx = PadicContext(p, 20)
    u = random_unit(ctx, 32, random.Random(p))
    prep = weierstrass_prepare(u.shift(4))
    assert prep.lam == 4
    assert prep.distinguished == TruncatedSeries.gen(ctx, 32) ** 4
    assert prep.recompose().agrees(u.shift(4))


@pytest.mark.parametrize("p", (2, 3, 5, 7))
def test_prepare_recovers_construction(p):
    rng = random.Random(100 + p)
    ctx = PadicContext(p, 24)
    M = 32
    low = [p * rng.randrange(p**23) for _ in range(3)]
    D = TruncatedSeries.from_coeffs(ctx, low + [1], M)
    U = random_unit(ctx, M, rng)
    f = (D * U).times_p(2)
    prep = weierstrass_prepare(f)
    assert (prep.mu, prep.lam) == (2, 3)
    assert prep.precision == 22
    assert prep.certified_digits > 0
    assert prep.distinguished.agrees(D, prep.certified_digits)
    # coefficient k of U sees the unknown tail beyond T^M only after (M-1-k)//lam contractions
    for k in range(M):
        digits = min(prep.precision, (M - 1 - k) // 3)
        assert (prep.unit.coeffs[k] - U.coeffs[k]) % p**digits == 0
    assert prep.recompose().agrees(f)
    d = prep.distinguished
    assert d.coeffs[3] == 1 and not any(d.coeffs[4:])
    assert all(c % p == 0 for c in d.coeffs[:3])


@given(profiles())
def test_prepare_recomposes(case):
    f, mu, lam = case
    prep = weierstrass_prepare(f)
    assert (prep.mu, prep.lam) == (mu, lam)
    assert prep.recompose().agrees(f)
    assert prep.unit.coeffs[0] % f.p != 0


def test_prepare_refusals():
    ctx = PadicContext(3, 20)
    with pytest.raises(PrecisionError):
        weierstrass_prepare(TruncatedSeries.zero(ctx, 32))
    near_cap = TruncatedSeries.gen(ctx, 32) ** 25
    with pytest.raises(PrecisionError):
        weierstrass_prepare(near_cap)
    assert weierstrass_prepare(near_cap, guard=4).lam == 25
