import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwasawa.functional_equation import (
    CurveContext,
    FEParams,
    Flavor,
    FunctionalEquationError,
    InconclusiveError,
    Verdict,
    check_fe,
    f_pm_derivative_at_zero,
    f_pm_derivative_forms,
    parity_check,
    parity_pair,
    phi,
    pm_taylor_relation,
    product_factor_count,
    symmetrize,
    taylor_relation,
    w_exponent,
    w_series,
    w_series_product,
)
from iwasawa.padic import PadicContext, PadicInt, log_gamma
from iwasawa.series import TruncatedSeries, one_plus_T_pow, sigma

PRIMES = (2, 3, 5, 7)
N, M = 24, 32


def ctx_for(p, n=N):
    return PadicContext(p, n)


def alternating_from_T2(ctx, M=64):
    return TruncatedSeries.from_coeffs(ctx, [0, 0] + [(-1) ** i for i in range(M - 2)], M)


@st.composite
def fe_cases(draw, flavors=tuple(Flavor)):
    p = draw(st.sampled_from(PRIMES))
    ctx = ctx_for(p)
    Q = draw(st.integers(1, 5000).filter(lambda q: q % p))
    eps = draw(st.sampled_from((1, -1)))
    flavor = draw(st.sampled_from(flavors))
    coeffs = draw(st.lists(st.integers(0, p**N - 1), min_size=M, max_size=M))
    return FEParams(Q, eps, ctx, flavor), TruncatedSeries.from_coeffs(ctx, coeffs, M)


# parameters

def test_params_validation():
    ctx = ctx_for(3)
    with pytest.raises(ValueError):
        FEParams(6, 1, ctx)
    with pytest.raises(ValueError):
        FEParams(5, 0, ctx)
    params = FEParams(5, -1, ctx, "plus")
    assert params.flavor is Flavor.PLUS
    assert params.L == log_gamma(5, ctx)


@pytest.mark.parametrize("p", PRIMES)
def test_w_exponents(p):
    assert w_exponent(Flavor.PLUS, p) == Fraction(p, p + 1)
    assert w_exponent(Flavor.MINUS, p) == Fraction(1, p + 1)
    assert w_exponent(Flavor.PLUS, p) + w_exponent(Flavor.MINUS, p) == 1
    assert w_exponent(Flavor.GENERIC, p) == 0


def test_w_minus_exponent_at_two():
    assert w_exponent(Flavor.MINUS, 2) == Fraction(1, 3) == Fraction(2**2 - 2 - 1, 2 + 1)


# phi and symmetrize

@pytest.mark.parametrize("p", PRIMES)
def test_phi_examples(p):
    ctx = ctx_for(p)
    params = FEParams(1, -1, ctx)
    one = TruncatedSeries.one(ctx)
    T = TruncatedSeries.gen(ctx)
    assert params.L.residue == 0
    assert phi(one, params) == one
    assert phi(T, params) == sigma(T)


@pytest.mark.parametrize("p", PRIMES)
def test_symmetrize_examples(p):
    ctx = ctx_for(p)
    params = FEParams(1, -1, ctx)
    two = symmetrize(TruncatedSeries.one(ctx), params)
    assert two == TruncatedSeries.from_coeffs(ctx, [2])
    f = symmetrize(TruncatedSeries.gen(ctx), params)
    assert f == alternating_from_T2(ctx)


@given(fe_cases())
def test_phi_is_involution(case):
    params, h = case
    assert phi(phi(h, params), params) == h


@given(fe_cases())
def test_symmetrized_series_are_fixed(case):
    params, h = case
    f = symmetrize(h, params)
    assert phi(f, params) == f
    rep = check_fe(f, params)
    assert rep.passed and rep.digits_verified == N and rep.terms_verified == M


@given(fe_cases())
def test_fixed_locus_is_image_of_symmetrize(case):
    params, h = case
    f = symmetrize(h, params)
    assert symmetrize(f, params) == f * 2


def test_phi_prefactor_is_binomial_power():
    ctx = ctx_for(5)
    params = FEParams(7, 1, ctx, Flavor.PLUS)
    expo = PadicInt.from_rational(Fraction(5, 6), 5, N) - log_gamma(7, ctx)
    assert params.prefactor(64).agrees(one_plus_T_pow(expo, ctx, 64))


def test_phi_context_mismatch():
    params = FEParams(1, 1, ctx_for(3))
    with pytest.raises(ValueError):
        phi(TruncatedSeries.one(ctx_for(5)), params)
    with pytest.raises(ValueError):
        phi(TruncatedSeries.one(PadicContext(3, N, 13)), params)


@pytest.mark.parametrize("p", PRIMES)
def test_check_fe_rejects_T(p):
    rep = check_fe(TruncatedSeries.gen(ctx_for(p)), FEParams(1, -1, ctx_for(p)))
    assert rep.verdict is Verdict.FAIL and rep.agreement_digits == 0


# parity

@pytest.mark.parametrize("p", PRIMES)
def test_parity_examples(p):
    ctx = ctx_for(p)
    params = FEParams(1, -1, ctx)
    f = symmetrize(TruncatedSeries.gen(ctx), params)
    rep = parity_check(f, params)
    assert (rep.m, rep.predicted_sign, rep.observed_sign, rep.verdict) == (2, 1, 1, Verdict.PASS)
    rep2 = parity_check(TruncatedSeries.from_coeffs(ctx, [2]), params)
    assert rep2.m == 0 and rep2.verdict is Verdict.PASS
    assert parity_pair(f, TruncatedSeries.from_coeffs(ctx, [2]), params) is Verdict.PASS


@given(fe_cases())
def test_parity_of_fixed_points(case):
    params, h = case
    f = symmetrize(h, params)
    if f.is_zero():
        return
    rep = parity_check(f, params)
    assert rep.verdict is Verdict.PASS
    assert rep.m % 2 == (1 if params.epsilon == 1 else 0)


def test_parity_errors():
    ctx = ctx_for(3)
    params = FEParams(1, -1, ctx)
    with pytest.raises(FunctionalEquationError):
        parity_check(TruncatedSeries.gen(ctx), params)
    with pytest.raises(InconclusiveError) as info:
        parity_check(TruncatedSeries.zero(ctx), params)
    assert info.value.suggestion == (2 * N, 128)


# Taylor relation

@pytest.mark.parametrize("p", PRIMES)
def test_taylor_examples(p):
    ctx = ctx_for(p)
    params = FEParams(1, -1, ctx)
    rep = taylor_relation(TruncatedSeries.from_coeffs(ctx, [2]), params)
    assert (rep.m, rep.a.residue, rep.b.residue) == (0, 2, 0)
    assert rep.verdict is Verdict.PASS
    f = symmetrize(TruncatedSeries.gen(ctx), params)
    rep = taylor_relation(f, params)
    assert rep.m == 2 and rep.a.residue == 1 and rep.b.lift() == -1
    assert rep.verdict is Verdict.PASS
    assert rep.loss == (1 if p == 2 else 0)


@settings(max_examples=60)
@given(fe_cases(flavors=(Flavor.GENERIC,)), st.integers(0, 6))
def test_taylor_relation_holds(case, k):
    params, h = case
    f = symmetrize(h.shift(k), params)
    if f.is_zero():
        return
    rep = taylor_relation(f, params)
    assert rep.verdict is Verdict.PASS
    assert rep.loss <= (1 if params.ctx.p == 2 else 0)
    half = Fraction(1, 2)
    a, b, L, m = rep.a, rep.b, params.L, rep.m
    if params.ctx.p != 2:
        assert (b + a * (L + m) * half).residue == 0


def test_taylor_rejects_non_fe():
    ctx = ctx_for(5)
    with pytest.raises(FunctionalEquationError):
        taylor_relation(TruncatedSeries.gen(ctx), FEParams(1, -1, ctx))


def test_check_fe_detects_corruption():
    ctx = ctx_for(5)
    params = FEParams(1, -1, ctx)
    f = symmetrize(TruncatedSeries.gen(ctx), params)
    bad = f + TruncatedSeries.from_coeffs(ctx, [0, 0, 0, 5])
    assert not check_fe(bad, params).passed


# W series

@pytest.mark.parametrize("p", PRIMES)
def test_w_series_identities(p):
    ctx = PadicContext(p, 40)
    wp, wm = w_series("plus", ctx), w_series("minus", ctx)
    assert wp * wm == TruncatedSeries.from_coeffs(ctx, [1, 1])
    assert wp.coeffs[0] == 1 and wm.coeffs[0] == 1
    assert wp == w_series_product("plus", ctx, 64)
    assert wm == w_series_product("minus", ctx, 64)


def test_w_minus_at_two_is_cube_root():
    ctx = PadicContext(2, 40)
    wm = w_series(Flavor.MINUS, ctx)
    assert wm**3 == TruncatedSeries.from_coeffs(ctx, [1, 1])
    assert wm.coefficient(1) == PadicInt.from_rational(Fraction(1, 3), 2, 40)


def test_product_needs_enough_factors():
    ctx = PadicContext(3, 30)
    J = product_factor_count(3, 30, 64)
    full = w_series("plus", ctx)
    assert w_series_product("plus", ctx, 64, J) == full
    assert w_series_product("plus", ctx, 64, J - 3) != full
    with pytest.raises(ValueError):
        w_series("generic", ctx)


@pytest.mark.parametrize("p", PRIMES)
def test_derivative_at_zero(p):
    ctx = PadicContext(p, 40)
    unit_curve = CurveContext(1, p, 0, 1)
    assert f_pm_derivative_at_zero("plus", unit_curve, ctx) == PadicInt.from_rational(Fraction(p, p + 1), p, 40)
    assert f_pm_derivative_at_zero("minus", unit_curve, ctx) == PadicInt.from_rational(Fraction(1, p + 1), p, 40)
    curve = CurveContext(11 if p != 11 else 13, p, 0, -1)
    for flavor in ("plus", "minus"):
        closed, numeric = f_pm_derivative_forms(flavor, curve, ctx)
        assert closed == numeric
        expected = PadicInt.from_rational(w_exponent(flavor, p), p, 40) - log_gamma(curve.N, ctx)
        assert closed == expected


def test_curve_validation():
    with pytest.raises(ValueError):
        CurveContext(15, 3, 0, 1)
    with pytest.raises(ValueError):
        CurveContext(11, 3, 4, 1)
    with pytest.raises(ValueError):
        CurveContext(11, 3, 0, 2)


# plus/minus Taylor relation

@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("flavor", (Flavor.PLUS, Flavor.MINUS))
def test_pm_taylor_closed_instance(p, flavor):
    ctx = ctx_for(p)
    curve = CurveContext(1, p, 0, -1)
    f = symmetrize(TruncatedSeries.one(ctx), FEParams(1, -1, ctx, flavor))
    rep = pm_taylor_relation(f, flavor, curve, ctx)
    assert rep.verdict is Verdict.PASS and rep.m == 0
    e = w_exponent(flavor, p)
    assert rep.a.residue == 2
    assert rep.b == PadicInt.from_rational(e, p, N)
    # b / a = e / 2, i.e. p/(2(1+p)) for plus and 1/(2(1+p)) for minus
    assert rep.b * 2 == rep.a * PadicInt.from_rational(e, p, N)


@settings(max_examples=40)
@given(fe_cases(flavors=(Flavor.PLUS, Flavor.MINUS)))
def test_pm_taylor_relation_holds(case):
    params, h = case
    f = symmetrize(h, params)
    if f.is_zero():
        return
    curve = CurveContext(params.Q, params.ctx.p, 0, params.epsilon)
    rep = pm_taylor_relation(f, params.flavor, curve, params.ctx)
    assert rep.verdict is Verdict.PASS


def test_pm_taylor_requires_supersingular_data():
    ctx = ctx_for(5)
    f = symmetrize(TruncatedSeries.one(ctx), FEParams(1, -1, ctx, "plus"))
    with pytest.raises(ValueError):
        pm_taylor_relation(f, "plus", CurveContext(1, 5, 2, -1), ctx)
    with pytest.raises(ValueError):
        pm_taylor_relation(f, "generic", CurveContext(1, 5, 0, -1), ctx)
    with pytest.raises(FunctionalEquationError):
        pm_taylor_relation(f, "minus", CurveContext(1, 5, 0, -1), ctx)


def test_generic_relation_fails_on_plus_series():
    # the plus-flavored fixed points obey the shifted relation, not the generic one
    ctx = ctx_for(5)
    rng = random.Random(3)
    h = TruncatedSeries.from_coeffs(ctx, [rng.randrange(5**N) for _ in range(M)], M)
    plus = FEParams(7, 1, ctx, Flavor.PLUS)
    f = symmetrize(h, plus)
    assert not check_fe(f, FEParams(7, 1, ctx)).passed
