"""Partial zeta values, q-l-values, and their p-adic interpolations."""

import math
from fractions import Fraction

import pytest

from qlfun.characters import DirichletCharacter, twist
from qlfun.lfun import (
    H_pq,
    K_full,
    K_partial,
    PartialZetaParams,
    T_full,
    T_partial,
    l_pq,
    lq_neg,
    lq_neg_series_path,
    partial_zeta_neg,
)
from qlfun.numerics import (
    QContext,
    q_int,
    residual_valuation,
    teichmuller,
    v_p,
)
from qlfun.qeuler import euler_number, gen_euler_number

CTX34 = QContext(p=3, q=Fraction(4), precision=8)
CTX56 = QContext(p=5, q=Fraction(6), precision=8)


# ---------------------------------------------------------------------------
# partial zeta values at negative integers
# ---------------------------------------------------------------------------

def test_params_validation():
    with pytest.raises(ValueError):
        PartialZetaParams(0, 3)
    with pytest.raises(ValueError):
        PartialZetaParams(3, 3)
    with pytest.raises(ValueError):
        PartialZetaParams(1, 4)


def test_partial_zeta_trivial_values():
    assert partial_zeta_neg(0, PartialZetaParams(1, 3), Fraction(2)) == Fraction(-1, 2)
    assert partial_zeta_neg(0, PartialZetaParams(2, 3), Fraction(2)) == Fraction(1, 2)


def test_partial_zeta_value_at_q_two():
    # = (-1) * ([3]_2 / 2) * E_{1,8}(1/3); the closed form is pinned by the
    # convergent-series oracle below
    got = partial_zeta_neg(1, PartialZetaParams(1, 3), Fraction(2))
    assert got == Fraction(5, 18)


def abel_partial_zeta(n: int, a: int, F: int, q: Fraction, terms: int = 300) -> Fraction:
    """Averaged partial sums of sum_{m = a mod F, m > 0} (-1)^m [m]^n at |q| < 1."""
    partial = Fraction(0)
    history = []
    m = a
    while len(history) < terms + 2:
        partial += Fraction((-1) ** m) * q_int(m, q) ** n
        history.append(partial)
        m += F
    return (history[-1] + history[-2]) / 2


@pytest.mark.parametrize("n,a,F", [(0, 1, 3), (1, 1, 3), (1, 2, 3),
                                   (2, 1, 5), (2, 4, 5), (3, 2, 3)])
def test_partial_zeta_matches_convergent_series(n, a, F):
    q = Fraction(1, 2)
    closed = partial_zeta_neg(n, PartialZetaParams(a, F), q)
    assert abs(abel_partial_zeta(n, a, F, q) - closed) < Fraction(1, 10**6)


# ---------------------------------------------------------------------------
# l-values at negative integers: two routes
# ---------------------------------------------------------------------------

def test_lq_neg_examples():
    triv = DirichletCharacter.trivial()
    assert lq_neg(1, triv, q=Fraction(2)) == Fraction(-1, 3)
    quad3 = DirichletCharacter.quadratic(3)
    assert lq_neg(0, quad3, q=Fraction(2)) == -2


@pytest.mark.parametrize("q", [Fraction(2), Fraction(1, 2), Fraction(4)])
def test_lq_dual_paths_exact_characters(q):
    for chi in (DirichletCharacter.quadratic(3), DirichletCharacter.quadratic(5)):
        for k in range(5):
            assert lq_neg(k, chi, q=q) == lq_neg_series_path(k, chi, q=q)
    # the series route needs k >= 1 for the trivial character (its index-0
    # term differs between the two defining series)
    triv = DirichletCharacter.trivial()
    for k in range(1, 5):
        assert lq_neg(k, triv, q=q) == lq_neg_series_path(k, triv, q=q)


def test_lq_dual_paths_padic_character():
    w1 = DirichletCharacter.teichmuller_power(1, 5)
    for k in range(1, 4):
        direct = gen_euler_number(k, w1, ctx=CTX56)
        series = lq_neg_series_path(k, w1, ctx=CTX56)
        assert residual_valuation(direct, series) >= CTX56.precision


# ---------------------------------------------------------------------------
# interpolation: H_pq
# ---------------------------------------------------------------------------

def test_H_pq_at_zero():
    for a in (1, 2):
        res = H_pq(0, PartialZetaParams(a, 3), CTX34)
        assert res.converged
        expected = CTX34.embed(Fraction((-1) ** a, 2))
        assert residual_valuation(res.value, expected) >= CTX34.working_precision


@pytest.mark.parametrize("ctx", [QContext(p=3, q=Fraction(4), precision=8),
                                 QContext(p=5, q=Fraction(6), precision=8),
                                 QContext(p=3, q=Fraction(1 + 3), precision=8),
                                 QContext(p=5, q=Fraction(1 + 5), precision=8)])
def test_H_pq_interpolates_twisted_partial_zeta(ctx):
    p = ctx.p
    for n in range(6):
        loss = int(v_p(math.factorial(n), p)) + 2
        for a in range(1, p):
            prm = PartialZetaParams(a, p)
            left = H_pq(-n, prm, ctx)
            assert left.converged
            w = teichmuller(a, p, ctx.working_precision)
            right = w ** (-n) * ctx.embed(partial_zeta_neg(n, prm, ctx.q))
            assert residual_valuation(left.value, right) >= ctx.precision - loss


def test_H_pq_rejects_bad_params():
    with pytest.raises(ValueError):
        H_pq(0, PartialZetaParams(1, 5), CTX34)  # F not a multiple of p
    with pytest.raises(ValueError):
        H_pq(0, PartialZetaParams(3, 9), CTX34)  # a not a unit
    ctx_q1 = QContext(p=3, q=Fraction(1), precision=8)
    with pytest.raises(ValueError, match="classical limit"):
        H_pq(0, PartialZetaParams(1, 3), ctx_q1)


def test_H_pq_accepts_padic_exponent():
    prm = PartialZetaParams(2, 3)
    int_path = H_pq(-2, prm, CTX34)
    embedded = H_pq(CTX34.embed(-2), prm, CTX34)
    assert residual_valuation(int_path.value, embedded.value) >= CTX34.precision


# ---------------------------------------------------------------------------
# interpolation: l_pq
# ---------------------------------------------------------------------------

def test_l_pq_vanishes_at_zero_for_trivial():
    res = l_pq(0, DirichletCharacter.trivial(), CTX34, F=3)
    assert res.value.is_zero or res.value.valuation >= CTX34.precision
    res5 = l_pq(0, DirichletCharacter.trivial(), CTX56, F=5)
    assert res5.value.is_zero or res5.value.valuation >= CTX56.precision


def test_l_pq_pinned_value():
    w1 = DirichletCharacter.teichmuller_power(1, 3)
    res = l_pq(-1, w1, CTX34, F=3)
    assert residual_valuation(res.value, CTX34.embed(Fraction(8, 65))) >= 6


def eq18_right_side(n: int, chi: DirichletCharacter, ctx: QContext):
    """E_{n,chi w^-n, q} - [p]^n (chi w^-n)(p) E_{n, chi w^-n, q^p}, exactly
    where possible, else p-adically; an independent assembly."""
    twisted = twist(chi, -n, ctx.p)
    first = gen_euler_number(n, twisted, q=ctx.q, ctx=ctx)
    if twisted.conductor == 1:
        at_p = 1
    else:
        at_p = 0
    if at_p == 0:
        second = 0
    else:
        second = q_int(ctx.p, ctx.q) ** n * gen_euler_number(
            n, twisted, q=ctx.q**ctx.p,
            ctx=QContext(p=ctx.p, q=ctx.q**ctx.p, precision=ctx.precision))
    if isinstance(first, Fraction) and isinstance(second, (int, Fraction)):
        return ctx.embed(first - second)
    acc = first if not isinstance(first, Fraction) else ctx.embed(first)
    if isinstance(second, (int, Fraction)):
        return acc - ctx.embed(second)
    return acc - second


@pytest.mark.parametrize("ctx", [CTX34, CTX56])
def test_l_pq_interpolates_twisted_numbers(ctx):
    chis = [DirichletCharacter.trivial(),
            DirichletCharacter.teichmuller_power(1, ctx.p),
            DirichletCharacter.teichmuller_power(2, ctx.p)]
    for chi in chis:
        for n in range(1, 5):
            loss = int(v_p(math.factorial(n), ctx.p)) + 2
            left = l_pq(-n, chi, ctx, F=ctx.p)
            right = eq18_right_side(n, chi, ctx)
            assert residual_valuation(left.value, right) >= ctx.precision - loss


@pytest.mark.parametrize("ctx", [CTX34, CTX56])
def test_l_pq_twist_coherence(ctx):
    # chi = w^n makes the twist trivial: the value collapses to
    # E_{n,q} - [p]^n E_{n,q^p}
    for n in range(1, 5):
        chi = DirichletCharacter.teichmuller_power(n, ctx.p)
        left = l_pq(-n, chi, ctx, F=ctx.p)
        right = (euler_number(n, ctx.q)
                 - q_int(ctx.p, ctx.q) ** n * euler_number(n, ctx.q**ctx.p))
        loss = int(v_p(math.factorial(n), ctx.p)) + 2
        assert residual_valuation(left.value, ctx.embed(right)) >= ctx.precision - loss


def test_l_pq_validates_modulus():
    w1 = DirichletCharacter.teichmuller_power(1, 3)
    with pytest.raises(ValueError):
        l_pq(0, w1, CTX34, F=6)
    with pytest.raises(ValueError):
        l_pq(0, DirichletCharacter.quadratic(5), CTX34, F=3)  # conductor does not divide


# ---------------------------------------------------------------------------
# boundary and correction series
# ---------------------------------------------------------------------------

def test_T_partial_at_zero():
    for a in (1, 2):
        even = T_partial(2, 0, PartialZetaParams(a, 3), CTX34)
        assert even.value.is_zero or even.value.valuation >= CTX34.precision
        odd = T_partial(3, 0, PartialZetaParams(a, 3), CTX34)
        expected = CTX34.embed(-2 * (-1) ** a)
        assert residual_valuation(odd.value, expected) >= CTX34.precision


def test_K_partial_at_zero():
    for a in (1, 2):
        res = K_partial(2, 0, PartialZetaParams(a, 3), CTX34)
        assert res.value.is_zero or res.value.valuation >= CTX34.precision


def test_K_partial_single_term_at_minus_one():
    # s = -1 keeps only the l = 1 term (binom(1, l) vanishes for l >= 2,
    # and l = 0 has an empty inner sum); assemble that term by hand
    for ctx, a in [(CTX34, 1), (CTX34, 2), (CTX56, 3)]:
        p, q = ctx.p, ctx.q
        n = 2
        res = K_partial(n, -1, PartialZetaParams(a, p), ctx)
        angle = (ctx.embed(q_int(a, q))
                 / teichmuller(a, p, ctx.working_precision))
        hand = (ctx.embed(Fraction((-1) ** a, 2)
                          * q**a * (q_int(p, q) / q_int(a, q))
                          * euler_number(1, q**p)
                          * q_int(n * p, q) * (q - 1))
                * angle)
        assert residual_valuation(res.value, hand) >= ctx.precision


@pytest.mark.parametrize("p", [3, 5])
def test_T_and_K_die_as_q_approaches_one(p):
    # q = 1 + p^6 surrogate: every contribution keeps valuation >= 6
    ctx = QContext(p=p, q=1 + Fraction(p) ** 6, precision=8)
    for n in (2, 4):
        for a in (1, 2):
            t = T_partial(n, 2, PartialZetaParams(a, p), ctx)
            k = K_partial(n, 2, PartialZetaParams(a, p), ctx)
            assert t.value.valuation >= 6
            assert k.value.valuation >= 6


def test_full_aggregates_at_zero():
    triv = DirichletCharacter.trivial()
    assert K_full(2, 0, triv, CTX34).value.is_zero
    t_even = T_full(2, 0, triv, CTX34)
    assert t_even.value.is_zero or t_even.value.valuation >= CTX34.precision
    t_odd = T_full(3, 0, triv, CTX34)
    # 2 * sum_a (-2)(-1)^a = 0 at p = 3
    assert t_odd.value.is_zero or t_odd.value.valuation >= CTX34.precision


# ---------------------------------------------------------------------------
# truncation robustness
# ---------------------------------------------------------------------------

def test_doubling_guard_and_cap_changes_nothing():
    ctx = CTX56
    doubled = ctx.with_doubled_truncation()
    w1 = DirichletCharacter.teichmuller_power(1, 5)
    pairs = [
        (l_pq(2, w1, ctx, F=5).value, l_pq(2, w1, doubled, F=5).value),
        (H_pq(3, PartialZetaParams(2, 5), ctx).value,
         H_pq(3, PartialZetaParams(2, 5), doubled).value),
        (T_partial(1, 2, PartialZetaParams(1, 5), ctx).value,
         T_partial(1, 2, PartialZetaParams(1, 5), doubled).value),
        (K_partial(1, 2, PartialZetaParams(1, 5), ctx).value,
         K_partial(1, 2, PartialZetaParams(1, 5), doubled).value),
    ]
    for a, b in pairs:
        assert residual_valuation(a, b) >= ctx.precision


def test_series_metadata_contract():
    res = H_pq(-2, PartialZetaParams(1, 3), CTX34)
    assert res.converged
    assert res.tail_valuation_bound >= CTX34.precision
    assert res.last_index >= 2
    payload = res.to_json_dict()
    assert payload["converged"] is True
    assert set(payload) == {"value", "last_index", "tail_valuation_bound", "converged"}
