"""Alternating partial zeta values and their p-adic interpolations.

At negative integers everything here has an exact rational closed form
built from the q-Euler polynomials; the p-adic functions reproduce those
closed forms (up to a Teichmuller twist) and extend them to p-adic integer
arguments through guarded binomial series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Union

from .characters import DirichletCharacter, chi_eval, chi_eval_exact
from .numerics import (
    PadicExponent,
    PadicNumber,
    QContext,
    SeriesResult,
    angle_bracket,
    binom_rat,
    binom_padic,
    merge_series,
    padic_pow,
    q_int,
    sum_guarded,
)
from .qeuler import FractionalArg, euler_number, euler_poly_frac, gen_euler_number


@dataclass(frozen=True)
class PartialZetaParams:
    """Residue class a mod F with 0 < a < F and F odd."""

    a: int
    F: int

    def __post_init__(self) -> None:
        if self.F < 1 or self.F % 2 == 0:
            raise ValueError("PartialZetaParams requires odd F")
        if not 0 < self.a < self.F:
            raise ValueError("PartialZetaParams requires 0 < a < F")


def _h_neg_term(n: int, a: int, F: int, q: Fraction) -> Fraction:
    """(-1)^a ([F]^n / 2) E_{n,q^F}(a/F); a == F is allowed (argument 1)."""
    return (
        Fraction((-1) ** a)
        * q_int(F, q) ** n
        / 2
        * euler_poly_frac(n, FractionalArg(a, F), q)
    )


def partial_zeta_neg(n: int, prm: PartialZetaParams, q) -> Fraction:
    """Value of the alternating partial zeta function over the residue class
    a mod F at the negative integer -n, as an exact rational."""
    if n < 0:
        raise ValueError("partial_zeta_neg requires n >= 0")
    q = Fraction(q)
    if q == 1:
        raise ValueError("partial_zeta_neg: q = 1, use classical limit path")
    return _h_neg_term(n, prm.a, prm.F, q)


def lq_neg(
    k: int,
    chi: DirichletCharacter,
    q=None,
    ctx: Optional[QContext] = None,
) -> Union[Fraction, PadicNumber]:
    """Dirichlet-type q-l-value at -k: the k-th twisted q-Euler number."""
    if k < 0:
        raise ValueError("lq_neg requires k >= 0")
    return gen_euler_number(k, chi, q=q, ctx=ctx)


def lq_neg_series_path(
    k: int,
    chi: DirichletCharacter,
    q=None,
    ctx: Optional[QContext] = None,
) -> Union[Fraction, PadicNumber]:
    """Independent route to the same value: 2 sum_{a=1}^{F} chi(a) H(-k, a:F)
    over the conductor F, with the a = F term evaluated at argument 1."""
    if k < 0:
        raise ValueError("lq_neg_series_path requires k >= 0")
    if q is None:
        if ctx is None:
            raise ValueError("lq_neg_series_path needs q or a context")
        q = ctx.q
    q = Fraction(q)
    F = chi.conductor
    if chi.is_plus_minus_one_valued:
        total = Fraction(0)
        for a in range(1, F + 1):
            c = chi_eval_exact(chi, a)
            if c:
                total += c * _h_neg_term(k, a, F, q)
        return 2 * total
    if ctx is None:
        raise ValueError("lq_neg_series_path needs a QContext for p-adic characters")
    acc = ctx.zero()
    for a in range(1, F + 1):
        c = chi_eval(chi, a, ctx)
        if not c.is_zero:
            acc = acc + c * ctx.embed(_h_neg_term(k, a, F, q))
    return acc + acc  # times 2


def _binom_neg(s: PadicExponent, j: int, ctx: QContext):
    """binom(-s, j): exact Fraction for integer s, p-adic otherwise."""
    if isinstance(s, int):
        return binom_rat(-s, j)
    return binom_padic(-s, j, ctx)


def _series_term(coeff, exact: Fraction, ctx: QContext) -> PadicNumber:
    """coeff * exact as a PadicNumber, keeping exact paths exact."""
    if isinstance(coeff, Fraction):
        return ctx.embed(coeff * exact)
    return coeff * ctx.embed(exact)


def _require_padic_params(prm: PartialZetaParams, ctx: QContext, name: str) -> None:
    if prm.F % ctx.p != 0:
        raise ValueError(f"{name} requires p | F")
    if prm.a % ctx.p == 0:
        raise ValueError(f"{name} requires gcd(a, p) = 1")
    ctx.require_q_not_one(name)


def H_pq(s: PadicExponent, prm: PartialZetaParams, ctx: QContext) -> SeriesResult:
    """p-adic interpolation of the partial zeta value:
    ((-1)^a / 2) <a>^(-s) sum_j binom(-s, j) q^(ja) ([F]/[a])^j E_{j,q^F},
    as a guarded truncated series.  At s = -n the series is finite and the
    value is the Teichmuller-twisted exact partial zeta value.
    """
    _require_padic_params(prm, ctx, "H_pq")
    a, F = prm.a, prm.F
    q = ctx.q
    unit_pow = padic_pow(angle_bracket(a, ctx), -s, ctx)
    ratio = q_int(F, q) / q_int(a, q)
    qF = q**F

    def terms() -> Iterator[PadicNumber]:
        power = Fraction(1)
        j = 0
        while True:
            yield _series_term(_binom_neg(s, j, ctx),
                               power * euler_number(j, qF), ctx)
            power *= ratio * q**a
            j += 1

    body = sum_guarded(terms(), ctx, description="H_pq series")
    value = ctx.embed(Fraction((-1) ** a, 2)) * unit_pow.value * body.value
    return merge_series(value, [unit_pow, body])


def l_pq(
    s: PadicExponent,
    chi: DirichletCharacter,
    ctx: QContext,
    F: Optional[int] = None,
) -> SeriesResult:
    """p-adic l-function: 2 sum over units a <= F of chi(a) H_pq(s, a : F)."""
    cond = chi.conductor
    if F is None:
        F = math.lcm(ctx.p, cond)
    if F % 2 == 0 or F % ctx.p != 0:
        raise ValueError("l_pq requires an odd multiple of p for F")
    if F % cond != 0:
        raise ValueError("l_pq requires conductor(chi) | F")
    acc = ctx.zero()
    parts: List[SeriesResult] = []
    for a in range(1, F + 1):
        if a % ctx.p == 0:
            continue
        c = chi_eval(chi, a, ctx)
        if c.is_zero:
            continue
        part = H_pq(s, PartialZetaParams(a, F), ctx)
        parts.append(part)
        acc = acc + c * part.value
    return merge_series(acc + acc, parts)


def T_partial(n: int, s: PadicExponent, prm: PartialZetaParams, ctx: QContext) -> SeriesResult:
    """Boundary-term series of the alternating power-sum expansion:
    (-1)^a <a>^(-s) sum_k binom(-s,k) ([F]/[a])^k q^(ak) ((-1)^n q^(nFk) - 1) E_{k,q^F}.

    Vanishes as q -> 1 for even n (the factor q^(nFk) - 1 dies)."""
    if n < 1:
        raise ValueError("T_partial requires n >= 1")
    _require_padic_params(prm, ctx, "T_partial")
    a, F = prm.a, prm.F
    q = ctx.q
    unit_pow = padic_pow(angle_bracket(a, ctx), -s, ctx)
    ratio = q_int(F, q) / q_int(a, q)
    qF = q**F
    sign_n = (-1) ** n

    def terms() -> Iterator[PadicNumber]:
        power = Fraction(1)
        k = 0
        while True:
            factor = sign_n * q ** (n * F * k) - 1
            yield _series_term(_binom_neg(s, k, ctx),
                               power * factor * euler_number(k, qF), ctx)
            power *= ratio * q**a
            k += 1

    body = sum_guarded(terms(), ctx, description="T series")
    value = ctx.embed((-1) ** a) * unit_pow.value * body.value
    return merge_series(value, [unit_pow, body])


def K_partial(n: int, s: PadicExponent, prm: PartialZetaParams, ctx: QContext) -> SeriesResult:
    """Correction series carrying the q-power twist left over when q^(nFl)
    is expanded around 1:
    ((-1)^a / 2) <a>^(-s) sum_l binom(-s,l) q^(al) ([F]/[a])^l E_{l,q^F}
                              sum_{j=1}^{l} C(l,j) [nF]^j (q-1)^j.

    Every term carries at least one factor (q-1), so the value dies as q -> 1."""
    if n < 1:
        raise ValueError("K_partial requires n >= 1")
    _require_padic_params(prm, ctx, "K_partial")
    a, F = prm.a, prm.F
    q = ctx.q
    unit_pow = padic_pow(angle_bracket(a, ctx), -s, ctx)
    ratio = q_int(F, q) / q_int(a, q)
    qF = q**F
    nF_count = q_int(n * F, q)

    def inner(l: int) -> Fraction:
        total = Fraction(0)
        for j in range(1, l + 1):
            total += math.comb(l, j) * nF_count**j * (q - 1) ** j
        return total

    def terms() -> Iterator[PadicNumber]:
        power = Fraction(1)
        l = 0
        while True:
            yield _series_term(_binom_neg(s, l, ctx),
                               power * euler_number(l, qF) * inner(l), ctx)
            power *= ratio * q**a
            l += 1

    body = sum_guarded(terms(), ctx, description="K series")
    value = ctx.embed(Fraction((-1) ** a, 2)) * unit_pow.value * body.value
    return merge_series(value, [unit_pow, body])


def _full_sum(partial_fn, chi: DirichletCharacter, ctx: QContext) -> SeriesResult:
    """2 sum_{a=1}^{p-1} chi(a) * partial(a : p), with F fixed to p."""
    acc = ctx.zero()
    parts: List[SeriesResult] = []
    for a in range(1, ctx.p):
        c = chi_eval(chi, a, ctx)
        if c.is_zero:
            continue
        part = partial_fn(PartialZetaParams(a, ctx.p))
        parts.append(part)
        acc = acc + c * part.value
    return merge_series(acc + acc, parts)


def T_full(n: int, s: PadicExponent, chi: DirichletCharacter, ctx: QContext) -> SeriesResult:
    """Character-weighted aggregate of the boundary-term series at F = p."""
    return _full_sum(lambda prm: T_partial(n, s, prm, ctx), chi, ctx)


def K_full(n: int, s: PadicExponent, chi: DirichletCharacter, ctx: QContext) -> SeriesResult:
    """Character-weighted aggregate of the correction series at F = p."""
    return _full_sum(lambda prm: K_partial(n, s, prm, ctx), chi, ctx)
