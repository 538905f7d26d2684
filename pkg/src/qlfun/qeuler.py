"""q-deformed Euler numbers and polynomials, exactly.

All values here are closed finite sums evaluated in exact rational
arithmetic; they only meet p-adic arithmetic at the reduction boundary.
The module also provides the alternating power-sum identities, the
character-twisted (generalized) numbers, and the finite-level analogue of
the q-measure integral that these numbers arise from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .characters import DirichletCharacter, chi_eval, chi_eval_exact
from .numerics import (
    IntOrRational,
    PadicNumber,
    QContext,
    q_int,
    q_int_alt,
)


class QEulerDomainError(ValueError):
    """q outside the domain of a closed form (q = 1, or a vanishing 1 + q^k)."""


@dataclass(frozen=True)
class FractionalArg:
    """Polynomial argument a/F evaluated in base q**F, encoded exactly.

    Since (q**F)**(a/F) = q**a for rational q, only the integer pair is
    ever needed; a may exceed F (shifted arguments (a+x)/F are used by the
    multiplication-by-F identity).
    """

    a: int
    F: int

    def __post_init__(self) -> None:
        if self.a < 0:
            raise ValueError("FractionalArg requires a >= 0")
        if self.F < 1 or self.F % 2 == 0:
            raise ValueError("FractionalArg requires odd F >= 1")


def _check_base(q: Fraction, operation: str) -> None:
    if q == 1:
        raise QEulerDomainError(f"{operation}: q = 1, use classical limit path")


def _alternating_weight(q: Fraction, k: int, operation: str) -> Fraction:
    d = 1 + q**k
    if d == 0:
        raise QEulerDomainError(f"{operation}: pole at 1 + q^{k} = 0")
    return d


@lru_cache(maxsize=None)
def _euler_number_cached(m: int, q: Fraction) -> Fraction:
    base = Fraction(1) / (1 - q)
    total = Fraction(0)
    sign = 1
    for i in range(m + 1):
        total += sign * math.comb(m, i) / _alternating_weight(q, i, "euler_number")
        sign = -sign
    return 2 * base**m * total


def euler_number(m: int, q: IntOrRational) -> Fraction:
    """q-Euler number: the m-th moment of the alternating q-measure,
    as the exact closed sum 2 (1/(1-q))^m sum_i C(m,i) (-1)^i / (1+q^i)."""
    if m < 0:
        raise ValueError("euler_number requires m >= 0")
    q = Fraction(q)
    _check_base(q, "euler_number")
    return _euler_number_cached(m, q)


def euler_poly(n: int, x: int, q: IntOrRational) -> Fraction:
    """q-Euler polynomial value at a nonnegative integer argument x."""
    if n < 0 or x < 0:
        raise ValueError("euler_poly requires n, x >= 0")
    q = Fraction(q)
    _check_base(q, "euler_poly")
    base = Fraction(1) / (1 - q)
    qx = q**x
    total = Fraction(0)
    for k in range(n + 1):
        total += math.comb(n, k) * (-qx) ** k / _alternating_weight(q, k, "euler_poly")
    return 2 * base**n * total


def euler_poly_frac(n: int, arg: FractionalArg, q: IntOrRational) -> Fraction:
    """q**F-Euler polynomial at the fractional argument a/F: the base becomes
    q**F and the argument power (q**F)**(a/F) collapses to q**a, exactly."""
    if n < 0:
        raise ValueError("euler_poly_frac requires n >= 0")
    q = Fraction(q)
    qF = q**arg.F
    _check_base(qF, "euler_poly_frac")
    base = Fraction(1) / (1 - qF)
    qa = q**arg.a
    total = Fraction(0)
    for k in range(n + 1):
        total += math.comb(n, k) * (-qa) ** k / _alternating_weight(qF, k, "euler_poly_frac")
    return 2 * base**n * total


def euler_poly_moments(n: int, x: int, q: IntOrRational) -> Fraction:
    """The same polynomial value assembled from the q-Euler numbers:
    sum_j C(n,j) q^(jx) E_j [x]^(n-j); an independent computation path."""
    if n < 0 or x < 0:
        raise ValueError("euler_poly_moments requires n, x >= 0")
    q = Fraction(q)
    _check_base(q, "euler_poly_moments")
    qx = q**x
    cnt = q_int(x, q)
    total = Fraction(0)
    for j in range(n + 1):
        total += math.comb(n, j) * qx**j * euler_number(j, q) * cnt ** (n - j)
    return total


def alt_power_sum_brute(n: int, m: int, q: IntOrRational) -> Fraction:
    """Literal alternating power sum 2 sum_{l<n} (-1)^l [l]^m, term by term."""
    if n < 1 or m < 1:
        raise ValueError("alt_power_sum_brute requires n, m >= 1")
    q = Fraction(q)
    total = Fraction(0)
    sign = 1
    for l in range(n):
        total += sign * q_int(l, q) ** m
        sign = -sign
    return 2 * total


def alt_power_sum_closed(n: int, m: int, q: IntOrRational) -> Fraction:
    """Closed form of the alternating power sum in terms of q-Euler numbers:
    (-1)^(n+1) sum_{l<m} C(m,l) q^(nl) E_l [n]^(m-l) + ((-1)^(n+1) q^(nm) + 1) E_m."""
    if n < 1 or m < 1:
        raise ValueError("alt_power_sum_closed requires n, m >= 1")
    q = Fraction(q)
    _check_base(q, "alt_power_sum_closed")
    sign = (-1) ** (n + 1)
    cnt = q_int(n, q)
    total = Fraction(0)
    for l in range(m):
        total += math.comb(m, l) * q ** (n * l) * euler_number(l, q) * cnt ** (m - l)
    return sign * total + (sign * q ** (n * m) + 1) * euler_number(m, q)


def distribution_sum(n: int, x: int, m: int, q: IntOrRational) -> Fraction:
    """Multiplication-by-m assembly [m]^n sum_a (-1)^a E_{n,q^m}((a+x)/m)
    for odd m; must reproduce euler_poly(n, x, q) exactly."""
    if m < 1 or m % 2 == 0:
        raise ValueError("distribution_sum requires odd m >= 1")
    q = Fraction(q)
    total = Fraction(0)
    for a in range(m):
        total += (-1) ** a * euler_poly_frac(n, FractionalArg(a + x, m), q)
    return q_int(m, q) ** n * total


def gen_euler_number(
    n: int,
    chi: DirichletCharacter,
    q: Optional[IntOrRational] = None,
    ctx: Optional[QContext] = None,
) -> Union[Fraction, PadicNumber]:
    """Character-twisted q-Euler number
    [f]^n sum_{a<f} chi(a) (-1)^a E_{n,q^f}(a/f)  over the odd conductor f.

    Returns an exact Fraction when the character is {0,+-1}-valued (q alone
    suffices); otherwise the character values are p-adic and a context is
    required, giving a PadicNumber mod p**working_precision.
    """
    if n < 0:
        raise ValueError("gen_euler_number requires n >= 0")
    if q is None:
        if ctx is None:
            raise ValueError("gen_euler_number needs q or a context")
        q = ctx.q
    q = Fraction(q)
    f = chi.conductor
    if f % 2 == 0:
        raise ValueError("gen_euler_number requires an odd conductor")
    scale = q_int(f, q) ** n
    if chi.is_plus_minus_one_valued:
        total = Fraction(0)
        for a in range(f):
            c = chi_eval_exact(chi, a)
            if c:
                total += c * (-1) ** a * euler_poly_frac(n, FractionalArg(a, f), q)
        return scale * total
    if ctx is None:
        raise ValueError("gen_euler_number needs a QContext for p-adic-valued characters")
    if ctx.q != q:
        raise ValueError("q argument disagrees with the context")
    acc = ctx.zero()
    for a in range(f):
        c = chi_eval(chi, a, ctx)
        if c.is_zero:
            continue
        term = (-1) ** a * euler_poly_frac(n, FractionalArg(a, f), q)
        acc = acc + c * ctx.embed(term)
    return acc * ctx.embed(scale)


def volkenborn_approx(m: int, level: int, ctx: QContext) -> Fraction:
    """Finite-level q-measure approximation of the m-th q-Euler number:
    (2/[2]_q) (1/[p^level]_{-q}) sum_{x<p^level} (-1)^x [x]^m, exact.

    The q^(-x) in the integrand cancels the q^x of the alternating measure
    weight, leaving the plain sign (-1)^x.
    """
    if m < 0:
        raise ValueError("volkenborn_approx requires m >= 0")
    if level < 1:
        raise ValueError("volkenborn_approx requires level >= 1")
    q = ctx.q
    size = ctx.p**level
    total = Fraction(0)
    sign = 1
    for x in range(size):
        total += sign * q_int(x, q) ** m
        sign = -sign
    return Fraction(2) / q_int(2, q) / q_int_alt(size, q) * total
