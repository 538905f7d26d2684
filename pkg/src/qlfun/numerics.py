"""Exact rational and truncated p-adic arithmetic.

Everything downstream is built on two substrates:

* exact rationals (``fractions.Fraction``) for the closed finite-sum values,
  so that no p-adic cancellation can corrupt a result before it is reduced;
* :class:`PadicNumber`, a truncated p-adic number carrying an explicit
  significant-digit count, used once values cross into p-adic territory
  (Teichmuller lifts, binomial series in a p-adic exponent, guarded series).

The ambient parameters (odd prime p, rational q close to 1, target and
working precision, truncation guard) travel in a :class:`QContext`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

Rational = Fraction

IntOrRational = Union[int, Fraction]
Valuation = Union[int, float]  # int, or math.inf for "zero as far as we know"

INF = math.inf


class PadicError(ValueError):
    """Invalid p-adic operation: non-unit argument, prime mismatch, ..."""


class SeriesDivergenceError(PadicError):
    """A guarded series hit its hard cap before the guard was satisfied."""

    def __init__(self, message: str, partial: "SeriesResult"):
        super().__init__(message)
        self.partial = partial


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def v_p(x: IntOrRational, p: int) -> Valuation:
    """p-adic valuation of an exact integer or fraction (inf for 0)."""
    if x == 0:
        return INF
    x = Fraction(x)
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# q-integers and binomial coefficients
# ---------------------------------------------------------------------------

def q_int(x: int, q: IntOrRational) -> Fraction:
    """The base-q count of x: 1 + q + q^2 + ... + q^(x-1)  (equals x at q=1)."""
    if x < 0:
        raise ValueError("q_int requires x >= 0")
    q = Fraction(q)
    if q == 1:
        return Fraction(x)
    return (1 - q**x) / (1 - q)


def q_int_alt(x: int, q: IntOrRational) -> Fraction:
    """Alternating base-q count of x: 1 - q + q^2 - ... + (-q)^(x-1)."""
    if x < 0:
        raise ValueError("q_int_alt requires x >= 0")
    q = Fraction(q)
    if q == -1:
        # the closed form divides by 1+q; fall back to the defining polynomial
        return Fraction(x % 2)
    return (1 - (-q) ** x) / (1 + q)


def binom_rat(t: IntOrRational, k: int) -> Fraction:
    """Falling-factorial binomial t(t-1)...(t-k+1)/k!, exact for rational t."""
    if k < 0:
        raise ValueError("binom_rat requires k >= 0")
    t = Fraction(t)
    num = Fraction(1)
    for i in range(k):
        num *= t - i
    return num / math.factorial(k)


# ---------------------------------------------------------------------------
# Truncated p-adic numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicNumber:
    """A p-adic number known to ``precision`` significant base-p digits.

    A nonzero value represents ``unit * p**valuation`` where the unit is an
    integer in [1, p**precision) coprime to p; the value is known modulo
    ``p**(valuation + precision)``.  A zero value represents "congruent to 0
    mod p**valuation": exact zero carries valuation ``math.inf``.
    """

    p: int
    valuation: Valuation
    unit: int
    precision: int
    is_zero: bool = False

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int, bound: Valuation = INF) -> "PadicNumber":
        return cls(p=p, valuation=bound, unit=0, precision=0, is_zero=True)

    @classmethod
    def make(cls, p: int, valuation: int, residue: int, precision: int) -> "PadicNumber":
        """Normalize ``residue * p**valuation`` known mod p**(valuation+precision)."""
        if precision <= 0:
            return cls.zero(p, bound=valuation + precision)
        residue %= p**precision
        if residue == 0:
            return cls.zero(p, bound=valuation + precision)
        shift = 0
        while residue % p == 0:
            residue //= p
            shift += 1
        precision -= shift
        return cls(p=p, valuation=valuation + shift,
                   unit=residue % p**precision, precision=precision)

    @classmethod
    def one(cls, p: int, precision: int) -> "PadicNumber":
        return cls(p=p, valuation=0, unit=1, precision=precision)

    # -- basic queries -------------------------------------------------------

    @property
    def abs_precision(self) -> Valuation:
        """The value is pinned down modulo p**abs_precision."""
        return self.valuation + self.precision

    def digits(self) -> list:
        """Base-p digits of the unit, least significant first, length == precision."""
        out = []
        u = self.unit
        for _ in range(self.precision):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "valuation": None if self.valuation == INF else self.valuation,
            "digits": self.digits(),
            "precision": self.precision,
        }

    def __str__(self) -> str:
        if self.is_zero:
            bound = "inf" if self.valuation == INF else str(self.valuation)
            return f"0 (mod {self.p}^{bound})"
        return f"{self.unit}*{self.p}^{self.valuation} (mod {self.p}^{self.abs_precision})"

    # -- precision management -------------------------------------------------

    def at_absolute_precision(self, bound: Valuation) -> "PadicNumber":
        """Forget everything beyond p**bound."""
        if self.is_zero:
            return PadicNumber.zero(self.p, bound=min(self.valuation, bound))
        rel = bound - self.valuation
        if rel <= 0:
            return PadicNumber.zero(self.p, bound=bound)
        if rel >= self.precision:
            return self
        return PadicNumber(p=self.p, valuation=self.valuation,
                           unit=self.unit % self.p**int(rel), precision=int(rel))

    def at_precision(self, digits: int) -> "PadicNumber":
        """Cap the number of significant digits."""
        if self.is_zero or digits >= self.precision:
            return self
        if digits <= 0:
            raise PadicError("cannot truncate a nonzero p-adic value to 0 digits")
        return PadicNumber(p=self.p, valuation=self.valuation,
                           unit=self.unit % self.p**digits, precision=digits)

    def eq_at_precision(self, other: "PadicNumber", k: int) -> bool:
        """Spec equality: matching valuations and units mod p^min(k, precisions),
        or both values indistinguishable from 0 at valuation k."""
        self._check_same_prime(other)
        if (self.is_zero or self.valuation >= k) and (other.is_zero or other.valuation >= k):
            return True
        if self.is_zero or other.is_zero:
            return False
        if self.valuation != other.valuation:
            return False
        m = min(k, self.precision, other.precision)
        return self.unit % self.p**m == other.unit % self.p**m

    # -- arithmetic -----------------------------------------------------------

    def _check_same_prime(self, other: "PadicNumber") -> None:
        if not isinstance(other, PadicNumber):
            raise TypeError(f"expected PadicNumber, got {type(other).__name__}")
        if self.p != other.p:
            raise PadicError(f"prime mismatch: {self.p} vs {other.p}")

    def __neg__(self) -> "PadicNumber":
        if self.is_zero:
            return self
        return PadicNumber(p=self.p, valuation=self.valuation,
                           unit=(-self.unit) % self.p**self.precision,
                           precision=self.precision)

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_same_prime(other)
        bound = min(self.abs_precision, other.abs_precision)
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(self.p, bound=bound)
        if self.is_zero:
            return other.at_absolute_precision(bound)
        if other.is_zero:
            return self.at_absolute_precision(bound)
        base = min(self.valuation, other.valuation)
        rel = int(bound - base)
        if rel <= 0:
            return PadicNumber.zero(self.p, bound=bound)
        total = (self.unit * self.p ** int(self.valuation - base)
                 + other.unit * self.p ** int(other.valuation - base))
        return PadicNumber.make(self.p, int(base), total, rel)

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return self + (-other)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_same_prime(other)
        if self.is_zero or other.is_zero:
            return PadicNumber.zero(self.p, bound=self.valuation + other.valuation)
        prec = min(self.precision, other.precision)
        return PadicNumber(p=self.p, valuation=self.valuation + other.valuation,
                           unit=(self.unit * other.unit) % self.p**prec,
                           precision=prec)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_same_prime(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a p-adic zero")
        if self.is_zero:
            return PadicNumber.zero(self.p, bound=self.valuation - other.valuation)
        prec = min(self.precision, other.precision)
        inv = pow(other.unit, -1, self.p**prec)
        return PadicNumber(p=self.p, valuation=self.valuation - other.valuation,
                           unit=(self.unit * inv) % self.p**prec,
                           precision=prec)

    def __pow__(self, exponent: int) -> "PadicNumber":
        """Direct integer power by repeated multiplication (no series)."""
        if not isinstance(exponent, int):
            raise TypeError("use padic_pow for non-integer exponents")
        if self.is_zero:
            if exponent <= 0:
                raise ZeroDivisionError("zero to a nonpositive power")
            return PadicNumber.zero(self.p, bound=self.valuation * exponent)
        if exponent < 0:
            base = PadicNumber.one(self.p, self.precision) / self
            exponent = -exponent
        else:
            base = self
        result = PadicNumber.one(self.p, base.precision)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


def reduce_mod_pN(r: IntOrRational, p: int, N: int) -> PadicNumber:
    """Image of an exact rational: valuation v_p(r), unit correct mod p**N."""
    if N < 1:
        raise ValueError("reduce_mod_pN requires N >= 1")
    r = Fraction(r)
    if r == 0:
        return PadicNumber.zero(p)
    val = v_p(r, p)
    scaled = r / Fraction(p) ** int(val)
    modulus = p**N
    num = scaled.numerator % modulus
    den_inv = pow(scaled.denominator % modulus, -1, modulus)
    return PadicNumber(p=p, valuation=int(val), unit=(num * den_inv) % modulus,
                       precision=N)


def residual_valuation(a: PadicNumber, b: PadicNumber) -> Valuation:
    """Known lower bound for v_p(a - b); inf when indistinguishable."""
    return (a - b).valuation


def teichmuller(a: int, p: int, N: int) -> PadicNumber:
    """The (p-1)-th root of unity congruent to a mod p, correct mod p**N.

    Computed as the Frobenius limit a**(p**(N-1)) mod p**N.
    """
    if not is_odd_prime(p):
        raise PadicError(f"p must be an odd prime, got {p}")
    if N < 1:
        raise ValueError("teichmuller requires N >= 1")
    if a % p == 0:
        raise PadicError("Teichmuller undefined at non-unit")
    modulus = p**N
    w = pow(a % modulus, p ** (N - 1), modulus)
    return PadicNumber(p=p, valuation=0, unit=w, precision=N)


# ---------------------------------------------------------------------------
# Ambient parameters
# ---------------------------------------------------------------------------

#: extra digits carried beyond the target so that guard-window bookkeeping and
#: binomial-coefficient losses never eat into reported precision
WORKING_MARGIN = 10

#: hard series cap as a multiple of the target precision
CAP_FACTOR = 64


@dataclass(frozen=True)
class QContext:
    """Fixed parameters: odd prime p, rational q with v_p(q-1) >= 1, precisions.

    ``precision`` is the target digit count for reported results;
    ``working_precision`` is used internally; ``guard`` consecutive
    high-valuation terms stop a truncated series; ``cap`` is the hard
    maximum series index.
    """

    p: int
    q: Fraction
    precision: int = 8
    working_precision: Optional[int] = None
    guard: int = 3
    cap: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", Fraction(self.q))
        if self.working_precision is None:
            object.__setattr__(self, "working_precision", self.precision + WORKING_MARGIN)
        if self.cap is None:
            object.__setattr__(self, "cap", CAP_FACTOR * self.precision)
        if not is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime >= 3, got {self.p}")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.guard < 1:
            raise ValueError("guard must be >= 1")
        if self.working_precision < self.precision + self.guard:
            raise ValueError("working_precision must be >= precision + guard")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")
        if v_p(self.q - 1, self.p) < 1:
            raise ValueError(
                f"q must satisfy v_{self.p}(q - 1) >= 1, got q = {self.q}")

    @property
    def q_is_one(self) -> bool:
        return self.q == 1

    def require_q_not_one(self, operation: str) -> None:
        if self.q_is_one:
            raise ValueError(f"{operation} divides by (1 - q): use classical limit path")

    def embed(self, r: IntOrRational, extra: int = 0) -> PadicNumber:
        """Reduce an exact rational at a precision that never binds results."""
        return reduce_mod_pN(r, self.p, self.working_precision + WORKING_MARGIN + extra)

    def zero(self) -> PadicNumber:
        return PadicNumber.zero(self.p)

    def one(self) -> PadicNumber:
        return PadicNumber.one(self.p, self.working_precision)

    def with_doubled_truncation(self) -> "QContext":
        return QContext(p=self.p, q=self.q, precision=self.precision,
                        working_precision=self.working_precision,
                        guard=2 * self.guard, cap=2 * self.cap)


# ---------------------------------------------------------------------------
# Guarded series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesResult:
    """A truncated-series value plus the evidence the truncation was sound."""

    value: PadicNumber
    last_index: int
    tail_valuation_bound: Valuation
    converged: bool

    def to_json_dict(self) -> dict:
        bound = self.tail_valuation_bound
        return {
            "value": self.value.to_json_dict(),
            "last_index": self.last_index,
            "tail_valuation_bound": "inf" if bound == INF else bound,
            "converged": self.converged,
        }


def sum_guarded(terms: Iterable[PadicNumber], ctx: QContext, *,
                description: str = "series",
                max_index: Optional[int] = None,
                target: Optional[int] = None) -> SeriesResult:
    """Sum a p-adically convergent series, stopping after ``ctx.guard``
    consecutive terms of valuation >= target (default: ctx.working_precision,
    so that the reported digits of the value stay trustworthy).

    With ``max_index`` the sum runs to exactly that index instead;
    ``converged`` then reports whether the guard would have been satisfied.
    Exceeding ``ctx.cap`` without satisfying the guard raises
    :class:`SeriesDivergenceError` carrying the partial result.
    """
    if target is None:
        target = ctx.working_precision
    acc = ctx.zero()
    window: list = []
    index = -1
    for index, term in enumerate(terms):
        acc = acc + term
        window.append(term.valuation)
        if len(window) > ctx.guard:
            window.pop(0)
        guard_met = len(window) == ctx.guard and all(v >= target for v in window)
        if max_index is not None:
            if index >= max_index:
                bound = min(window) if window else INF
                return SeriesResult(value=acc, last_index=index,
                                    tail_valuation_bound=bound, converged=guard_met)
            continue
        if guard_met:
            return SeriesResult(value=acc, last_index=index,
                                tail_valuation_bound=min(window), converged=True)
        if index >= ctx.cap:
            partial = SeriesResult(value=acc, last_index=index,
                                   tail_valuation_bound=min(window), converged=False)
            raise SeriesDivergenceError(
                f"{description}: guard not satisfied within cap {ctx.cap}", partial)
    # finite term stream exhausted: the tail is identically zero
    return SeriesResult(value=acc, last_index=index,
                        tail_valuation_bound=INF, converged=True)


def merge_series(value: PadicNumber, parts: Iterable[SeriesResult]) -> SeriesResult:
    """Combine sub-series metadata for a value assembled from several series."""
    last = 0
    bound: Valuation = INF
    converged = True
    for part in parts:
        last = max(last, part.last_index)
        bound = min(bound, part.tail_valuation_bound)
        converged = converged and part.converged
    return SeriesResult(value=value, last_index=last,
                        tail_valuation_bound=bound, converged=converged)


# ---------------------------------------------------------------------------
# p-adic exponentiation and binomial coefficients
# ---------------------------------------------------------------------------

PadicExponent = Union[int, PadicNumber]


def binom_padic(s: PadicExponent, k: int, ctx: QContext) -> PadicNumber:
    """Binomial coefficient s(s-1)...(s-k+1)/k! for a p-adic integer s.

    For an embedded integer the value is exact; for a genuinely p-adic s
    the division by k! costs v_p(k!) digits of absolute precision, which
    the result's precision field reflects.
    """
    if k < 0:
        raise ValueError("binom_padic requires k >= 0")
    if isinstance(s, int):
        return ctx.embed(binom_rat(s, k))
    if not s.is_zero and s.valuation < 0:
        raise PadicError("binom_padic requires a p-adic integer")
    if k == 0:
        return ctx.one()
    prod = ctx.one()
    for i in range(k):
        prod = prod * (s - ctx.embed(i))
        if prod.is_zero:
            break
    return prod / ctx.embed(math.factorial(k))


def padic_pow(u: PadicNumber, s: PadicExponent, ctx: QContext) -> SeriesResult:
    """u**s for u congruent to 1 mod p and a p-adic integer exponent s,
    via the binomial series sum_k binom(s, k) (u-1)**k with guarded truncation."""
    if u.is_zero or u.valuation != 0 or u.unit % ctx.p != 1:
        raise PadicError("binomial series diverges: base must be congruent to 1 mod p")
    if isinstance(s, PadicNumber):
        if not s.is_zero and s.valuation < 0:
            raise PadicError("exponent must be a p-adic integer")
    t = u - ctx.one()

    def terms() -> Iterator[PadicNumber]:
        power = ctx.one()
        k = 0
        while True:
            yield binom_padic(s, k, ctx) * power
            power = power * t
            k += 1

    return sum_guarded(terms(), ctx, description="binomial power series")


def angle_bracket(a: int, ctx: QContext) -> PadicNumber:
    """Principal-unit part of the base-q count of a unit a:
    q_int(a, q) divided by its Teichmuller lift; congruent to 1 mod p."""
    if a % ctx.p == 0:
        raise PadicError("angle_bracket undefined at non-unit")
    numerator = ctx.embed(q_int(a, ctx.q))
    w = teichmuller(a, ctx.p, ctx.working_precision + WORKING_MARGIN)
    return numerator / w
