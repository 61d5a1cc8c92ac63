"""Exact rationals and outward-rounded interval arithmetic.

Rationals are :class:`fractions.Fraction` values (canonical form is maintained
by the stdlib).  Interval endpoints are binary floats held as mpmath ``libmp``
raw tuples; every endpoint is produced by a correctly rounded operation in the
outward direction (``round_floor`` for ``lo``, ``round_ceiling`` for ``hi``).

Fractional powers never go through exp/log.  ``t ** (a/b)`` is enclosed by an
exact integer ``b``-th root (``gmpy2.iroot``) followed by an exact integer
power, so the enclosure argument only relies on integer arithmetic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import gmpy2
from mpmath import libmp

Rational = Fraction

DEFAULT_SCHEDULE: tuple[int, ...] = (64, 128, 256, 512, 1024)

_FLOOR = libmp.round_floor
_CEIL = libmp.round_ceiling


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain."""


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def parse_rational(value) -> Fraction:
    """Parse ``"num/den"``, ``"n"``, an int or a Fraction into a Fraction.

    Floats are rejected: they would silently smuggle binary rounding into
    exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot read a rational from {type(value).__name__}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_pow_int(x: Fraction, e: int) -> Fraction:
    if x == 0 and e < 0:
        raise DomainError("zero base with negative exponent")
    return Fraction(x) ** int(e)


def exact_pow(x: Fraction, e: Fraction) -> Fraction | None:
    """Return ``x**e`` when it is rational, else ``None``."""
    x, e = Fraction(x), Fraction(e)
    if e.denominator == 1:
        return rat_pow_int(x, e.numerator)
    if x < 0:
        raise DomainError("negative base with fractional exponent")
    if x == 0:
        if e < 0:
            raise DomainError("zero base with negative exponent")
        return Fraction(0)
    b = e.denominator
    rn, ok_n = gmpy2.iroot(gmpy2.mpz(x.numerator), b)
    if not ok_n:
        return None
    rd, ok_d = gmpy2.iroot(gmpy2.mpz(x.denominator), b)
    if not ok_d:
        return None
    return Fraction(int(rn), int(rd)) ** e.numerator


def lcm_all(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

def _to_fraction(raw) -> Fraction:
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def _from_fraction(x: Fraction, prec: int, rnd) -> tuple:
    return libmp.from_rational(x.numerator, x.denominator, prec, rnd)


def _is_zero(raw) -> bool:
    return raw == libmp.fzero


def _sign(raw) -> int:
    return libmp.mpf_sign(raw)


def _least(values):
    best = values[0]
    for v in values[1:]:
        if libmp.mpf_lt(v, best):
            best = v
    return best


def _greatest(values):
    best = values[0]
    for v in values[1:]:
        if libmp.mpf_gt(v, best):
            best = v
    return best


def _pow_int_directed(raw, n: int, prec: int, rnd) -> tuple:
    """Correctly rounded ``raw**n`` for ``n >= 0`` (exact power, one rounding)."""
    if n == 0:
        return libmp.fone
    sign, man, exp, _ = raw
    if not man:
        return libmp.fzero
    sign = sign if n % 2 else 0
    return libmp.from_man_exp((-1) ** sign * int(man) ** n, exp * n, prec, rnd)


def _root_floor(raw, b: int, prec: int) -> tuple[tuple, tuple]:
    """Enclose ``raw**(1/b)`` for a nonnegative dyadic ``raw``; returns (lo, hi)."""
    sign, man, exp, bc = raw
    if sign:
        raise DomainError("root of a negative number")
    if not man:
        return libmp.fzero, libmp.fzero
    man = int(man)
    # scale so the integer root carries at least prec + 2 bits
    s = -((-(prec + 2) * b + bc + exp) // b)  # ceil((b*(prec+2) - bc - exp)/b)
    k = exp + b * s
    if k < 0:
        s += -((k) // b) + 1
        k = exp + b * s
    r, exact = gmpy2.iroot(gmpy2.mpz(man) << k, b)
    r = int(r)
    lo = libmp.from_man_exp(r, -s, prec, _FLOOR)
    hi = libmp.from_man_exp(r if exact else r + 1, -s, prec, _CEIL)
    return lo, hi


class TriOrder(enum.Enum):
    CERTAINLY_LE = "certainly_le"
    CERTAINLY_GT = "certainly_gt"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class RigorInterval:
    """Closed interval ``[lo, hi]`` with binary-float endpoints.

    ``lo`` and ``hi`` are mpmath raw mpf tuples; use :attr:`lo_q` and
    :attr:`hi_q` for their exact rational values.
    """

    lo: tuple
    hi: tuple
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 2:
            raise ValueError("precision_bits must be at least 2")
        if libmp.mpf_gt(self.lo, self.hi):
            raise ValueError("interval with lo > hi")

    # construction -------------------------------------------------------
    @classmethod
    def from_rational(cls, x, prec: int) -> "RigorInterval":
        x = parse_rational(x)
        return cls(_from_fraction(x, prec, _FLOOR), _from_fraction(x, prec, _CEIL), prec)

    @classmethod
    def from_bounds(cls, lo, hi, prec: int) -> "RigorInterval":
        lo, hi = parse_rational(lo), parse_rational(hi)
        return cls(_from_fraction(lo, prec, _FLOOR), _from_fraction(hi, prec, _CEIL), prec)

    # inspection ---------------------------------------------------------
    @property
    def lo_q(self) -> Fraction:
        return _to_fraction(self.lo)

    @property
    def hi_q(self) -> Fraction:
        return _to_fraction(self.hi)

    def width(self) -> Fraction:
        return self.hi_q - self.lo_q

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        x = parse_rational(x)
        return self.lo_q <= x <= self.hi_q

    def midpoint(self) -> float:
        return float((self.lo_q + self.hi_q) / 2)

    def __repr__(self) -> str:
        lo = libmp.to_str(self.lo, 12)
        hi = libmp.to_str(self.hi, 12)
        return f"RigorInterval([{lo}, {hi}], prec={self.precision_bits})"

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "RigorInterval":
        if isinstance(other, RigorInterval):
            return other
        return RigorInterval.from_rational(other, self.precision_bits)

    def _prec(self, other: "RigorInterval") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other):
        o = self._coerce(other)
        p = self._prec(o)
        return RigorInterval(libmp.mpf_add(self.lo, o.lo, p, _FLOOR),
                             libmp.mpf_add(self.hi, o.hi, p, _CEIL), p)

    __radd__ = __add__

    def __neg__(self):
        return RigorInterval(libmp.mpf_neg(self.hi), libmp.mpf_neg(self.lo), self.precision_bits)

    def __sub__(self, other):
        o = self._coerce(other)
        p = self._prec(o)
        return RigorInterval(libmp.mpf_sub(self.lo, o.hi, p, _FLOOR),
                             libmp.mpf_sub(self.hi, o.lo, p, _CEIL), p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = self._prec(o)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        lows = [libmp.mpf_mul(a, b, p, _FLOOR) for a, b in pairs]
        highs = [libmp.mpf_mul(a, b, p, _CEIL) for a, b in pairs]
        return RigorInterval(_least(lows), _greatest(highs), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if _sign(o.lo) <= 0 <= _sign(o.hi):
            raise DomainError("division by an interval containing zero")
        p = self._prec(o)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        lows = [libmp.mpf_div(a, b, p, _FLOOR) for a, b in pairs]
        highs = [libmp.mpf_div(a, b, p, _CEIL) for a, b in pairs]
        return RigorInterval(_least(lows), _greatest(highs), p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        return interval_pow(self, e)


def _pow_int_interval(x: RigorInterval, n: int) -> RigorInterval:
    prec = x.precision_bits
    if n == 0:
        one = libmp.fone
        return RigorInterval(one, one, prec)
    if n < 0:
        return RigorInterval.from_rational(1, prec) / _pow_int_interval(x, -n)
    lo_s, hi_s = _sign(x.lo), _sign(x.hi)
    if lo_s >= 0:
        return RigorInterval(_pow_int_directed(x.lo, n, prec, _FLOOR),
                             _pow_int_directed(x.hi, n, prec, _CEIL), prec)
    if n % 2:
        return RigorInterval(_pow_int_directed(x.lo, n, prec, _FLOOR),
                             _pow_int_directed(x.hi, n, prec, _CEIL), prec)
    if hi_s <= 0:
        return RigorInterval(_pow_int_directed(x.hi, n, prec, _FLOOR),
                             _pow_int_directed(x.lo, n, prec, _CEIL), prec)
    big = libmp.mpf_abs(x.lo) if libmp.mpf_gt(libmp.mpf_abs(x.lo), x.hi) else x.hi
    return RigorInterval(libmp.fzero, _pow_int_directed(big, n, prec, _CEIL), prec)


def interval_pow(x: RigorInterval, e) -> RigorInterval:
    """Enclose ``{t**e : t in x}`` for a rational exponent ``e``."""
    e = parse_rational(e)
    if e.denominator == 1:
        return _pow_int_interval(x, e.numerator)
    if _sign(x.lo) < 0:
        raise DomainError("negative base with fractional exponent")
    if e < 0:
        if _is_zero(x.lo):
            raise DomainError("zero base with negative exponent")
        return RigorInterval.from_rational(1, x.precision_bits) / interval_pow(x, -e)
    prec = x.precision_bits
    a, b = e.numerator, e.denominator
    # guard bits absorb the error amplification of the integer power
    wp = prec + a.bit_length() + 8
    root_lo, _ = _root_floor(x.lo, b, wp)
    _, root_hi = _root_floor(x.hi, b, wp)
    lo = _pow_int_directed(root_lo, a, prec, _FLOOR)
    hi = _pow_int_directed(root_hi, a, prec, _CEIL)
    return RigorInterval(lo, hi, prec)


def rigorous_compare(a: RigorInterval, b: RigorInterval) -> TriOrder:
    """Order two enclosures; ``CERTAINLY_LE`` certifies a strict ``a < b``.

    Touching enclosures (``hi(a) == lo(b)``) are reported as ``OVERLAP`` so
    that two identical point enclosures never look separated.
    """
    if libmp.mpf_lt(a.hi, b.lo):
        return TriOrder.CERTAINLY_LE
    if libmp.mpf_gt(a.lo, b.hi):
        return TriOrder.CERTAINLY_GT
    return TriOrder.OVERLAP


def gap_bound(a: RigorInterval, b: RigorInterval) -> Fraction:
    """Upper bound on ``|x - y|`` over ``x in a``, ``y in b``."""
    return max(a.hi_q - b.lo_q, b.hi_q - a.lo_q)


# ---------------------------------------------------------------------------
# Evaluable expressions
# ---------------------------------------------------------------------------

class Expr:
    """Small expression tree that can be enclosed at any precision.

    ``monomial()`` exposes products of rational powers of rational bases,
    which is the shape exact comparison needs; it returns ``None`` when the
    expression is not of that shape (e.g. a sum of radicals).
    """

    def enclose(self, prec: int) -> RigorInterval:
        raise NotImplementedError

    def exact(self) -> Fraction | None:
        raise NotImplementedError

    @property
    def is_rational(self) -> bool:
        """Structurally rational: no fractional powers anywhere."""
        raise NotImplementedError

    def monomial(self) -> list[tuple[Fraction, Fraction]] | None:
        if self.is_rational:
            return [(self.exact(), Fraction(1))]
        return None

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __pow__(self, e):
        return Pow(self, parse_rational(e))


def as_expr(x) -> Expr:
    return x if isinstance(x, Expr) else Const(parse_rational(x))


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: Fraction

    def enclose(self, prec):
        return RigorInterval.from_rational(self.value, prec)

    def exact(self):
        return self.value

    @property
    def is_rational(self):
        return True

    def __str__(self):
        return format_rational(self.value)


@dataclass(frozen=True, eq=False)
class _Binary(Expr):
    a: Expr
    b: Expr

    @property
    def is_rational(self):
        return self.a.is_rational and self.b.is_rational

    def exact(self):
        x, y = self.a.exact(), self.b.exact()
        if x is None or y is None:
            return None
        return self._apply(x, y)


class Add(_Binary):
    def enclose(self, prec):
        return self.a.enclose(prec) + self.b.enclose(prec)

    def _apply(self, x, y):
        return x + y

    def __str__(self):
        return f"({self.a} + {self.b})"


class Sub(_Binary):
    def enclose(self, prec):
        return self.a.enclose(prec) - self.b.enclose(prec)

    def _apply(self, x, y):
        return x - y

    def __str__(self):
        return f"({self.a} - {self.b})"


class Mul(_Binary):
    def enclose(self, prec):
        return self.a.enclose(prec) * self.b.enclose(prec)

    def _apply(self, x, y):
        return x * y

    def monomial(self):
        ma, mb = self.a.monomial(), self.b.monomial()
        if ma is None or mb is None:
            return None
        return ma + mb

    def __str__(self):
        return f"{self.a}*{self.b}"


class Div(_Binary):
    def enclose(self, prec):
        return self.a.enclose(prec) / self.b.enclose(prec)

    def _apply(self, x, y):
        if y == 0:
            raise DomainError("division by zero")
        return x / y

    def monomial(self):
        ma, mb = self.a.monomial(), self.b.monomial()
        if ma is None or mb is None:
            return None
        return ma + [(base, -e) for base, e in mb]

    def __str__(self):
        return f"{self.a}/{self.b}"


@dataclass(frozen=True, eq=False)
class Pow(Expr):
    base: Expr
    e: Fraction

    def enclose(self, prec):
        return interval_pow(self.base.enclose(prec), self.e)

    @property
    def is_rational(self):
        return self.e.denominator == 1 and self.base.is_rational

    def exact(self):
        x = self.base.exact()
        return None if x is None else exact_pow(x, self.e)

    def monomial(self):
        inner = self.base.monomial()
        if inner is None:
            return None
        return [(base, e * self.e) for base, e in inner]

    def __str__(self):
        return f"{self.base}^({format_rational(self.e)})"


def esum(terms: Iterable) -> Expr:
    terms = [as_expr(t) for t in terms]
    if not terms:
        return Const(Fraction(0))
    return reduce(Add, terms)


def eprod(factors: Iterable) -> Expr:
    factors = [as_expr(f) for f in factors]
    if not factors:
        return Const(Fraction(1))
    return reduce(Mul, factors)


def refine_until_ordered(lhs: Expr, rhs: Expr,
                         precision_schedule: Sequence[int] = DEFAULT_SCHEDULE
                         ) -> tuple[TriOrder, Fraction]:
    """Enclose both sides at each precision until they separate."""
    schedule = list(precision_schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("precision schedule must be non-empty and strictly increasing")
    for prec in schedule:
        a, b = lhs.enclose(prec), rhs.enclose(prec)
        order = rigorous_compare(a, b)
        if order is not TriOrder.OVERLAP:
            break
    return order, gap_bound(a, b)


# ---------------------------------------------------------------------------
# Exact comparison of monomials
# ---------------------------------------------------------------------------

def coprime_basis(values: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 that multiplicatively generate ``values``."""
    basis: list[int] = []
    for v in values:
        v = abs(int(v))
        pending = [v] if v > 1 else []
        while pending:
            x = pending.pop()
            for idx, q in enumerate(basis):
                g = math.gcd(x, q)
                if g > 1:
                    del basis[idx]
                    for part in (g, q // g, x // g):
                        if part > 1:
                            pending.append(part)
                    break
            else:
                basis.append(x)
    return sorted(basis)


def _valuation(x: int, q: int) -> int:
    k = 0
    while x % q == 0:
        x //= q
        k += 1
    return k


def monomial_exponents(terms: Sequence[tuple[Fraction, Fraction]]) -> dict[int, Fraction]:
    """Exponents of ``prod base**e`` over a coprime basis of the positive bases."""
    terms = [(b, e) for b, e in terms if e != 0 and b != 1]
    basis = coprime_basis([b.numerator for b, _ in terms] + [b.denominator for b, _ in terms])
    coeff = {q: Fraction(0) for q in basis}
    for base, e in terms:
        if base <= 0:
            raise DomainError("monomial bases must be positive")
        for q in basis:
            v = _valuation(base.numerator, q) - _valuation(base.denominator, q)
            if v:
                coeff[q] += v * e
    return {q: c for q, c in coeff.items() if c != 0}


def monomial_value(terms: Sequence[tuple[Fraction, Fraction]]) -> Fraction | None:
    """``prod base**e`` exactly when it is rational, else None."""
    if any(b == 0 for b, e in terms if e != 0):
        if any(b == 0 and e < 0 for b, e in terms):
            raise DomainError("zero base with negative exponent")
        return Fraction(0)
    out = Fraction(1)
    for q, c in monomial_exponents(terms).items():
        v = exact_pow(Fraction(q), c)
        if v is None:
            return None
        out *= v
    return out


def compare_monomials(lhs: Sequence[tuple[Fraction, Fraction]],
                      rhs: Sequence[tuple[Fraction, Fraction]],
                      prefilter_bits: int | None = 64) -> int:
    """Exact sign of ``prod(lhs) - prod(rhs)`` for nonnegative rational bases.

    Bases are factored over a common coprime basis; equal logarithmic
    coordinates prove equality without raising anything to a large power.
    A cheap interval pass settles clearly separated cases, and exact integer
    powering is the last resort.
    """
    def is_zero(side):
        for base, e in side:
            if base < 0:
                raise DomainError("negative base in a monomial")
            if base == 0:
                if e < 0:
                    raise DomainError("zero base with negative exponent")
                if e > 0:
                    return True
        return False

    zl, zr = is_zero(lhs), is_zero(rhs)
    if zl or zr:
        return (0 if zr else -1) if zl else 1
    lhs = [(b, e) for b, e in lhs if e != 0 and b != 1]
    rhs = [(b, e) for b, e in rhs if e != 0 and b != 1]
    coeff = monomial_exponents(lhs + [(b, -e) for b, e in rhs])
    if not coeff:
        return 0
    if all(c >= 0 for c in coeff.values()):
        return 1
    if all(c <= 0 for c in coeff.values()):
        return -1

    if prefilter_bits:
        for prec in (prefilter_bits, 4 * prefilter_bits):
            a = eprod(Pow(Const(b), e) for b, e in lhs).enclose(prec)
            c = eprod(Pow(Const(b), e) for b, e in rhs).enclose(prec)
            order = rigorous_compare(a, c)
            if order is TriOrder.CERTAINLY_LE:
                return -1
            if order is TriOrder.CERTAINLY_GT:
                return 1

    d = lcm_all(c.denominator for c in coeff.values())
    big = 1
    small = 1
    for q, c in coeff.items():
        k = int(c * d)
        if k > 0:
            big *= q ** k
        elif k < 0:
            small *= q ** (-k)
    return (big > small) - (big < small)
