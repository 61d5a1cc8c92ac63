"""Instances and checkers for the generalized Hölder, Cauchy-Buniakovski-Schwarz,
Minkowski and Chebyshev inequalities, plus the three-pair application.

Every checker returns a :class:`Verdict`.  ``HOLDS`` and ``VIOLATED`` are
certified strict orders, ``EQUALITY`` is a certified exact equality, and
``UNDETERMINED`` means the interval schedule ran out before the sides
separated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact_numeric import (
    DEFAULT_SCHEDULE,
    Const,
    Expr,
    Pow,
    RigorInterval,
    TriOrder,
    compare_monomials,
    eprod,
    esum,
    format_rational,
    lcm_all,
    monomial_value,
    parse_rational,
    gap_bound,
    rigorous_compare,
)


class InvalidInstance(ValueError):
    """An instance does not satisfy the hypotheses of its statement."""


class UnsortedColumn(InvalidInstance):
    def __init__(self, i: int, k: int):
        super().__init__(f"column {k} increases at row {i} (0-based)")
        self.i = i
        self.k = k


class UnsupportedMode(ValueError):
    pass


class Outcome(enum.Enum):
    HOLDS = "holds"
    EQUALITY = "equality"
    VIOLATED = "violated"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    gap_bound: Fraction | None = None
    evidence: dict | None = field(default=None, compare=False)

    @property
    def certified(self) -> bool:
        return self.outcome is not Outcome.UNDETERMINED

    def to_json(self) -> dict:
        out: dict = {"outcome": self.outcome.value}
        if self.gap_bound is not None:
            out["gap_bound"] = format_rational(self.gap_bound)
        if self.evidence is not None:
            out["evidence"] = self.evidence
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        gap = data.get("gap_bound")
        return cls(Outcome(data["outcome"]),
                   None if gap is None else parse_rational(gap),
                   data.get("evidence"))


HOLDS = Verdict(Outcome.HOLDS)
EQUALITY = Verdict(Outcome.EQUALITY)


class Mode(enum.Enum):
    EXACT_IF_POSSIBLE = "exact"
    INTERVAL_ONLY = "interval"


@dataclass(frozen=True)
class CheckConfig:
    mode: Mode = Mode.EXACT_IF_POSSIBLE
    precision_schedule: tuple[int, ...] = DEFAULT_SCHEDULE
    equality_detection: bool = True

    def __post_init__(self):
        if not self.precision_schedule:
            raise ValueError("precision schedule must be non-empty")

    @classmethod
    def capped(cls, mode: Mode = Mode.EXACT_IF_POSSIBLE, cap: int | None = None,
               equality_detection: bool = True) -> "CheckConfig":
        schedule = tuple(b for b in DEFAULT_SCHEDULE if cap is None or b <= cap)
        return cls(mode, schedule or (DEFAULT_SCHEDULE[0],), equality_detection)


DEFAULT_CONFIG = CheckConfig()


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NonNegMatrix:
    """Entries ``a[i][k]``: row ``i`` (n of them), column ``k`` (m of them)."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if not rows or not rows[0]:
            raise InvalidInstance("matrix needs n >= 1 and m >= 1")
        m = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != m:
                raise InvalidInstance(f"row {i} has {len(row)} entries, expected {m}")
            for k, x in enumerate(row):
                if x < 0:
                    raise InvalidInstance(f"negative entry at ({i}, {k})")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "NonNegMatrix":
        return cls(tuple(zip(*columns)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def m(self) -> int:
        return len(self.entries[0])

    def column(self, k: int) -> tuple[Fraction, ...]:
        return tuple(row[k] for row in self.entries)

    @property
    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(k) for k in range(self.m)]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.entries]


class SortedMatrix(NonNegMatrix):
    """A matrix whose every column is nonincreasing down the rows."""

    def __post_init__(self):
        super().__post_init__()
        for k in range(self.m):
            for i in range(self.n - 1):
                if self.entries[i][k] < self.entries[i + 1][k]:
                    raise UnsortedColumn(i, k)


@dataclass(frozen=True)
class ExponentVector:
    p: tuple[Fraction, ...]

    def __post_init__(self):
        p = tuple(parse_rational(x) for x in self.p)
        object.__setattr__(self, "p", p)
        for k, pk in enumerate(p):
            if pk <= 1:
                raise InvalidInstance(f"exponent p[{k}] = {pk} is not > 1")

    @property
    def conjugacy_defect(self) -> Fraction:
        return abs(sum(1 / pk for pk in self.p) - 1)

    @property
    def integral(self) -> bool:
        return all(pk.denominator == 1 for pk in self.p)

    def __len__(self):
        return len(self.p)

    def to_json(self) -> list[str]:
        return [format_rational(x) for x in self.p]


def _product(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


def row_products(M: NonNegMatrix, upto: int | None = None) -> list[Fraction]:
    upto = M.m if upto is None else upto
    return [_product(row[:upto]) for row in M.entries]


# ---------------------------------------------------------------------------
# Deciding a comparison
# ---------------------------------------------------------------------------

def _evidence(lhs: Expr, rhs: Expr, relation: str, method: str, **extra) -> dict:
    out = {"relation": relation, "method": method, "lhs": str(lhs), "rhs": str(rhs)}
    out.update(extra)
    return out


def decide(lhs: Expr, rhs: Expr, cfg: CheckConfig = DEFAULT_CONFIG,
           relation: str = "<=") -> Verdict:
    """Decide the claim ``lhs <= rhs`` (or ``lhs >= rhs``).

    Exact mode handles rational sides directly and products of rational
    powers by :func:`compare_monomials`; anything else goes through the
    interval schedule.
    """
    if relation not in ("<=", ">="):
        raise ValueError(f"unknown relation {relation!r}")
    flip = relation == ">="

    def from_sign(sign: int, method: str, **extra) -> Verdict:
        # sign of lhs - rhs
        if flip:
            sign = -sign
        if sign == 0:
            return EQUALITY
        if sign < 0:
            return HOLDS
        return Verdict(Outcome.VIOLATED, None,
                       _evidence(lhs, rhs, relation, method, **extra))

    def separated(order, a, b, prec) -> Verdict:
        return from_sign(-1 if order is TriOrder.CERTAINLY_LE else 1, "interval",
                         precision_bits=prec,
                         lhs_enclosure=[format_rational(a.lo_q), format_rational(a.hi_q)],
                         rhs_enclosure=[format_rational(b.lo_q), format_rational(b.hi_q)])

    if cfg.mode is Mode.EXACT_IF_POSSIBLE:
        if lhs.is_rational and rhs.is_rational:
            x, y = lhs.exact(), rhs.exact()
            return from_sign((x > y) - (x < y), "exact",
                             lhs_value=format_rational(x), rhs_value=format_rational(y))
        # cheap separation first; exact power sums can be huge
        prec = cfg.precision_schedule[0]
        a, b = lhs.enclose(prec), rhs.enclose(prec)
        order = rigorous_compare(a, b)
        if order is not TriOrder.OVERLAP:
            return separated(order, a, b, prec)
        ml, mr = lhs.monomial(), rhs.monomial()
        if ml is not None and mr is not None:
            return from_sign(compare_monomials(ml, mr), "exact-monomial")

    gap = None
    for prec in cfg.precision_schedule:
        a, b = lhs.enclose(prec), rhs.enclose(prec)
        if a.is_point() and b.is_point() and a.lo == b.lo:
            return EQUALITY
        order = rigorous_compare(a, b)
        if order is not TriOrder.OVERLAP:
            return separated(order, a, b, prec)
        gap = gap_bound(a, b)
    return Verdict(Outcome.UNDETERMINED, gap)


# ---------------------------------------------------------------------------
# Hölder and CBS
# ---------------------------------------------------------------------------

def validate_holder(M: NonNegMatrix, P: ExponentVector, require_conjugate: bool = True):
    if M.m != len(P):
        raise InvalidInstance(f"matrix has {M.m} columns but {len(P)} exponents")
    if M.m < 2:
        raise InvalidInstance("Hölder needs m >= 2")
    if require_conjugate and P.conjugacy_defect != 0:
        raise InvalidInstance(f"exponents are not conjugate (defect {P.conjugacy_defect})")


def holder_sides(M: NonNegMatrix, P: ExponentVector) -> tuple[Expr, Expr]:
    validate_holder(M, P)
    return _holder_sides(M, P)


def _holder_sides(M: NonNegMatrix, P: ExponentVector) -> tuple[Expr, Expr]:
    lhs = Const(sum(row_products(M), Fraction(0)))
    rhs = eprod(Pow(esum(Pow(Const(a), pk) for a in M.column(k)), 1 / pk)
                for k, pk in enumerate(P.p))
    return lhs, rhs


def holder_power_sums(M: NonNegMatrix, P: ExponentVector) -> list[Fraction]:
    """``S_k = sum_i a[i][k]**p_k``; integer exponents only."""
    if not P.integral:
        raise UnsupportedMode("power sums are exact only for integer exponents")
    return [sum((a ** int(pk) for a in M.column(k)), Fraction(0)) for k, pk in enumerate(P.p)]


def check_holder(M: NonNegMatrix, P: ExponentVector,
                 cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    validate_holder(M, P)
    return decide(*_holder_sides(M, P), cfg)


def check_cbs(M: NonNegMatrix, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    m = M.m
    if m < 2:
        raise InvalidInstance("CBS needs m >= 2")
    lhs = Const(sum(row_products(M), Fraction(0)) ** m)
    rhs = Const(_product(sum(a ** m for a in col) for col in M.columns))
    return decide(lhs, rhs, cfg)


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i, j in combinations(range(len(u)), 2))


def powered_proportional(u: Sequence[Fraction], e: Fraction,
                         v: Sequence[Fraction], f: Fraction) -> bool:
    """Exactly test whether ``(u_i**e)`` and ``(v_i**f)`` are proportional.

    Cross products ``u_i^e v_j^f = u_j^e v_i^f`` are compared after raising
    to the common denominator, so only integer powers are evaluated.
    """
    e, f = Fraction(e), Fraction(f)
    d = lcm_all([e.denominator, f.denominator])
    ei, fi = int(e * d), int(f * d)
    uu = [x ** ei for x in u]
    vv = [x ** fi for x in v]
    return _proportional(uu, vv)


def is_holder_equality_case(M: NonNegMatrix, P: ExponentVector) -> bool:
    validate_holder(M, P)
    if not P.integral:
        raise UnsupportedMode("equality prediction needs integer exponents")
    return _holder_equality(M.columns, P.p)


def _holder_equality(columns, exponents) -> bool:
    # a zero column sends both sides to 0
    if any(all(x == 0 for x in col) for col in columns):
        return True
    return all(powered_proportional(columns[k], exponents[k], columns[l], exponents[l])
               for k, l in combinations(range(len(columns)), 2))


# ---------------------------------------------------------------------------
# Minkowski
# ---------------------------------------------------------------------------

def minkowski_sides(M: NonNegMatrix, p: Fraction) -> tuple[Expr, Expr]:
    p = parse_rational(p)
    lhs = Pow(esum(Pow(Const(sum(row, Fraction(0))), p) for row in M.entries), 1 / p)
    rhs = esum(Pow(esum(Pow(Const(a), p) for a in col), 1 / p) for col in M.columns)
    return lhs, rhs


def columns_proportional(columns: Sequence[Sequence[Fraction]]) -> bool:
    nonzero = [c for c in columns if any(x != 0 for x in c)]
    return all(_proportional(u, v) for u, v in combinations(nonzero, 2))


def check_minkowski(M: NonNegMatrix, p, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    p = parse_rational(p)
    if p < 1:
        raise InvalidInstance(f"Minkowski needs p >= 1, got {p}")
    if M.m == 1 or p == 1:
        return EQUALITY
    if cfg.equality_detection and columns_proportional(M.columns):
        return EQUALITY
    return decide(*minkowski_sides(M, p), cfg)


# ---------------------------------------------------------------------------
# Chebyshev
# ---------------------------------------------------------------------------

def chebyshev_sides(M: NonNegMatrix) -> tuple[Expr, Expr]:
    n, m = M.n, M.m
    lhs = Const(sum(row_products(M), Fraction(0)) / n)
    rhs = Const(_product(sum(col, Fraction(0)) for col in M.columns) / Fraction(n) ** m)
    return lhs, rhs


def check_chebyshev(S: NonNegMatrix, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    if not isinstance(S, SortedMatrix):
        S = SortedMatrix(S.entries)
    if S.m == 1:
        return EQUALITY
    return decide(*chebyshev_sides(S), cfg, relation=">=")


# ---------------------------------------------------------------------------
# The three-pair application and its helper inequalities
# ---------------------------------------------------------------------------

def _pair(values) -> tuple[Fraction, Fraction]:
    x = tuple(parse_rational(v) for v in values)
    if len(x) != 2:
        raise InvalidInstance("expected a pair")
    if any(v < 0 for v in x):
        raise InvalidInstance("application inputs must be nonnegative")
    return x


def application_sides(a, b, c) -> tuple[Expr, Expr]:
    (a1, a2), (b1, b2), (c1, c2) = _pair(a), _pair(b), _pair(c)
    lhs = (a1 * b1 * c1 + a2 * b2 * c2) ** 6
    rhs = 8 * (a1 ** 6 + a2 ** 6) * (b1 ** 6 + b2 ** 6) * (c1 ** 6 + c2 ** 6)
    return Const(lhs), Const(rhs)


def check_application(a, b, c, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    return decide(*application_sides(a, b, c), cfg)


def application_holder_step(a, b, c, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    """The intermediate Hölder instance with exponents (2, 3, 6)."""
    M = NonNegMatrix.from_columns([_pair(a), _pair(b), _pair(c)])
    return check_holder(M, ExponentVector((2, 3, 6)), cfg)


def check_cube_square_bound(b, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    """``(b1^3 + b2^3)^2 <= 2 (b1^6 + b2^6)``."""
    b1, b2 = _pair(b)
    return decide(Const((b1 ** 3 + b2 ** 3) ** 2), Const(2 * (b1 ** 6 + b2 ** 6)), cfg)


def check_square_cube_bound(a, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    """``(a1^2 + a2^2)^3 <= 4 (a1^6 + a2^6)``."""
    a1, a2 = _pair(a)
    return decide(Const((a1 ** 2 + a2 ** 2) ** 3), Const(4 * (a1 ** 6 + a2 ** 6)), cfg)


def mixed_term_bound(a) -> bool:
    """``a1^4 a2^2 + a1^2 a2^4 <= a1^6 + a2^6``, checked through its factored gap."""
    a1, a2 = _pair(a)
    gap = (a1 ** 4 * a2 ** 2 + a1 ** 2 * a2 ** 4) - (a1 ** 6 + a2 ** 6)
    factored = -((a2 ** 2 - a1 ** 2) ** 2) * (a1 ** 2 + a2 ** 2)
    if gap != factored:
        raise AssertionError("factorization identity failed")
    return gap <= 0


# ---------------------------------------------------------------------------
# Slack
# ---------------------------------------------------------------------------

STATEMENTS = ("holder", "cbs", "minkowski", "chebyshev", "application")


def statement_sides(statement: str, instance) -> tuple[Expr, Expr]:
    """(dominated side, dominating side) for a statement's instance tuple."""
    if statement == "holder":
        return holder_sides(*instance)
    if statement == "cbs":
        (M,) = instance
        m = M.m
        return (Const(sum(row_products(M), Fraction(0)) ** m),
                Const(_product(sum(a ** m for a in col) for col in M.columns)))
    if statement == "minkowski":
        return minkowski_sides(*instance)
    if statement == "chebyshev":
        lhs, rhs = chebyshev_sides(*instance)
        return rhs, lhs
    if statement == "application":
        return application_sides(*instance)
    raise ValueError(f"unknown statement {statement!r}")


def slack_ratio(statement: str, instance, prec: int = 128) -> Fraction | RigorInterval:
    """Dominated side over dominating side; 1 exactly at equality cases.

    Returns an exact Fraction whenever the ratio is rational and computable
    exactly, otherwise an enclosure.
    """
    small, big = statement_sides(statement, instance)
    mono_s, mono_b = small.monomial(), big.monomial()
    if mono_s is not None and mono_b is not None:
        if any(b == 0 and e > 0 for b, e in mono_b):
            raise ZeroDivisionError("dominating side is zero")
        ratio = monomial_value(mono_s + [(b, -e) for b, e in mono_b])
        if ratio is not None:
            return ratio
    enclosure = big.enclose(prec)
    if enclosure.hi_q == 0:
        raise ZeroDivisionError("dominating side is zero")
    return small.enclose(prec) / enclosure


def holder_cleared_slack(M: NonNegMatrix, P: ExponentVector) -> tuple[Fraction, int]:
    """``(ratio**L, L)`` with ``L = lcm(p)``: the slack ratio with roots cleared."""
    validate_holder(M, P)
    sums = holder_power_sums(M, P)
    L = lcm_all(int(pk) for pk in P.p)
    lhs = sum(row_products(M), Fraction(0)) ** L
    rhs = _product(s ** (L // int(pk)) for s, pk in zip(sums, P.p))
    if rhs == 0:
        raise ZeroDivisionError("dominating side is zero")
    return lhs / rhs, L
