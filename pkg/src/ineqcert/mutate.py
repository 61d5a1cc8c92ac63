"""Negative controls: instances with exactly one hypothesis broken.

A :class:`Mutant` keeps the checker arguments of a valid instance together
with the one change that breaks it.  :func:`check_mutant` evaluates the
statement's claim on the mutant as if the broken hypothesis still held, so a
working checker must be able to report ``VIOLATED`` on some of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_numeric import format_rational, parse_rational
from .inequalities import (
    DEFAULT_CONFIG,
    CheckConfig,
    ExponentVector,
    InvalidInstance,
    NonNegMatrix,
    Outcome,
    Verdict,
    _holder_sides,
    chebyshev_sides,
    decide,
    validate_holder,
)
from .instances import Instance, check_instance, instance_from_json, instance_to_json
from .menelaus import Line, Point, Polygon, product_with_points, transversal_points

MUTATIONS: dict[str, tuple[str, ...]] = {
    "conjugacy": ("holder",),
    "direction": ("holder", "cbs", "minkowski", "chebyshev", "application"),
    "sort_order": ("chebyshev",),
    "transversal_point": ("menelaus",),
}

BROKEN = {
    "conjugacy": "sum of 1/p_k equals 1",
    "direction": "direction of the inequality",
    "sort_order": "columns are nonincreasing",
    "transversal_point": "M_i lies on the transversal",
}

# scaling every exponent by 10/9 turns sum 1/p_k = 1 into 9/10
CONJUGACY_SCALE = Fraction(10, 9)


@dataclass(frozen=True)
class Mutant:
    """``instance`` plus the change that breaks it.

    ``detail`` depends on the kind: the broken column for ``sort_order``,
    ``(side, offset)`` for ``transversal_point`` (the point on side line
    ``side`` is moved by ``offset`` times the side vector), empty otherwise.
    For ``conjugacy`` the instance already carries the scaled exponents.
    """

    kind: str
    instance: Instance
    detail: tuple = ()

    @property
    def statement(self) -> str:
        return self.instance.statement

    @property
    def broken(self) -> str:
        return BROKEN[self.kind]

    def to_json(self) -> dict:
        out = {"mutation": self.kind, "broken": self.broken,
               "instance": instance_to_json(self.instance)}
        if self.kind == "sort_order":
            out["column"] = self.detail[0]
        elif self.kind == "transversal_point":
            out["side"] = self.detail[0]
            out["offset"] = format_rational(self.detail[1])
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Mutant":
        kind = data["mutation"]
        inst = dict(data["instance"])
        if kind == "sort_order":
            entries = tuple(tuple(parse_rational(x) for x in row) for row in inst["entries"])
            return cls(kind, Instance("chebyshev", (NonNegMatrix(entries),)), (int(data["column"]),))
        if kind == "transversal_point":
            return cls(kind, instance_from_json(inst),
                       (int(data["side"]), parse_rational(data["offset"])))
        if kind == "conjugacy":
            M = NonNegMatrix(tuple(tuple(parse_rational(x) for x in row) for row in inst["entries"]))
            return cls(kind, Instance("holder", (M, ExponentVector(tuple(inst["exponents"])))))
        return cls(kind, instance_from_json(inst))


def displaced_points(polygon: Polygon, line: Line, side: int, offset: Fraction) -> tuple[Point, ...]:
    points = list(transversal_points(polygon, line).points)
    A, B = polygon.side(side)
    dx, dy = B - A
    M = points[side]
    points[side] = Point(M.x + offset * dx, M.y + offset * dy)
    return tuple(points)


def _flip(v: Verdict) -> Verdict:
    if v.outcome is Outcome.HOLDS:
        return Verdict(Outcome.VIOLATED, None, {"relation": "reversed", "original": "holds"})
    if v.outcome is Outcome.VIOLATED:
        return Verdict(Outcome.HOLDS)
    return v


def mutant_valid(mu: Mutant) -> bool:
    """Do all hypotheses other than the broken one still hold?"""
    kind, data = mu.kind, mu.instance.data
    try:
        if kind == "conjugacy":
            M, P = data
            validate_holder(M, P, require_conjugate=False)
            return P.conjugacy_defect != 0
        if kind == "sort_order":
            (M,) = data
            k = mu.detail[0]
            if not 0 <= k < M.m or M.m < 2:
                return False
            others = [c for j, c in enumerate(M.columns) if j != k]
            return all(all(a >= b for a, b in zip(c, c[1:])) for c in others)
        if kind == "transversal_point":
            polygon, line = data
            side, offset = mu.detail
            if offset == 0 or not 0 <= side < polygon.n:
                return False
            pts = displaced_points(polygon, line, side, offset)
            return pts[side] not in polygon.side(side)
        if kind == "direction":
            # validity of the unflipped instance
            check_instance(mu.instance)
            return True
    except (InvalidInstance, ValueError, ZeroDivisionError):
        return False
    raise ValueError(f"unknown mutation {kind!r}")


def check_mutant(mu: Mutant, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    """Evaluate the statement's claim on a mutant, ignoring the broken hypothesis."""
    kind, data = mu.kind, mu.instance.data
    if kind == "conjugacy":
        M, P = data
        validate_holder(M, P, require_conjugate=False)
        return decide(*_holder_sides(M, P), cfg)
    if kind == "sort_order":
        (M,) = data
        if M.m == 1:
            return Verdict(Outcome.EQUALITY)
        return decide(*chebyshev_sides(M), cfg, relation=">=")
    if kind == "transversal_point":
        polygon, line = data
        product = product_with_points(polygon, displaced_points(polygon, line, *mu.detail))
        if product == 1:
            return Verdict(Outcome.EQUALITY)
        return Verdict(Outcome.VIOLATED, None, {"relation": "==", "product": format_rational(product)})
    if kind == "direction":
        return _flip(check_instance(mu.instance, cfg))
    raise ValueError(f"unknown mutation {kind!r}")


def mutate_to_false(kind: str, instance: Instance, rng) -> Mutant:
    """Break exactly one hypothesis of a valid instance.

    ``rng`` needs ``below(n)``; it picks the column or side to break and the
    displacement, so the result is deterministic in the generator state.
    """
    if kind not in MUTATIONS:
        raise ValueError(f"unknown mutation {kind!r}")
    if instance.statement not in MUTATIONS[kind]:
        raise ValueError(f"mutation {kind!r} does not apply to {instance.statement!r}")
    data = instance.data
    if kind == "conjugacy":
        M, P = data
        scaled = ExponentVector(tuple(p * CONJUGACY_SCALE for p in P.p))
        return Mutant(kind, Instance("holder", (M, scaled)))
    if kind == "direction":
        return Mutant(kind, instance)
    if kind == "sort_order":
        (S,) = data
        k = rng.below(S.m)
        cols = S.columns
        cols[k] = tuple(reversed(cols[k]))
        return Mutant(kind, Instance("chebyshev", (NonNegMatrix.from_columns(cols),)), (k,))
    polygon, line = data
    side = rng.below(polygon.n)
    # a nonzero offset other than -t and 1 - t, which would land on a vertex
    while True:
        offset = Fraction(rng.below(31) - 15, rng.below(4) + 1)
        mu = Mutant(kind, instance, (side, offset))
        if mutant_valid(mu):
            return mu
