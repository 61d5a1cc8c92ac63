"""Exact rational plane geometry for the n-gon Menelaus product.

All coordinates are Fractions.  Intersections are taken with the supporting
lines of the sides, and section ratios are unsigned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_numeric import format_rational, parse_rational


class GeometryError(ValueError):
    pass


class ParallelLines(GeometryError):
    pass


class CoincidentLines(GeometryError):
    pass


class NotCollinear(GeometryError):
    pass


class CoincidentPoints(GeometryError):
    pass


class DegeneratePolygon(GeometryError):
    pass


class ParallelSide(GeometryError):
    def __init__(self, i: int):
        super().__init__(f"transversal is parallel to side {i}")
        self.i = i


class ThroughVertex(GeometryError):
    def __init__(self, i: int):
        super().__init__(f"transversal passes through vertex {i}")
        self.i = i


class DiagonalParallel(GeometryError):
    pass


class DiagonalThroughCutVertex(GeometryError):
    pass


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", parse_rational(self.x))
        object.__setattr__(self, "y", parse_rational(self.y))

    def __sub__(self, other: "Point") -> tuple[Fraction, Fraction]:
        return self.x - other.x, self.y - other.y

    def to_json(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.y)]

    @classmethod
    def from_json(cls, data) -> "Point":
        return cls(parse_rational(data[0]), parse_rational(data[1]))


@dataclass(frozen=True)
class Line:
    """``a*x + b*y + c = 0``, scaled so the first nonzero of (a, b) is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = (parse_rational(v) for v in (self.a, self.b, self.c))
        if a == 0 and b == 0:
            raise GeometryError("line needs (a, b) != (0, 0)")
        lead = a if a != 0 else b
        object.__setattr__(self, "a", a / lead)
        object.__setattr__(self, "b", b / lead)
        object.__setattr__(self, "c", c / lead)

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        if p == q:
            raise CoincidentPoints("a line needs two distinct points")
        dx, dy = q - p
        return cls(dy, -dx, dx * p.y - dy * p.x)

    def value(self, p: Point) -> Fraction:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        return self.value(p) == 0

    def to_json(self) -> list[str]:
        return [format_rational(v) for v in (self.a, self.b, self.c)]

    @classmethod
    def from_json(cls, data) -> "Line":
        return cls(*(parse_rational(v) for v in data))


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(v if isinstance(v, Point) else Point(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise DegeneratePolygon("a polygon needs at least 3 vertices")
        for i in range(len(verts)):
            if verts[i] == verts[(i + 1) % len(verts)]:
                raise DegeneratePolygon(f"vertices {i} and {(i + 1) % len(verts)} coincide")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Point:
        return self.vertices[i % self.n]

    def side(self, i: int) -> tuple[Point, Point]:
        return self.vertex(i), self.vertex(i + 1)

    def side_line(self, i: int) -> Line:
        return Line.through(*self.side(i))

    def to_json(self) -> list[list[str]]:
        return [v.to_json() for v in self.vertices]

    @classmethod
    def from_json(cls, data) -> "Polygon":
        return cls(tuple(Point.from_json(v) for v in data))


def line_line_intersection(l1: Line, l2: Line) -> Point:
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        if l1 == l2:
            raise CoincidentLines("lines coincide")
        raise ParallelLines("lines are parallel")
    x = (l1.b * l2.c - l2.b * l1.c) / det
    y = (l2.a * l1.c - l1.a * l2.c) / det
    return Point(x, y)


def collinear_ratio(M: Point, A: Point, B: Point) -> Fraction:
    """Unsigned ``|MA| / |MB|`` for collinear points, exactly.

    With ``M = A + t (B - A)`` the lengths are ``|t|·|AB|`` and ``|t - 1|·|AB|``,
    so the ratio is rational even when the lengths are not.
    """
    if A == B:
        raise CoincidentPoints("A and B coincide")
    if M == A or M == B:
        raise CoincidentPoints("M coincides with an endpoint")
    (ux, uy), (vx, vy) = B - A, M - A
    if ux * vy - uy * vx != 0:
        raise NotCollinear("M is not on line AB")
    t = vx / ux if ux != 0 else vy / uy
    return abs(t) / abs(t - 1)


@dataclass(frozen=True)
class Transversal:
    polygon: Polygon
    line: Line
    points: tuple[Point, ...]
    ratios: tuple[Fraction, ...]

    @property
    def product(self) -> Fraction:
        out = Fraction(1)
        for r in self.ratios:
            out *= r
        return out


def transversal_points(P: Polygon, d: Line) -> Transversal:
    for i, v in enumerate(P.vertices):
        if d.contains(v):
            raise ThroughVertex(i)
    points = []
    for i in range(P.n):
        try:
            points.append(line_line_intersection(d, P.side_line(i)))
        except (ParallelLines, CoincidentLines):
            raise ParallelSide(i) from None
    ratios = tuple(collinear_ratio(M, *P.side(i)) for i, M in enumerate(points))
    return Transversal(P, d, tuple(points), ratios)


def menelaus_product(P: Polygon, d: Line) -> Fraction:
    return transversal_points(P, d).product


def product_with_points(P: Polygon, points: Sequence[Point]) -> Fraction:
    """Menelaus product for caller-supplied points on the side lines."""
    if len(points) != P.n:
        raise GeometryError("need one point per side")
    out = Fraction(1)
    for i, M in enumerate(points):
        out *= collinear_ratio(M, *P.side(i))
    return out


@dataclass(frozen=True)
class MenelausCutStep:
    """One diagonal cut of ``B_1 B_2 ... B_k`` along ``B_2 B_k``.

    The triangle is ``B_1 B_2 B_k`` and the remainder is the (k-1)-gon
    ``B_k B_2 B_3 ... B_{k-1}``.
    """

    polygon: Polygon
    line: Line
    cut_point: Point
    triangle_ratios: tuple[Fraction, Fraction, Fraction]
    remainder_ratios: tuple[Fraction, ...]

    kind = "menelaus_cut"

    @property
    def diagonal(self) -> tuple[Point, Point]:
        return self.polygon.vertex(1), self.polygon.vertex(-1)

    @property
    def triangle(self) -> Polygon:
        v = self.polygon.vertices
        return Polygon((v[0], v[1], v[-1]))

    @property
    def remainder(self) -> Polygon:
        v = self.polygon.vertices
        return Polygon((v[-1],) + v[1:-1])

    @property
    def triangle_product(self) -> Fraction:
        return _prod(self.triangle_ratios)

    @property
    def remainder_product(self) -> Fraction:
        return _prod(self.remainder_ratios)

    def cut_factors(self) -> tuple[Fraction, Fraction]:
        A2, An = self.diagonal
        return collinear_ratio(self.cut_point, A2, An), collinear_ratio(self.cut_point, An, A2)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "polygon": self.polygon.to_json(),
            "line": self.line.to_json(),
            "cut_point": self.cut_point.to_json(),
            "triangle_ratios": [format_rational(r) for r in self.triangle_ratios],
            "remainder_ratios": [format_rational(r) for r in self.remainder_ratios],
            # derived from the ratios; informational, not read back
            "triangle_product": format_rational(self.triangle_product),
            "remainder_product": format_rational(self.remainder_product),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MenelausCutStep":
        return cls(Polygon.from_json(data["polygon"]), Line.from_json(data["line"]),
                   Point.from_json(data["cut_point"]),
                   tuple(parse_rational(r) for r in data["triangle_ratios"]),
                   tuple(parse_rational(r) for r in data["remainder_ratios"]))


def _prod(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


def cut_once(P: Polygon, d: Line) -> MenelausCutStep:
    if P.n < 4:
        raise GeometryError("only polygons with at least 4 vertices are cut")
    A2, An = P.vertex(1), P.vertex(-1)
    if A2 == An:
        raise DiagonalThroughCutVertex("diagonal endpoints coincide")
    diag = Line.through(A2, An)
    try:
        M = line_line_intersection(d, diag)
    except (ParallelLines, CoincidentLines):
        raise DiagonalParallel("transversal is parallel to the cut diagonal") from None
    if M in (A2, An):
        raise DiagonalThroughCutVertex("cut point lands on a diagonal endpoint")
    tri = transversal_points(Polygon((P.vertex(0), A2, An)), d)
    rem = transversal_points(Polygon((An,) + P.vertices[1:-1]), d)
    return MenelausCutStep(P, d, M, tri.ratios, rem.ratios)


def diagonal_cuts(P: Polygon, d: Line) -> list[MenelausCutStep]:
    """Cut along ``A_2 A_n`` repeatedly until a triangle remains (n - 3 cuts)."""
    transversal_points(P, d)
    steps = []
    current = P
    while current.n > 3:
        step = cut_once(current, d)
        steps.append(step)
        current = step.remainder
    return steps
