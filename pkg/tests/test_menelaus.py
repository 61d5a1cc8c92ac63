from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ineqcert.generate import gen_polygon_and_transversal, instance_rng
from ineqcert.menelaus import (
    CoincidentLines,
    CoincidentPoints,
    DegeneratePolygon,
    DiagonalParallel,
    Line,
    NotCollinear,
    ParallelLines,
    ParallelSide,
    Point,
    Polygon,
    ThroughVertex,
    collinear_ratio,
    diagonal_cuts,
    line_line_intersection,
    menelaus_product,
    product_with_points,
    transversal_points,
)
from oracles import menelaus_squared_product

TRIANGLE = Polygon(((0, 0), (4, 0), (0, 4)))
SQUARE = Polygon(((0, 0), (4, 0), (4, 4), (0, 4)))
D = Line(1, -2, -2)  # x - 2y = 2


def test_line_canonical_form():
    assert Line(2, -4, -4) == D
    assert Line(0, 3, 6) == Line(0, 1, 2)
    with pytest.raises(Exception):
        Line(0, 0, 1)


def test_line_line_intersection():
    assert line_line_intersection(Line(1, 0, 0), Line(0, 1, 0)) == Point(0, 0)
    assert line_line_intersection(D, Line(1, 1, -4)) == Point(F(10, 3), F(2, 3))
    with pytest.raises(ParallelLines):
        line_line_intersection(Line(0, 1, 0), Line(0, 1, -1))
    with pytest.raises(CoincidentLines):
        line_line_intersection(Line(0, 1, 0), Line(0, 2, 0))


def test_collinear_ratio():
    assert collinear_ratio(Point(0, -1), Point(0, 4), Point(0, 0)) == 5
    assert collinear_ratio(Point(1, 1), Point(0, 0), Point(2, 2)) == 1
    assert collinear_ratio(Point(F(10, 3), F(2, 3)), Point(4, 0), Point(0, 4)) == F(1, 5)
    with pytest.raises(NotCollinear):
        collinear_ratio(Point(1, 0), Point(0, 0), Point(0, 1))
    with pytest.raises(CoincidentPoints):
        collinear_ratio(Point(0, 0), Point(0, 0), Point(0, 1))


def test_triangle_example():
    t = transversal_points(TRIANGLE, D)
    assert t.points == (Point(2, 0), Point(F(10, 3), F(2, 3)), Point(0, -1))
    assert t.ratios == (1, F(1, 5), 5)
    assert menelaus_product(TRIANGLE, D) == 1


def test_square_example():
    t = transversal_points(SQUARE, D)
    assert t.points == (Point(2, 0), Point(4, 1), Point(10, 4), Point(0, -1))
    assert t.ratios == (1, F(1, 3), F(3, 5), 5)
    assert t.product == 1


def test_degenerate_configurations():
    with pytest.raises(ParallelSide):
        transversal_points(SQUARE, Line(0, 1, -1))
    with pytest.raises(ThroughVertex):
        transversal_points(SQUARE, Line(0, 1, 0))
    with pytest.raises(ThroughVertex):
        transversal_points(TRIANGLE, Line(1, 0, 0))
    with pytest.raises(DegeneratePolygon):
        Polygon(((0, 0), (0, 0), (1, 1)))
    with pytest.raises(DegeneratePolygon):
        Polygon(((0, 0), (1, 1)))


def test_displaced_point_breaks_product():
    pts = list(transversal_points(SQUARE, D).points)
    pts[1] = Point(4, 2)
    assert product_with_points(SQUARE, pts) == 3


def test_quadrilateral_cut():
    (step,) = diagonal_cuts(SQUARE, D)
    assert step.cut_point == Point(F(10, 3), F(2, 3))
    assert step.triangle_ratios == (1, F(1, 5), 5)
    assert step.remainder_ratios == (5, F(1, 3), F(3, 5))
    assert step.triangle_product == 1 and step.remainder_product == 1
    a, b = step.cut_factors()
    assert a * b == 1


def test_triangle_has_no_cuts():
    assert diagonal_cuts(TRIANGLE, D) == []


def test_hexagon_cuts():
    hexagon = Polygon(((0, 0), (4, 0), (6, 3), (4, 7), (1, 6), (-2, 3)))
    line = Line(1, -2, F(1, 2))
    steps = diagonal_cuts(hexagon, line)
    assert len(steps) == 3
    assert all(s.triangle_product == 1 and s.remainder_product == 1 for s in steps)


def test_diagonal_parallel():
    # the transversal is parallel to the diagonal A2 A4 of this quadrilateral
    quad = Polygon(((0, 0), (4, 0), (5, 3), (0, 4)))
    line = Line.through(Point(1, 0), Point(5, -4))
    transversal_points(quad, line)
    with pytest.raises(DiagonalParallel):
        diagonal_cuts(quad, line)


def test_json_round_trip():
    assert Polygon.from_json(SQUARE.to_json()) == SQUARE
    assert Line.from_json(D.to_json()) == D


configs = st.tuples(st.integers(3, 12), st.integers(0, 2 ** 64 - 1)).map(
    lambda t: gen_polygon_and_transversal(t[0], instance_rng(t[1], 0)))


@given(configs)
def test_product_is_one_and_matches_distance_oracle(config):
    polygon, line = config
    assert menelaus_product(polygon, line) == 1
    verts = [(v.x, v.y) for v in polygon.vertices]
    assert menelaus_squared_product(verts, (line.a, line.b, line.c)) == 1
    for i, r in enumerate(transversal_points(polygon, line).ratios):
        A, B = polygon.side(i)
        M = transversal_points(polygon, line).points[i]
        assert r * r == (((M.x - A.x) ** 2 + (M.y - A.y) ** 2) / ((M.x - B.x) ** 2 + (M.y - B.y) ** 2))


@given(configs, st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 5), st.integers(0, 3))
def test_similarity_invariance(config, tx, ty, scale, rot):
    # rotations by multiples of 90 degrees and the 3-4-5 rotation have rational cosines
    polygon, line = config
    cos, sin = [(1, 0), (0, 1), (F(3, 5), F(4, 5)), (F(-4, 5), F(3, 5))][rot]

    def f(p):
        return Point(scale * (cos * p.x - sin * p.y) + tx, scale * (sin * p.x + cos * p.y) + ty)

    p1, p2 = line_points(line)
    moved = Polygon(tuple(f(v) for v in polygon.vertices))
    moved_line = Line.through(f(p1), f(p2))
    assert transversal_points(moved, moved_line).ratios == transversal_points(polygon, line).ratios


def line_points(line):
    if line.b != 0:
        return Point(0, -line.c / line.b), Point(1, -(line.a + line.c) / line.b)
    return Point(-line.c / line.a, 0), Point(-line.c / line.a, 1)


@given(configs)
def test_decomposition_consistency(config):
    polygon, line = config
    try:
        steps = diagonal_cuts(polygon, line)
    except DiagonalParallel:
        return
    assert len(steps) == polygon.n - 3
    for s in steps:
        assert s.triangle_product * s.remainder_product == menelaus_product(s.polygon, line)
