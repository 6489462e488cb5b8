import numpy as np
import pytest

from mppencode import relations
from mppencode.exceptions import GeometryKindError
from mppencode.geometry import Geometry
from mppencode.relations import (
    OPERAND_KINDS,
    RelationKind,
    relation,
    set_predicate_tolerance,
    strictly_inside,
)

from .samples import (
    RIGHT_SQUARE,
    SHIFTED_SQUARE,
    SQUARE_WITH_HOLE,
    UNIT_SQUARE,
    UNIT_SQUARE_CW,
)
from .utils import segments_meet

SQUARE = Geometry.polygon(UNIT_SQUARE)
CORNER_SQUARE = Geometry.polygon([(1, 1), (2, 1), (2, 2), (1, 2), (1, 1)])
BIG_SQUARE = Geometry.polygon([(-5, -5), (5, -5), (5, 5), (-5, 5), (-5, -5)])
ZIGZAG = Geometry.linestring([(0, 0), (1, 1), (2, 0), (3, 1)])
HOLE_SQUARE = Geometry.polygon(
    [(4.5, 4.5), (5.5, 4.5), (5.5, 5.5), (4.5, 5.5), (4.5, 4.5)]
)


class TestRelationKind:
    def test_values(self):
        assert RelationKind("PolygonBordersPolygon") is (
            RelationKind.POLYGON_BORDERS_POLYGON
        )
        assert str(RelationKind.POINT_IN_POLYGON) == "PointInPolygon"
        assert set(OPERAND_KINDS) == set(RelationKind)

    def test_unknown(self):
        with pytest.raises(ValueError):
            RelationKind("Touches")

    def test_operand_kinds_checked(self):
        with pytest.raises(GeometryKindError):
            relation("PointInPolygon", SQUARE, Geometry.point(0, 0))
        with pytest.raises(GeometryKindError):
            relation("LineLineIntersect", Geometry.point(0, 0), SQUARE)


class TestPointRelations:
    def test_point_in_polygon(self):
        assert relation("PointInPolygon", Geometry.point(0.5, 0.5), SQUARE)
        assert not relation("PointInPolygon", Geometry.point(2, 2), SQUARE)

    def test_boundary_point_is_not_inside(self):
        assert not relation("PointInPolygon", Geometry.point(1, 0.5), SQUARE)
        assert not relation("PointInPolygon", Geometry.point(0, 0), SQUARE)

    def test_point_in_hole(self):
        holed = Geometry.polygon(SQUARE_WITH_HOLE[0], SQUARE_WITH_HOLE[1:])
        assert not relation("PointInPolygon", Geometry.point(5, 5), holed)
        assert relation("PointInPolygon", Geometry.point(2, 2), holed)

    def test_multipoint_any_part(self):
        points = Geometry.multipoint([(3, 3), (0.5, 0.5)])
        assert relation(RelationKind.POINT_IN_POLYGON, points, SQUARE)

    def test_point_on_linestring(self):
        line = Geometry.linestring([(0, 0), (1, 1), (2, 0)])
        assert relation("PointOnLineString", Geometry.point(0.5, 0.5), line)
        assert relation("PointOnLineString", Geometry.point(2, 0), line)
        assert not relation("PointOnLineString", Geometry.point(0.5, 0.6), line)

    def test_tolerance(self):
        line = Geometry.linestring([(0, 0), (1, 0)])
        near = Geometry.point(0.5, 1e-6)
        assert not relation("PointOnLineString", near, line)
        assert relation("PointOnLineString", near, line, tolerance=1e-5)

    def test_set_predicate_tolerance(self):
        line = Geometry.linestring([(0, 0), (1, 0)])
        near = Geometry.point(0.5, 1e-6)
        previous = relations.DEFAULT_TOLERANCE
        try:
            set_predicate_tolerance(1e-5)
            assert relation("PointOnLineString", near, line)
        finally:
            set_predicate_tolerance(previous)
        with pytest.raises(ValueError):
            set_predicate_tolerance(-1)


class TestLineRelations:
    def test_crossing_lines(self):
        a = Geometry.linestring([(0, 0), (2, 2)])
        b = Geometry.linestring([(0, 2), (2, 0)])
        assert relation("LineLineIntersect", a, b)

    def test_touching_endpoint_counts(self):
        a = Geometry.linestring([(0, 0), (1, 1)])
        b = Geometry.linestring([(1, 1), (2, 0)])
        assert relation("LineLineIntersect", a, b)

    def test_parallel_lines(self):
        a = Geometry.linestring([(0, 0), (2, 0)])
        b = Geometry.linestring([(0, 1), (2, 1)])
        assert not relation("LineLineIntersect", a, b)

    def test_collinear_overlap(self):
        a = Geometry.linestring([(0, 0), (2, 0)])
        b = Geometry.linestring([(1, 0), (3, 0)])
        assert relation("LineLineIntersect", a, b)

    def test_matches_orientation_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            p1, p2, q1, q2 = (tuple(v) for v in rng.uniform(0, 10, size=(4, 2)))
            a = Geometry.linestring([p1, p2])
            b = Geometry.linestring([q1, q2])
            assert relation("LineLineIntersect", a, b) == segments_meet(p1, p2, q1, q2)

    def test_line_through_polygon(self):
        line = Geometry.linestring([(-1, 0.5), (2, 0.5)])
        assert relation("LineIntersectsPolygon", line, SQUARE)

    def test_line_inside_polygon(self):
        line = Geometry.linestring([(0.2, 0.2), (0.8, 0.8)])
        assert relation("LineIntersectsPolygon", line, SQUARE)

    def test_line_along_boundary(self):
        line = Geometry.linestring([(-1, 1), (2, 1)])
        assert not relation("LineIntersectsPolygon", line, SQUARE)

    def test_line_touching_corner(self):
        line = Geometry.linestring([(1, 1), (2, 3)])
        assert not relation("LineIntersectsPolygon", line, SQUARE)

    def test_line_through_hole_only(self):
        holed = Geometry.polygon(SQUARE_WITH_HOLE[0], SQUARE_WITH_HOLE[1:])
        line = Geometry.linestring([(4.5, 4.5), (5.5, 5.5)])
        assert not relation("LineIntersectsPolygon", line, holed)


class TestPolygonRelations:
    def test_overlap(self):
        shifted = Geometry.polygon(SHIFTED_SQUARE)
        assert relation("PolygonIntersectsPolygon", shifted, SQUARE)
        assert not relation("PolygonBordersPolygon", shifted, SQUARE)

    def test_shared_edge(self):
        right = Geometry.polygon(RIGHT_SQUARE)
        assert relation("PolygonBordersPolygon", right, SQUARE)
        assert relation("PolygonBordersPolygon", SQUARE, right)
        assert not relation("PolygonIntersectsPolygon", right, SQUARE)

    def test_orientation_does_not_matter(self):
        clockwise = Geometry.polygon(UNIT_SQUARE_CW)
        right = Geometry.polygon(RIGHT_SQUARE)
        assert relation("PolygonBordersPolygon", right, clockwise)

    def test_corner_contact_is_not_a_border(self):
        assert not relation("PolygonBordersPolygon", CORNER_SQUARE, SQUARE)
        assert not relation("PolygonIntersectsPolygon", CORNER_SQUARE, SQUARE)

    def test_containment(self):
        assert relation("PolygonIntersectsPolygon", SQUARE, BIG_SQUARE)
        assert relation("PolygonIntersectsPolygon", BIG_SQUARE, SQUARE)

    def test_identical_polygons(self):
        assert relation("PolygonIntersectsPolygon", SQUARE, SQUARE)
        assert not relation("PolygonBordersPolygon", SQUARE, SQUARE)

    def test_disjoint(self):
        far = Geometry.polygon([(x + 5, y) for x, y in UNIT_SQUARE])
        assert not relation("PolygonIntersectsPolygon", far, SQUARE)
        assert not relation("PolygonBordersPolygon", far, SQUARE)

    def test_polygon_inside_hole(self):
        holed = Geometry.polygon(SQUARE_WITH_HOLE[0], SQUARE_WITH_HOLE[1:])
        assert not relation("PolygonIntersectsPolygon", HOLE_SQUARE, holed)


@pytest.mark.parametrize(
    "kind,a,b,expected",
    [
        ("PointInPolygon", Geometry.multipoint([(3, 3), (0.5, 0.5)]), SQUARE, True),
        ("PointOnLineString", Geometry.point(1.5, 0.5), ZIGZAG, True),
        ("PointOnLineString", Geometry.point(1.5, 1), ZIGZAG, False),
        (
            "LineLineIntersect",
            ZIGZAG,
            Geometry.linestring([(0, 0.5), (1.5, 2), (3, 0.5)]),
            True,
        ),
        (
            "LineLineIntersect",
            ZIGZAG,
            Geometry.linestring([(0, 2), (1.5, 3), (3, 2)]),
            False,
        ),
        (
            "LineIntersectsPolygon",
            Geometry.linestring([(-1, 0.5), (0.5, 0.5), (0.5, 2)]),
            SQUARE,
            True,
        ),
        (
            "LineIntersectsPolygon",
            Geometry.linestring([(-1, 0), (-1, 1), (0, 1)]),
            SQUARE,
            False,
        ),
        ("PolygonIntersectsPolygon", Geometry.polygon(SHIFTED_SQUARE), SQUARE, True),
        ("PolygonIntersectsPolygon", CORNER_SQUARE, SQUARE, False),
        ("PolygonBordersPolygon", Geometry.polygon(RIGHT_SQUARE), SQUARE, True),
        ("PolygonBordersPolygon", Geometry.polygon(SHIFTED_SQUARE), SQUARE, False),
    ],
)
def test_multi_segment_operands(kind, a, b, expected):
    assert relation(kind, a, b) is expected
    if kind in ("LineLineIntersect", "PolygonIntersectsPolygon"):
        assert relation(kind, b, a) is expected


class TestStrictlyInside:
    def test_mask(self):
        mask = strictly_inside([(0.5, 0.5), (1, 0.5), (3, 3)], SQUARE)
        assert mask.tolist() == [True, False, False]
