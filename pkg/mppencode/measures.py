import math

import numpy as np
from scipy.spatial.distance import cdist

from mppencode.exceptions import DomainError, GeometryKindError
from mppencode.geometry import (
    LINESTRING,
    POINT,
    POLYGON,
    Geometry,
    Point2,
)
from mppencode.planar import (
    crossing_parity,
    hull_points,
    point_segment_distances,
    signed_ring_area,
)


def _require(g, primitive, operation):
    if g.primitive_kind != primitive:
        raise GeometryKindError(
            f"{operation} needs a {primitive} or Multi{primitive}, got {g.kind}."
        )


def _part_distances(part, points):
    if part.kind == POINT:
        return cdist(points, np.array([part.coords]))[:, 0]
    starts, ends = part.segments()
    d = point_segment_distances(points, starts, ends).min(axis=1)
    if part.kind == POLYGON:
        d[crossing_parity(points, starts, ends)] = 0.0
    return d


def distances(g, points):
    """Minimum Euclidean distance from ``g`` to each of ``points``.

    Points on ``g``, and points inside a polygon's interior (holes
    excluded), are at distance 0. Multi-part geometries take the minimum
    over their parts.

    :param g: A valid geometry.
    :type g: :class:`~mppencode.geometry.Geometry`
    :param points: ``(N, 2)`` array-like of query points.
    :rtype: ``numpy.ndarray`` of shape ``(N,)``
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    result = None
    for part in g.parts():
        d = _part_distances(part, pts)
        result = d if result is None else np.minimum(result, d)
    return result


def min_distance(g, p):
    """Minimum Euclidean distance from geometry ``g`` to point ``p``.

    :type g: :class:`~mppencode.geometry.Geometry`
    :param p: ``(x, y)`` pair.
    :rtype: ``float``
    """
    return float(distances(g, [p])[0])


def length(g):
    """Arc length of a LineString (summed over parts for MultiLineString).

    :rtype: ``float``
    :raises GeometryKindError: If ``g`` is not linear.
    """
    _require(g, LINESTRING, "length")
    starts, ends = g.segments()
    d = ends - starts
    return float(np.hypot(d[:, 0], d[:, 1]).sum())


def _polygon_area(rings):
    areas = [abs(signed_ring_area(r)) for r in rings]
    return max(areas[0] - sum(areas[1:]), 0.0)


def area(g):
    """Area of a Polygon with holes subtracted, summed over MultiPolygon parts.

    :rtype: ``float``
    :raises GeometryKindError: If ``g`` is not polygonal.
    """
    _require(g, POLYGON, "area")
    return float(sum(_polygon_area(part.rings()) for part in g.parts()))


def bounds(g):
    """``(min_x, min_y, max_x, max_y)`` of all vertices."""
    return g.bounds()


def _ring_moments(ring):
    # Shifted to the first vertex to limit cancellation.
    origin = ring[0]
    x = ring[:, 0] - origin[0]
    y = ring[:, 1] - origin[1]
    c = x[:-1] * y[1:] - x[1:] * y[:-1]
    a = 0.5 * c.sum()
    cx = ((x[:-1] + x[1:]) * c).sum() / (6.0 * a)
    cy = ((y[:-1] + y[1:]) * c).sum() / (6.0 * a)
    return abs(a), np.array([cx + origin[0], cy + origin[1]])


def centroid(g):
    """Area-weighted centroid for polygons, length-weighted for lines and the
    vertex mean for points.

    :rtype: :class:`~mppencode.geometry.Point2`
    """
    if g.primitive_kind == POLYGON:
        total = 0.0
        acc = np.zeros(2)
        for part in g.parts():
            for index, ring in enumerate(part.rings()):
                a, c = _ring_moments(ring)
                sign = 1.0 if index == 0 else -1.0
                total += sign * a
                acc += sign * a * c
        return Point2(*(float(v) for v in acc / total))

    if g.primitive_kind == LINESTRING:
        starts, ends = g.segments()
        d = ends - starts
        weights = np.hypot(d[:, 0], d[:, 1])
        if weights.sum() > 0:
            mids = 0.5 * (starts + ends)
            c = (mids * weights[:, None]).sum(axis=0) / weights.sum()
            return Point2(float(c[0]), float(c[1]))

    c = g.vertices().mean(axis=0)
    return Point2(float(c[0]), float(c[1]))


def hull_vertices(g):
    """Convex hull vertices of ``g`` as a counter-clockwise ``(k, 2)`` array."""
    if "hull" not in g._cache:
        g._cache["hull"] = hull_points(g.vertices())
    return g._cache["hull"]


def convex_hull(g):
    """Convex hull of ``g``. Degenerate inputs give a LineString (collinear
    vertices) or a Point (coincident vertices).

    :rtype: :class:`~mppencode.geometry.Geometry`
    """
    hull = hull_vertices(g)
    if len(hull) == 1:
        return Geometry.point(*hull[0])
    if len(hull) == 2:
        return Geometry.linestring(hull)
    ring = np.vstack([hull, hull[:1]])
    return Geometry(POLYGON, (tuple(map(tuple, ring.tolist())),), validate=False)


def hull_area(g):
    hull = hull_vertices(g)
    if len(hull) < 3:
        return 0.0
    return abs(signed_ring_area(np.vstack([hull, hull[:1]])))


def farthest_pair(g):
    """The two vertices of ``g`` furthest apart.

    Ties go to the lexicographically smallest pair, each pair being ordered
    ``(min, max)``. A geometry whose vertices all coincide returns ``(p, p)``.

    :rtype: ``tuple`` of two :class:`~mppencode.geometry.Point2`
    """
    hull = hull_vertices(g)
    if len(hull) == 1:
        p = Point2(*hull[0])
        return p, p

    d = cdist(hull, hull)
    i, j = np.nonzero(np.triu(d == d.max(), k=1))
    pairs = [
        tuple(sorted((tuple(hull[a].tolist()), tuple(hull[b].tolist()))))
        for a, b in zip(i, j)
    ]
    p, q = min(pairs)
    return Point2(*p), Point2(*q)


def orientation_angle(g):
    """Angle of the farthest-pair direction against the +x axis, in
    ``[0, pi)``. Degenerate geometries have orientation 0.

    :rtype: ``float``
    """
    p, q = farthest_pair(g)
    if p == q:
        return 0.0
    angle = math.atan2(q.y - p.y, q.x - p.x) % math.pi
    return 0.0 if angle >= math.pi else angle


def sinuosity(g):
    """``1 - exp(1 - r / r*)`` for a LineString of arc length ``r`` whose
    endpoints are ``r*`` apart; closed lines score 1.

    :rtype: ``float``
    """
    if g.kind != LINESTRING:
        raise GeometryKindError(f"sinuosity needs a LineString, got {g.kind}.")
    r = length(g)
    (x0, y0), (x1, y1) = g.coords[0], g.coords[-1]
    r_star = math.hypot(x1 - x0, y1 - y0)
    if r_star == 0:
        return 1.0
    return max(0.0, 1.0 - math.exp(1.0 - r / r_star))


def char_ratio(g):
    """Convex hull area ratio: polygon area over the area of its hull.

    :rtype: ``float`` in ``(0, 1]``
    :raises DomainError: If the polygon has zero area.
    """
    _require(g, POLYGON, "char_ratio")
    a = area(g)
    if a <= 0:
        raise DomainError("char_ratio is undefined for a zero-area polygon.")
    return min(1.0, a / hull_area(g))


def interior_point(g):
    """A point strictly inside polygon ``g`` (largest part of a MultiPolygon).

    Takes a horizontal scanline between two vertex heights near the middle of
    the shape and returns the midpoint of its widest inside interval.

    :rtype: :class:`~mppencode.geometry.Point2`
    """
    _require(g, POLYGON, "interior_point")
    part = max(g.parts(), key=lambda p: _polygon_area(p.rings()))
    starts, ends = part.segments()

    ys = np.unique(part.vertices()[:, 1])
    mids = 0.5 * (ys[:-1] + ys[1:])
    target = 0.5 * (ys[0] + ys[-1])
    y = float(mids[np.argmin(np.abs(mids - target))])

    ay, by = starts[:, 1], ends[:, 1]
    straddle = (ay > y) != (by > y)
    a, b = starts[straddle], ends[straddle]
    xs = np.sort(a[:, 0] + (y - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1]))
    left, right = xs[0::2], xs[1::2]
    k = int(np.argmax(right - left))
    return Point2(float(0.5 * (left[k] + right[k])), y)


def points_along(g, count):
    """``count`` points spaced equally by arc length along a LineString,
    both endpoints included.

    :rtype: ``(count, 2)`` array
    """
    if g.kind != LINESTRING:
        raise GeometryKindError(f"points_along needs a LineString, got {g.kind}.")
    if count < 2:
        raise DomainError("points_along needs at least 2 points.")
    coords = np.array(g.coords, dtype=float)
    d = np.diff(coords, axis=0)
    cumulative = np.concatenate(([0.0], np.cumsum(np.hypot(d[:, 0], d[:, 1]))))
    targets = np.linspace(0.0, cumulative[-1], count)
    return np.column_stack(
        (
            np.interp(targets, cumulative, coords[:, 0]),
            np.interp(targets, cumulative, coords[:, 1]),
        )
    )
