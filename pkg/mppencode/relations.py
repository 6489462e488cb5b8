"""Spatial predicates between pairs of geometries.

Boundary contact is resolved with an absolute distance tolerance,
``DEFAULT_TOLERANCE``, which can be changed process-wide with
:func:`set_predicate_tolerance`.
"""
import logging
from enum import Enum

import numpy as np

from mppencode.exceptions import GeometryKindError
from mppencode.geometry import LINESTRING, POINT, POLYGON
from mppencode.measures import distances, interior_point
from mppencode.planar import (
    cross,
    crossing_parity,
    point_segment_distances,
    segments_intersect,
)

DEFAULT_TOLERANCE = 1e-9


def set_predicate_tolerance(tolerance):
    global DEFAULT_TOLERANCE
    if tolerance < 0:
        raise ValueError("Predicate tolerance must be non-negative.")
    DEFAULT_TOLERANCE = tolerance


class RelationKind(str, Enum):
    POINT_IN_POLYGON = "PointInPolygon"
    POINT_ON_LINESTRING = "PointOnLineString"
    LINE_LINE_INTERSECT = "LineLineIntersect"
    LINE_INTERSECTS_POLYGON = "LineIntersectsPolygon"
    POLYGON_INTERSECTS_POLYGON = "PolygonIntersectsPolygon"
    POLYGON_BORDERS_POLYGON = "PolygonBordersPolygon"

    def __str__(self):
        return self.value


# Primitive kinds required of (a, b) for each relation.
OPERAND_KINDS = {
    RelationKind.POINT_IN_POLYGON: (POINT, POLYGON),
    RelationKind.POINT_ON_LINESTRING: (POINT, LINESTRING),
    RelationKind.LINE_LINE_INTERSECT: (LINESTRING, LINESTRING),
    RelationKind.LINE_INTERSECTS_POLYGON: (LINESTRING, POLYGON),
    RelationKind.POLYGON_INTERSECTS_POLYGON: (POLYGON, POLYGON),
    RelationKind.POLYGON_BORDERS_POLYGON: (POLYGON, POLYGON),
}


def strictly_inside(points, polygon, tolerance=None):
    """Boolean mask of ``points`` lying in the interior of ``polygon`` and
    further than ``tolerance`` from its boundary."""
    tolerance = DEFAULT_TOLERANCE if tolerance is None else tolerance
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    inside = np.zeros(len(pts), dtype=bool)
    for part in polygon.parts():
        starts, ends = part.segments()
        parity = crossing_parity(pts, starts, ends)
        clear = point_segment_distances(pts, starts, ends).min(axis=1) > tolerance
        inside |= parity & clear
    return inside


def _split_parameters(starts, ends, cut_starts, cut_ends, tolerance):
    """Parameters in ``[0, 1]`` at which each segment is cut by the other set.

    Returns an ``(M, 3K + 2)`` array; unused slots are NaN.
    """
    p1, p2 = starts[:, None, :], ends[:, None, :]
    q1, q2 = cut_starts[None, :, :], cut_ends[None, :, :]
    d = p2 - p1
    e = q2 - q1
    denom = d[..., 0] * e[..., 1] - d[..., 1] * e[..., 0]
    w = q1 - p1

    hits = segments_intersect(p1, p2, q1, q2, tolerance)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_cross = (w[..., 0] * e[..., 1] - w[..., 1] * e[..., 0]) / denom
    t_cross = np.where(hits & (denom != 0), t_cross, np.nan)

    # Cut-set vertices lying on the segment, including collinear overlaps.
    direction = ends - starts
    seg_len2 = np.einsum("ij,ij->i", direction, direction)[:, None]
    projections = []
    for q in (cut_starts, cut_ends):
        rel = q[None, :, :] - starts[:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.einsum("mkj,mj->mk", rel, direction) / seg_len2
        near = point_segment_distances(q, starts, ends).T <= tolerance
        projections.append(np.where(near, t, np.nan))

    m = len(starts)
    bounds = np.tile([0.0, 1.0], (m, 1))
    params = np.concatenate([bounds, t_cross] + projections, axis=1)
    return np.where((params >= 0) & (params <= 1), params, np.nan)


def _piece_midpoints(geometry, cutter, tolerance):
    """Midpoints of the pieces obtained by cutting every segment of
    ``geometry`` at its contacts with ``cutter``'s segments."""
    starts, ends = geometry.segments()
    cut_starts, cut_ends = cutter.segments()
    params = np.sort(
        _split_parameters(starts, ends, cut_starts, cut_ends, tolerance), axis=1
    )
    lo, hi = params[:, :-1], params[:, 1:]
    valid = ~np.isnan(lo) & ~np.isnan(hi) & (hi > lo)
    rows, cols = np.nonzero(valid)
    t = 0.5 * (lo[rows, cols] + hi[rows, cols])
    return starts[rows] + t[:, None] * (ends[rows] - starts[rows])


def _line_enters_polygon(line, polygon, tolerance):
    mids = _piece_midpoints(line, polygon, tolerance)
    return bool(np.any(strictly_inside(mids, polygon, tolerance)))


def _interiors_overlap(a, b, tolerance):
    if _line_enters_polygon(a, b, tolerance) or _line_enters_polygon(b, a, tolerance):
        return True
    # Boundaries never enter the other interior: either disjoint, or one
    # polygon coincides with or surrounds the other.
    probes_a = [interior_point(part) for part in a.parts()]
    probes_b = [interior_point(part) for part in b.parts()]
    return bool(
        np.any(strictly_inside(probes_a, b, tolerance))
        or np.any(strictly_inside(probes_b, a, tolerance))
    )


def _shares_boundary(a, b, tolerance):
    """True if a segment of ``a`` and one of ``b`` are collinear and overlap
    over more than ``tolerance``."""
    p1, p2 = a.segments()
    q1, q2 = b.segments()
    p1, p2 = p1[:, None, :], p2[:, None, :]
    q1, q2 = q1[None, :, :], q2[None, :, :]
    d = p2 - p1
    seg_len = np.hypot(d[..., 0], d[..., 1])
    collinear = (np.abs(cross(p1, p2, q1)) <= tolerance * seg_len) & (
        np.abs(cross(p1, p2, q2)) <= tolerance * seg_len
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = ((q1 - p1) * d).sum(axis=-1) / seg_len**2
        t2 = ((q2 - p1) * d).sum(axis=-1) / seg_len**2
    lo = np.maximum(np.minimum(t1, t2), 0.0)
    hi = np.minimum(np.maximum(t1, t2), 1.0)
    overlap = (hi - lo) * seg_len
    return bool(np.any(collinear & (overlap > tolerance)))


def _check_operands(kind, a, b):
    expected = OPERAND_KINDS[kind]
    if (a.primitive_kind, b.primitive_kind) != expected:
        raise GeometryKindError(
            f"{kind.value} relates a {expected[0]} to a {expected[1]}, "
            f"got {a.kind} and {b.kind}."
        )


def relation(kind, a, b, tolerance=None):
    """Evaluates relation ``kind`` between ``a`` and ``b``.

    :param kind: The relation to test.
    :type kind: :class:`RelationKind` or its ``str`` value
    :param a: First operand; its kind must match the relation.
    :param b: Second operand.
    :param tolerance: Boundary distance tolerance; defaults to
                      ``DEFAULT_TOLERANCE``.
    :rtype: ``bool``
    :raises GeometryKindError: If the operands do not have the kinds the
                               relation is defined for.
    """
    kind = RelationKind(kind)
    _check_operands(kind, a, b)
    tolerance = DEFAULT_TOLERANCE if tolerance is None else tolerance

    if kind is RelationKind.POINT_IN_POLYGON:
        return bool(np.any(strictly_inside(a.vertices(), b, tolerance)))

    if kind is RelationKind.POINT_ON_LINESTRING:
        return bool(np.any(distances(b, a.vertices()) <= tolerance))

    if kind is RelationKind.LINE_LINE_INTERSECT:
        p1, p2 = a.segments()
        q1, q2 = b.segments()
        return bool(
            np.any(
                segments_intersect(
                    p1[:, None, :], p2[:, None, :], q1[None, :, :], q2[None, :, :],
                    tolerance,
                )
            )
        )

    if kind is RelationKind.LINE_INTERSECTS_POLYGON:
        return _line_enters_polygon(a, b, tolerance)

    overlap = _interiors_overlap(a, b, tolerance)
    if kind is RelationKind.POLYGON_INTERSECTS_POLYGON:
        return overlap

    result = not overlap and _shares_boundary(a, b, tolerance)
    logging.debug("PolygonBordersPolygon: overlap=%s result=%s", overlap, result)
    return result
