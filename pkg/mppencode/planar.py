"""Vectorised planar kernels shared by validation, measures, predicates and
the encoders. Everything here works on plain ``numpy`` arrays; points are
``(..., 2)`` arrays and segments are given as separate start/end arrays.
"""
import numpy as np
from scipy.spatial import ConvexHull, QhullError


def cross(o, a, b):
    """Z component of ``(a - o) x (b - o)``; positive when ``o, a, b`` turn
    counter-clockwise. Broadcasts over leading dimensions."""
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (
        a[..., 1] - o[..., 1]
    ) * (b[..., 0] - o[..., 0])


def _sign(values, tolerance):
    # tolerance broadcasts against values: a scalar or one per segment
    return np.where(np.abs(values) <= tolerance, 0.0, np.sign(values))


def _length(d):
    return np.hypot(d[..., 0], d[..., 1])


def _within_box(a, b, c, tolerance):
    return (
        (np.minimum(a[..., 0], b[..., 0]) - tolerance <= c[..., 0])
        & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0]) + tolerance)
        & (np.minimum(a[..., 1], b[..., 1]) - tolerance <= c[..., 1])
        & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1]) + tolerance)
    )


def segments_intersect(p1, p2, q1, q2, tolerance=0.0):
    """Closed segment intersection test (touching counts).

    ``tolerance`` is an absolute distance: orientation values are compared
    against ``tolerance`` times the length of the reference segment.
    """
    len_p = _length(p2 - p1) if tolerance else 0.0
    len_q = _length(q2 - q1) if tolerance else 0.0
    d1 = _sign(cross(p1, p2, q1), tolerance * len_p)
    d2 = _sign(cross(p1, p2, q2), tolerance * len_p)
    d3 = _sign(cross(q1, q2, p1), tolerance * len_q)
    d4 = _sign(cross(q1, q2, p2), tolerance * len_q)

    general = (d1 * d2 < 0) & (d3 * d4 < 0)
    special = (
        ((d1 == 0) & _within_box(p1, p2, q1, tolerance))
        | ((d2 == 0) & _within_box(p1, p2, q2, tolerance))
        | ((d3 == 0) & _within_box(q1, q2, p1, tolerance))
        | ((d4 == 0) & _within_box(q1, q2, p2, tolerance))
    )
    return general | special


def segments_cross_properly(p1, p2, q1, q2):
    """True where the segments cross at a single point interior to both."""
    d1 = np.sign(cross(p1, p2, q1))
    d2 = np.sign(cross(p1, p2, q2))
    d3 = np.sign(cross(q1, q2, p1))
    d4 = np.sign(cross(q1, q2, p2))
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def point_segment_distances(points, starts, ends):
    """Euclidean distances from every point to every closed segment.

    :param points: ``(N, 2)`` array.
    :param starts: ``(M, 2)`` segment start points.
    :param ends: ``(M, 2)`` segment end points.
    :rtype: ``(N, M)`` array
    """
    d = ends - starts
    seg_len2 = np.einsum("ij,ij->i", d, d)
    rel = points[:, None, :] - starts[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.einsum("nmk,mk->nm", rel, d) / seg_len2
    t = np.where(seg_len2 > 0, np.clip(t, 0.0, 1.0), 0.0)
    closest = starts[None, :, :] + t[..., None] * d[None, :, :]
    diff = points[:, None, :] - closest
    return np.hypot(diff[..., 0], diff[..., 1])


def crossing_parity(points, starts, ends):
    """Even-odd ray casting over a set of ring edges.

    Returns ``True`` for points with an odd number of edge crossings along the
    ray towards ``+x``. Points exactly on an edge may land either way; callers
    resolve boundary points by distance.
    """
    px = points[:, 0][:, None]
    py = points[:, 1][:, None]
    ax, ay = starts[:, 0][None, :], starts[:, 1][None, :]
    bx, by = ends[:, 0][None, :], ends[:, 1][None, :]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
    hits = straddle & (px < x_cross)
    return (np.count_nonzero(hits, axis=1) % 2) == 1


def segments_hit_boxes(starts, ends, boxes):
    """Closed segment / axis-aligned rectangle intersection.

    :param starts: ``(M, 2)``.
    :param ends: ``(M, 2)``.
    :param boxes: ``(N, 4)`` rows of ``min_x, min_y, max_x, max_y``.
    :rtype: ``(N, M)`` boolean array
    """
    bmin_x, bmin_y = boxes[:, 0][:, None], boxes[:, 1][:, None]
    bmax_x, bmax_y = boxes[:, 2][:, None], boxes[:, 3][:, None]
    sx0 = np.minimum(starts[:, 0], ends[:, 0])[None, :]
    sx1 = np.maximum(starts[:, 0], ends[:, 0])[None, :]
    sy0 = np.minimum(starts[:, 1], ends[:, 1])[None, :]
    sy1 = np.maximum(starts[:, 1], ends[:, 1])[None, :]
    overlap = (sx0 <= bmax_x) & (sx1 >= bmin_x) & (sy0 <= bmax_y) & (sy1 >= bmin_y)

    corners = np.stack(
        [
            np.stack([boxes[:, 0], boxes[:, 1]], axis=-1),
            np.stack([boxes[:, 2], boxes[:, 1]], axis=-1),
            np.stack([boxes[:, 2], boxes[:, 3]], axis=-1),
            np.stack([boxes[:, 0], boxes[:, 3]], axis=-1),
        ],
        axis=1,
    )  # (N, 4, 2)
    side = cross(
        starts[None, None, :, :], ends[None, None, :, :], corners[:, :, None, :]
    )  # (N, 4, M)
    all_left = np.all(side > 0, axis=1)
    all_right = np.all(side < 0, axis=1)
    return overlap & ~all_left & ~all_right


def points_in_boxes(points, boxes):
    """``(N_boxes, N_points)`` closed containment matrix."""
    x = points[:, 0][None, :]
    y = points[:, 1][None, :]
    return (
        (boxes[:, 0][:, None] <= x)
        & (x <= boxes[:, 2][:, None])
        & (boxes[:, 1][:, None] <= y)
        & (y <= boxes[:, 3][:, None])
    )


def signed_ring_area(ring):
    """Shoelace area of a closed ring; positive for counter-clockwise."""
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1]))


def hull_points(points):
    """Convex hull vertices in counter-clockwise order without repetition,
    starting from the lexicographically smallest one.

    Collinear points on the hull boundary are dropped. Fewer than three
    distinct input points are returned sorted and deduplicated; collinear
    input gives its two extreme points.
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts
    try:
        hull = pts[ConvexHull(pts).vertices]
    except QhullError:
        return pts[[0, -1]]
    start = np.lexsort((hull[:, 1], hull[:, 0]))[0]
    return np.roll(hull, -start, axis=0)
