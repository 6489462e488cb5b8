import math

import numpy as np

from mppencode.exceptions import DomainError
from mppencode.geometry import AffineTransform
from mppencode.measures import centroid

# Relative room left between a normalized shape and the frame edges, so
# that rounding in the final translation cannot push a vertex outside.
FIT_SHRINK = 1 - 4e-9
FRAME_MARGIN = 1e-9


def transform(g, t):
    """Applies ``t`` to ``g``: scale and rotation about the centroid of
    ``g``, then translation.

    :type g: :class:`~mppencode.geometry.Geometry`
    :type t: :class:`~mppencode.geometry.AffineTransform`
    :rtype: :class:`~mppencode.geometry.Geometry`
    """
    dx, dy = t.translation
    if t.rotation == 0 and t.scale == 1:
        return g.map_points(lambda pts: pts + (dx, dy))

    cx, cy = centroid(g)
    cos_t = math.cos(t.rotation) * t.scale
    sin_t = math.sin(t.rotation) * t.scale

    def apply(pts):
        x = pts[:, 0] - cx
        y = pts[:, 1] - cy
        return np.column_stack(
            (cx + cos_t * x - sin_t * y + dx, cy + sin_t * x + cos_t * y + dy)
        )

    return g.map_points(apply)


def _extent(bounds):
    min_x, min_y, max_x, max_y = bounds
    return max_x - min_x, max_y - min_y


def normalize_to_frame(g, frame, rng, min_extent=None, max_extent=None):
    """Randomly rotates, rescales and places ``g`` inside ``frame``.

    The rotation is uniform in ``[0, 2*pi)``. The larger side of the rotated
    bounding box is drawn log-uniformly between ``min_extent`` (default: a
    fifth of the shorter frame side) and the largest extent that still fits
    the frame. The shape is then translated uniformly so that its bounding
    box stays inside ``frame``. Point geometries are placed uniformly.

    :param g: Geometry to normalize.
    :param frame: Target frame.
    :type frame: :class:`~mppencode.geometry.Frame`
    :param rng: ``numpy.random.Generator`` or a seed for one.
    :param min_extent: Smallest allowed bounding box side after scaling.
    :param max_extent: Optional cap on the bounding box side after scaling.
    :rtype: :class:`~mppencode.geometry.Geometry`
    :raises DomainError: If the shape cannot fit the frame at ``min_extent``.
    """
    rng = np.random.default_rng(rng)
    fw, fh = frame.width, frame.height

    rotation = rng.uniform(0.0, 2 * math.pi)
    rotated = transform(g, AffineTransform(rotation=rotation))
    w, h = _extent(rotated.bounds())
    extent = max(w, h)

    if extent == 0:
        x = rng.uniform(frame.min_x, frame.max_x)
        y = rng.uniform(frame.min_y, frame.max_y)
        cx, cy = rotated.vertices()[0]
        return transform(rotated, AffineTransform(translation=(x - cx, y - cy)))

    fit = min(fw / w if w > 0 else math.inf, fh / h if h > 0 else math.inf)
    fitting = extent * fit * FIT_SHRINK
    max_extent = fitting if max_extent is None else min(max_extent, fitting)
    if min_extent is None:
        min_extent = min(0.2 * min(fw, fh), max_extent)
    if min_extent > max_extent:
        raise DomainError(
            f"Shape cannot fit the frame: minimum extent {min_extent} exceeds "
            f"the largest fitting extent {max_extent}."
        )

    target = math.exp(rng.uniform(math.log(min_extent), math.log(max_extent)))
    scaled = transform(rotated, AffineTransform(scale=target / extent))

    min_x, min_y, max_x, max_y = scaled.bounds()
    mx, my = FRAME_MARGIN * fw, FRAME_MARGIN * fh
    slack_x = max(fw - (max_x - min_x) - 2 * mx, 0.0)
    slack_y = max(fh - (max_y - min_y) - 2 * my, 0.0)
    dx = frame.min_x + mx + rng.uniform(0.0, slack_x) - min_x
    dy = frame.min_y + my + rng.uniform(0.0, slack_y) - min_y
    return transform(scaled, AffineTransform(translation=(dx, dy)))
