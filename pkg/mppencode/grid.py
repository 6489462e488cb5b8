import math

import numpy as np

from mppencode.exceptions import InvalidGridConfiguration
from mppencode.geometry import Frame, Point2

DIVISION_TOLERANCE = 1e-9


def _cell_count(extent, resolution, axis):
    count_f = extent / resolution
    count = round(count_f)
    if count < 1 or abs(count_f - count) > DIVISION_TOLERANCE:
        raise InvalidGridConfiguration(
            f"Resolution {resolution!r} does not divide the frame {axis} "
            f"{extent!r}."
        )
    return count


def _edges(lo, hi, count, resolution):
    edges = lo + np.arange(count + 1) * resolution
    edges[-1] = hi
    return edges


def grid_id_for(frame, nx, ny):
    return (
        f"grid({frame.min_x!r},{frame.min_y!r},{frame.max_x!r},{frame.max_y!r};"
        f"{nx}x{ny})"
    )


class _Grid:
    __slots__ = ("frame", "spacing", "nx", "ny", "_x_edges", "_y_edges")

    def __init__(self, frame, spacing):
        spacing = float(spacing)
        if not (math.isfinite(spacing) and spacing > 0):
            raise InvalidGridConfiguration(
                f"Grid spacing must be positive and finite, got {spacing!r}."
            )
        self.frame = frame
        self.spacing = spacing
        self.nx = _cell_count(frame.width, spacing, "width")
        self.ny = _cell_count(frame.height, spacing, "height")
        self._x_edges = _edges(frame.min_x, frame.max_x, self.nx, spacing)
        self._y_edges = _edges(frame.min_y, frame.max_y, self.ny, spacing)

    @property
    def size(self):
        return self.nx * self.ny

    def __len__(self):
        return self.size

    @property
    def grid_id(self):
        return grid_id_for(self.frame, self.nx, self.ny)

    def to_dict(self):
        return {
            "frame": self.frame.to_dict(),
            "resolution": self.spacing,
            "nx": self.nx,
            "ny": self.ny,
            "grid_id": self.grid_id,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(Frame.from_dict(d["frame"]), d["resolution"])

    def __eq__(self, other):
        return type(self) is type(other) and self.grid_id == other.grid_id

    def __hash__(self):
        return hash((type(self).__name__, self.grid_id))

    def __repr__(self):
        return f"{type(self).__name__}(frame={self.frame!r}, spacing={self.spacing!r})"


class ReferenceGrid(_Grid):
    """Reference points at the centroids of a regular tiling of a frame,
    ordered row by row from the lowest ``y`` and, within a row, from the
    lowest ``x``."""

    __slots__ = ("points",)

    def __init__(self, frame, spacing):
        super().__init__(frame, spacing)
        cx = 0.5 * (self._x_edges[:-1] + self._x_edges[1:])
        cy = 0.5 * (self._y_edges[:-1] + self._y_edges[1:])
        xx, yy = np.meshgrid(cx, cy)
        self.points = np.column_stack((xx.ravel(), yy.ravel()))
        self.points.setflags(write=False)

    def point(self, index):
        return Point2(*(float(v) for v in self.points[index]))


class TileGrid(_Grid):
    """Closed axis-aligned tiles covering a frame, in reference-grid order.

    ``boxes`` rows are ``min_x, min_y, max_x, max_y``; neighbouring tiles
    share their edge coordinates exactly.
    """

    __slots__ = ("boxes",)

    def __init__(self, frame, spacing):
        super().__init__(frame, spacing)
        x0, y0 = np.meshgrid(self._x_edges[:-1], self._y_edges[:-1])
        x1, y1 = np.meshgrid(self._x_edges[1:], self._y_edges[1:])
        self.boxes = np.column_stack((x0.ravel(), y0.ravel(), x1.ravel(), y1.ravel()))
        self.boxes.setflags(write=False)

    @property
    def centroids(self):
        return np.column_stack(
            (
                0.5 * (self.boxes[:, 0] + self.boxes[:, 2]),
                0.5 * (self.boxes[:, 1] + self.boxes[:, 3]),
            )
        )


def make_grids(frame, resolution):
    """Reference and tile grids of spacing ``resolution`` over ``frame``.

    :type frame: :class:`~mppencode.geometry.Frame`
    :param resolution: Grid spacing; must divide both frame sides.
    :rtype: ``tuple`` of :class:`ReferenceGrid`, :class:`TileGrid`
    :raises InvalidGridConfiguration: If ``resolution`` does not divide the
                                      frame.
    """
    return ReferenceGrid(frame, resolution), TileGrid(frame, resolution)
