"""MPP and DIV encodings of geometries over regular grids.

An MPP (multi-point proximity) encoding holds ``exp(-d_i / s)`` for the
minimum distance ``d_i`` from the geometry to each reference point of a
:class:`~mppencode.grid.ReferenceGrid`. A DIV (discrete indicator vector)
encoding marks the closed tiles of a :class:`~mppencode.grid.TileGrid` that
the geometry touches.
"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy import sparse

from mppencode.exceptions import (
    DomainError,
    GridMismatch,
    InconsistentEncoding,
    InvalidGridConfiguration,
    UnderdeterminedDecoding,
)
from mppencode.geometry import LINESTRING, POINT, Geometry, Point2
from mppencode.grid import make_grids
from mppencode.measures import distances, points_along
from mppencode.planar import crossing_parity, points_in_boxes, segments_hit_boxes
from mppencode.utils import unique_rows

MPP = "mpp"
DIV = "div"
METHODS = (MPP, DIV)

DECODE_TOLERANCE = 1e-6

# Smallest positive value an MPP element may take; far reference points
# underflow to this instead of 0.
MPP_FLOOR = np.finfo(float).tiny


class MppConfig:
    """A reference grid together with the kernel scale ``s``.

    :param grid: The reference points.
    :type grid: :class:`~mppencode.grid.ReferenceGrid`
    :param s: Kernel length scale; defaults to the grid spacing.
    """

    __slots__ = ("grid", "s")

    def __init__(self, grid, s=None):
        s = grid.spacing if s is None else float(s)
        if not (math.isfinite(s) and s > 0):
            raise InvalidGridConfiguration(f"Scale s must be positive, got {s!r}.")
        self.grid = grid
        self.s = s

    def __repr__(self):
        return f"MppConfig(grid={self.grid!r}, s={self.s!r})"


def _check_grid(a, b):
    if a.grid_id != b.grid_id:
        raise GridMismatch(
            f"Encodings come from different grids: {a.grid_id} and {b.grid_id}."
        )


class DenseEncoding:
    """Fixed-length encoding vector tagged with the grid that produced it."""

    __slots__ = ("values", "grid_id")

    def __init__(self, values, grid_id):
        values = np.array(values, dtype=float)
        values.setflags(write=False)
        self.values = values
        self.grid_id = grid_id

    def __len__(self):
        return len(self.values)

    def __sub__(self, other):
        _check_grid(self, other)
        return self.values - other.values

    def distance(self, other):
        """Euclidean distance to another encoding of the same grid."""
        return float(np.linalg.norm(self - other))

    def to_dict(self):
        return {"grid_id": self.grid_id, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d["values"], d["grid_id"])

    def __eq__(self, other):
        return (
            isinstance(other, DenseEncoding)
            and self.grid_id == other.grid_id
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return (
            f"DenseEncoding(values={self.values.tolist()!r}, grid_id={self.grid_id!r})"
        )


class SparseEncoding:
    """Non-zero entries of an encoding of length ``length``."""

    __slots__ = ("indices", "values", "length", "grid_id")

    def __init__(self, indices, values, length, grid_id=None):
        indices = np.array(indices, dtype=np.int64).reshape(-1)
        values = np.array(values, dtype=float).reshape(-1)
        if len(indices) != len(values):
            raise ValueError("Sparse encoding needs one value per index.")
        if len(indices) and (
            np.any(np.diff(indices) <= 0) or indices[0] < 0 or indices[-1] >= length
        ):
            raise ValueError(
                f"Sparse indices must be strictly increasing and within [0, {length})."
            )
        if np.any(values == 0):
            raise ValueError("Sparse encodings store non-zero values only.")
        indices.setflags(write=False)
        values.setflags(write=False)
        self.indices = indices
        self.values = values
        self.length = int(length)
        self.grid_id = grid_id

    def __len__(self):
        return self.length

    def to_dict(self):
        return {
            "grid_id": self.grid_id,
            "length": self.length,
            "indices": self.indices.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["indices"], d["values"], d["length"], d.get("grid_id"))

    def __eq__(self, other):
        return (
            isinstance(other, SparseEncoding)
            and self.length == other.length
            and self.grid_id == other.grid_id
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return (
            f"SparseEncoding(indices={self.indices.tolist()!r}, "
            f"values={self.values.tolist()!r}, length={self.length!r}, "
            f"grid_id={self.grid_id!r})"
        )


def mpp_encode(g, cfg):
    """MPP encoding of ``g``: element ``i`` is ``exp(-d_i / s)`` where
    ``d_i`` is the minimum distance from ``g`` to reference point ``i``.

    :type g: :class:`~mppencode.geometry.Geometry`
    :type cfg: :class:`MppConfig`
    :rtype: :class:`DenseEncoding` with values in ``(0, 1]``
    """
    d = distances(g, cfg.grid.points)
    values = np.maximum(np.exp(-d / cfg.s), MPP_FLOOR)
    return DenseEncoding(values, cfg.grid.grid_id)


def _tiles_hit(part, tiles):
    boxes = tiles.boxes
    if part.kind == POINT:
        return points_in_boxes(part.vertices(), boxes).any(axis=1)
    starts, ends = part.segments()
    hit = segments_hit_boxes(starts, ends, boxes).any(axis=1)
    if part.kind == LINESTRING:
        return hit
    # A tile no ring touches lies wholly inside or wholly outside.
    return hit | crossing_parity(tiles.centroids, starts, ends)


def div_encode(g, tiles):
    """DIV encoding of ``g``: element ``i`` is 1 when ``g`` intersects the
    closed tile ``i``, 0 otherwise.

    :type g: :class:`~mppencode.geometry.Geometry`
    :type tiles: :class:`~mppencode.grid.TileGrid`
    :rtype: :class:`DenseEncoding` with values in ``{0, 1}``
    """
    hit = np.zeros(tiles.size, dtype=bool)
    for part in g.parts():
        hit |= _tiles_hit(part, tiles)
    return DenseEncoding(hit.astype(float), tiles.grid_id)


def sparsify(e, threshold=0.0):
    """Drops the elements of ``e`` below ``threshold`` (and all zeros).

    :type e: :class:`DenseEncoding`
    :param threshold: Value in ``[0, 1)``.
    :rtype: :class:`SparseEncoding`
    """
    if not 0 <= threshold < 1:
        raise DomainError(f"Sparsity threshold must be in [0, 1), got {threshold!r}.")
    keep = np.flatnonzero((e.values >= threshold) & (e.values != 0))
    return SparseEncoding(keep, e.values[keep], len(e), e.grid_id)


def densify(s):
    """Dense encoding with the retained entries of ``s`` and zeros
    elsewhere."""
    values = np.zeros(s.length)
    values[s.indices] = s.values
    return DenseEncoding(values, s.grid_id)


def stack_sparse(encodings):
    """Stacks sparse encodings of one grid into a ``csr_matrix`` with one row
    per encoding.

    :raises GridMismatch: If the encodings differ in grid or length.
    """
    encodings = list(encodings)
    if not encodings:
        return sparse.csr_matrix((0, 0))
    first = encodings[0]
    for e in encodings[1:]:
        if e.grid_id != first.grid_id or e.length != first.length:
            raise GridMismatch("Cannot stack sparse encodings of different grids.")
    indptr = np.cumsum([0] + [len(e.indices) for e in encodings])
    indices = np.concatenate([e.indices for e in encodings])
    data = np.concatenate([e.values for e in encodings])
    return sparse.csr_matrix(
        (data, indices, indptr), shape=(len(encodings), first.length)
    )


def sparse_distance(a, b):
    """Euclidean distance between two sparse encodings, treating dropped
    entries as zero."""
    m = stack_sparse([a, b])
    diff = m[0] - m[1]
    return float(np.sqrt(diff.multiply(diff).sum()))


def exclusion_radius(v, s):
    """Radius of the disk about a reference point that contains no part of
    the geometry, from the point's MPP element ``v``: ``-s * ln(v)``.

    :raises DomainError: If ``v`` is not in ``(0, 1]``.
    """
    if not 0 < v <= 1:
        raise DomainError(f"Encoding value must be in (0, 1], got {v!r}.")
    if v == 1:
        return 0.0
    return -s * math.log(v)


def exclusion_zones(e, cfg):
    """``(reference point, radius)`` exclusion disks for every element of an
    MPP encoding."""
    _check_grid(e, cfg.grid)
    return [
        (cfg.grid.point(i), exclusion_radius(float(v), cfg.s))
        for i, v in enumerate(e.values)
    ]


def decode_point_residual(e, cfg):
    """Multilaterates the point whose MPP encoding is ``e``.

    The circle equation of the reference point with the smallest exclusion
    radius is subtracted from the others, the linear system is solved by
    least squares, and one Gauss-Newton step refines the estimate.

    :returns: The point and the largest absolute circle residual.
    :rtype: ``tuple`` of :class:`~mppencode.geometry.Point2`, ``float``
    :raises UnderdeterminedDecoding: If the reference points are collinear
                                     or fewer than three.
    """
    _check_grid(e, cfg.grid)
    refs = cfg.grid.points
    if len(refs) < 3:
        raise UnderdeterminedDecoding(
            "Point decoding needs at least 3 reference points."
        )
    radii = np.array([exclusion_radius(float(v), cfg.s) for v in e.values])

    k = int(np.argmin(radii))
    origin = refs[k]
    others = np.delete(np.arange(len(refs)), k)
    q = refs[others] - origin
    a = 2.0 * q
    b = np.einsum("ij,ij->i", q, q) - radii[others] ** 2 + radii[k] ** 2
    if np.linalg.matrix_rank(a) < 2:
        raise UnderdeterminedDecoding("Reference points are collinear.")
    x = np.linalg.lstsq(a, b, rcond=None)[0] + origin

    offsets = x - refs
    ranges = np.hypot(offsets[:, 0], offsets[:, 1])
    usable = ranges > 1e-12 * cfg.grid.spacing
    if np.count_nonzero(usable) >= 2:
        jac = offsets[usable] / ranges[usable, None]
        step = np.linalg.lstsq(jac, radii[usable] - ranges[usable], rcond=None)[0]
        x = x + step
        offsets = x - refs
        ranges = np.hypot(offsets[:, 0], offsets[:, 1])

    residual = float(np.max(np.abs(ranges - radii)))
    logging.debug("Decoded point %s with residual %g", x, residual)
    return Point2(float(x[0]), float(x[1])), residual


def decode_point(e, cfg, tolerance=DECODE_TOLERANCE):
    """Recovers the point geometry whose MPP encoding is ``e``.

    :type e: :class:`DenseEncoding`
    :type cfg: :class:`MppConfig`
    :rtype: :class:`~mppencode.geometry.Point2`
    :raises InconsistentEncoding: If no point fits the encoding within
                                  ``tolerance``.
    """
    point, residual = decode_point_residual(e, cfg)
    if residual > tolerance:
        raise InconsistentEncoding(
            f"Encoding is not that of a single point (residual {residual:.3g}).",
            residual=residual,
        )
    return point


class MppEncoder:
    """The MPP encoder for a frame and resolution."""

    method = MPP

    def __init__(self, frame, resolution, scale=None):
        self.grid, self.tiles = make_grids(frame, resolution)
        self.config = MppConfig(self.grid, scale)

    @property
    def size(self):
        return self.grid.size

    @property
    def grid_id(self):
        return self.grid.grid_id

    def encode(self, g):
        return mpp_encode(g, self.config)

    def encode_many(self, geometries):
        """Encodings of ``geometries`` as rows of an ``(n, N)`` array."""
        rows = [self.encode(g).values for g in geometries]
        return np.array(rows).reshape(len(rows), self.size)

    def encode_pair(self, a, b):
        """Concatenated encodings of ``a`` and ``b``, length ``2N``."""
        return np.concatenate([self.encode(a).values, self.encode(b).values])

    def __repr__(self):
        return f"{type(self).__name__}(grid={self.grid!r}, s={self.config.s!r})"


class DivEncoder(MppEncoder):
    """The DIV encoder for a frame and resolution."""

    method = DIV

    def encode(self, g):
        return div_encode(g, self.tiles)

    def __repr__(self):
        return f"{type(self).__name__}(tiles={self.tiles!r})"


def make_encoder(method, frame, resolution, scale=None):
    """Encoder for ``method`` (``"mpp"`` or ``"div"``); ``scale`` only
    applies to MPP."""
    method = method.lower()
    if method == MPP:
        return MppEncoder(frame, resolution, scale)
    if method == DIV:
        return DivEncoder(frame, resolution)
    raise ValueError(f"Unknown encoding method {method!r}; expected one of {METHODS}.")


TrajectoryEncodings = namedtuple(
    "TrajectoryEncodings",
    (
        "points",
        "mpp",
        "div",
        "mpp_unique",
        "div_unique",
        "tile_sets_unique",
        "max_lipschitz_excess",
    ),
)


def trajectory_encodings(path, steps, mpp_encoder, div_encoder):
    """Encodes point geometries sampled along ``path`` and summarizes how the
    encodings change from step to step.

    ``max_lipschitz_excess`` is the largest amount by which an MPP element
    changes more than ``delta / s`` between consecutive samples ``delta``
    apart; it is never positive beyond rounding.

    :param path: LineString to sample.
    :param steps: Number of equally spaced samples, endpoints included.
    :rtype: :class:`TrajectoryEncodings`
    """
    points = points_along(path, steps)
    geometries = [Geometry.point(x, y) for x, y in points]
    mpp = mpp_encoder.encode_many(geometries)
    div = div_encoder.encode_many(geometries)

    tile_sets = {
        frozenset(np.flatnonzero(column).tolist())
        for column in points_in_boxes(points, div_encoder.tiles.boxes).T
    }

    delta = np.hypot(*np.diff(points, axis=0).T)
    change = np.abs(np.diff(mpp, axis=0)).max(axis=1)
    excess = float(np.max(change - delta / mpp_encoder.config.s)) if steps > 1 else 0.0

    return TrajectoryEncodings(
        points=points,
        mpp=mpp,
        div=div,
        mpp_unique=unique_rows(mpp),
        div_unique=unique_rows(div),
        tile_sets_unique=len(tile_sets),
        max_lipschitz_excess=excess,
    )
