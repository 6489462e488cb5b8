import math
from collections import namedtuple

import numpy as np

from mppencode.exceptions import (
    DomainError,
    InvalidGeometry,
    InvalidGridConfiguration,
    UnsupportedGeometryType,
)
from mppencode.planar import (
    crossing_parity,
    point_segment_distances,
    segments_cross_properly,
    segments_intersect,
    signed_ring_area,
)

POINT = "Point"
LINESTRING = "LineString"
POLYGON = "Polygon"
MULTIPOINT = "MultiPoint"
MULTILINESTRING = "MultiLineString"
MULTIPOLYGON = "MultiPolygon"

KINDS = (POINT, LINESTRING, POLYGON, MULTIPOINT, MULTILINESTRING, MULTIPOLYGON)
PRIMITIVE_OF = {
    POINT: POINT,
    LINESTRING: LINESTRING,
    POLYGON: POLYGON,
    MULTIPOINT: POINT,
    MULTILINESTRING: LINESTRING,
    MULTIPOLYGON: POLYGON,
}
MULTI_OF = {POINT: MULTIPOINT, LINESTRING: MULTILINESTRING, POLYGON: MULTIPOLYGON}

# Nesting depth of the coordinate structure of each kind.
DEPTH = {
    POINT: 1,
    LINESTRING: 2,
    POLYGON: 3,
    MULTIPOINT: 2,
    MULTILINESTRING: 3,
    MULTIPOLYGON: 4,
}

Point2 = namedtuple("Point2", ("x", "y"))


class Frame:
    """Rectangular region of interest."""

    __slots__ = ("min_x", "min_y", "max_x", "max_y")

    def __init__(self, min_x, min_y, max_x, max_y):
        values = [float(v) for v in (min_x, min_y, max_x, max_y)]
        if not all(math.isfinite(v) for v in values):
            raise InvalidGridConfiguration("Frame bounds must be finite.")
        if values[2] <= values[0] or values[3] <= values[1]:
            raise InvalidGridConfiguration(
                f"Frame {values} must have max_x > min_x and max_y > min_y."
            )
        self.min_x, self.min_y, self.max_x, self.max_y = values

    @classmethod
    def from_size(cls, width, height):
        return cls(0.0, 0.0, width, height)

    @property
    def width(self):
        return self.max_x - self.min_x

    @property
    def height(self):
        return self.max_y - self.min_y

    @property
    def bounds(self):
        return (self.min_x, self.min_y, self.max_x, self.max_y)

    def contains_bounds(self, bounds):
        min_x, min_y, max_x, max_y = bounds
        return (
            self.min_x <= min_x
            and self.min_y <= min_y
            and max_x <= self.max_x
            and max_y <= self.max_y
        )

    def to_dict(self):
        return {attr: getattr(self, attr) for attr in Frame.__slots__}

    @classmethod
    def from_dict(cls, d):
        return cls(**{attr: d[attr] for attr in Frame.__slots__})

    def __eq__(self, other):
        return isinstance(other, Frame) and self.bounds == other.bounds

    def __hash__(self):
        return hash(self.bounds)

    def __repr__(self):
        return (
            f"Frame(min_x={self.min_x!r}, min_y={self.min_y!r}, "
            f"max_x={self.max_x!r}, max_y={self.max_y!r})"
        )


class AffineTransform:
    """Scale, then rotation about the geometry centroid, then translation.

    :param rotation: Counter-clockwise rotation in radians.
    :param scale: Positive uniform scale factor.
    :param translation: ``(dx, dy)`` in frame units.
    """

    __slots__ = ("rotation", "scale", "translation")

    def __init__(self, rotation=0.0, scale=1.0, translation=(0.0, 0.0)):
        if not scale > 0:
            raise DomainError(f"Scale must be positive, got {scale}.")
        self.rotation = float(rotation)
        self.scale = float(scale)
        self.translation = (float(translation[0]), float(translation[1]))

    def is_identity(self):
        return self.rotation == 0 and self.scale == 1 and self.translation == (0, 0)

    def __repr__(self):
        return (
            f"AffineTransform(rotation={self.rotation!r}, scale={self.scale!r}, "
            f"translation={self.translation!r})"
        )


def _as_coords(data, depth):
    if depth == 1:
        if len(data) != 2:
            raise InvalidGeometry(
                f"Coordinate {data!r} must have exactly two values.",
                reason="dimension",
            )
        try:
            x, y = float(data[0]), float(data[1])
        except OverflowError:
            raise InvalidGeometry(
                "Coordinate is out of the float range.", reason="non-finite"
            ) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InvalidGeometry(
                f"Coordinate ({x}, {y}) is not finite.", reason="non-finite"
            )
        return (x, y)
    return tuple(_as_coords(item, depth - 1) for item in data)


def _flatten(coords, depth):
    if depth == 1:
        return [coords]
    flat = []
    for item in coords:
        flat.extend(_flatten(item, depth - 1))
    return flat


def _rebuild(coords, depth, it):
    if depth == 1:
        return next(it)
    return tuple(_rebuild(item, depth - 1, it) for item in coords)


def _ring_problem(ring):
    """Returns a description of what makes ``ring`` invalid, or ``None``."""
    if len(ring) < 4:
        return "ring has fewer than 4 vertices"
    if ring[0] != ring[-1]:
        return "ring is not closed"

    pts = [ring[0]]
    for p in ring[1:]:
        if p != pts[-1]:
            pts.append(p)
    if len(pts) < 4:
        return "ring has fewer than 3 distinct vertices"

    arr = np.array(pts, dtype=float)
    if signed_ring_area(arr) == 0:
        return "ring has zero area"

    a, b = arr[:-1], arr[1:]
    m = len(a)
    hits = segments_intersect(
        a[:, None, :], b[:, None, :], a[None, :, :], b[None, :, :]
    )
    idx = np.arange(m)
    hits[idx, idx] = False
    nxt = (idx + 1) % m
    hits[idx, nxt] = False
    hits[nxt, idx] = False
    if np.any(hits):
        return "ring is self-intersecting"

    # Adjacent segments that fold back onto each other.
    d = b - a
    d_next = d[nxt]
    turn = d[:, 0] * d_next[:, 1] - d[:, 1] * d_next[:, 0]
    dot = np.einsum("ij,ij->i", d, d_next)
    if np.any((turn == 0) & (dot < 0)):
        return "ring doubles back on itself"
    return None


def _polygon_problem(rings):
    if not rings:
        return "polygon has no rings"
    for index, ring in enumerate(rings):
        problem = _ring_problem(ring)
        if problem:
            return f"{problem} (ring {index})"

    if len(rings) == 1:
        return None

    arrays = [np.array(ring, dtype=float) for ring in rings]
    shell = arrays[0]
    for index, hole in enumerate(arrays[1:], start=1):
        crossings = segments_cross_properly(
            shell[:-1][:, None, :],
            shell[1:][:, None, :],
            hole[:-1][None, :, :],
            hole[1:][None, :, :],
        )
        if np.any(crossings):
            return f"hole {index} crosses the exterior ring"
        inside = crossing_parity(hole[:-1], shell[:-1], shell[1:])
        on_edge = point_segment_distances(hole[:-1], shell[:-1], shell[1:]).min(
            axis=1
        ) == 0
        if not np.all(inside | on_edge):
            return f"hole {index} is not within the exterior ring"
        for other_index, other in enumerate(arrays[1:index], start=1):
            if np.any(
                segments_cross_properly(
                    other[:-1][:, None, :],
                    other[1:][:, None, :],
                    hole[:-1][None, :, :],
                    hole[1:][None, :, :],
                )
            ):
                return f"hole {index} crosses hole {other_index}"
            if _interiors_meet((rings[other_index],), (rings[index],)):
                return f"hole {index} overlaps hole {other_index}"
    return None


def _interiors_meet(first, second):
    # relations builds on this module
    from mppencode.relations import relation

    return relation(
        "PolygonIntersectsPolygon",
        Geometry(POLYGON, first, validate=False),
        Geometry(POLYGON, second, validate=False),
    )


def validate_coords(kind, coords):
    """Raises :class:`~mppencode.exceptions.InvalidGeometry` when ``coords``
    do not describe a valid geometry of ``kind``."""
    if kind == POINT:
        return
    if kind == LINESTRING:
        if len(coords) < 2:
            raise InvalidGeometry(
                "LineString must have at least 2 vertices.", reason="too-short"
            )
        return
    if kind == POLYGON:
        problem = _polygon_problem(coords)
        if problem:
            raise InvalidGeometry(f"Invalid Polygon: {problem}.", reason=problem)
        return
    if not coords:
        raise InvalidGeometry(f"{kind} must contain at least one part.", reason="empty")
    for index, part in enumerate(coords):
        try:
            validate_coords(PRIMITIVE_OF[kind], part)
        except InvalidGeometry as e:
            raise InvalidGeometry(f"{kind} part {index}: {e}", reason=e.reason)
    if kind == MULTIPOLYGON:
        for index in range(1, len(coords)):
            for other in range(index):
                if _interiors_meet(coords[other], coords[index]):
                    raise InvalidGeometry(
                        f"MultiPolygon parts {other} and {index} overlap.",
                        reason="overlapping parts",
                    )


class Geometry:
    """A Simple-Features geometry: one of :data:`KINDS` and its coordinates.

    Coordinates are nested tuples of floats: ``(x, y)`` for a Point, a tuple
    of those for a LineString or MultiPoint, a tuple of rings (exterior
    first) for a Polygon, and a tuple of parts for the multi-part kinds.
    Geometries are immutable and validated on construction unless
    ``validate=False`` is passed by code that preserves validity itself.

    :param kind: One of :data:`KINDS`.
    :type kind: ``str``
    :param coords: Nested coordinate sequences.
    :raises InvalidGeometry: If the coordinates break the kind's invariants.
    :raises UnsupportedGeometryType: If ``kind`` is not supported.
    """

    __slots__ = ("kind", "coords", "_cache")

    def __init__(self, kind, coords, validate=True):
        if kind not in KINDS:
            raise UnsupportedGeometryType(f"Unsupported geometry type {kind!r}.")
        if validate:
            try:
                coords = _as_coords(coords, DEPTH[kind])
            except (TypeError, ValueError) as e:
                if isinstance(e, InvalidGeometry):
                    raise
                raise InvalidGeometry(
                    f"Malformed {kind} coordinates: {e}", reason="malformed"
                ) from None
            validate_coords(kind, coords)
        self.kind = kind
        self.coords = coords
        self._cache = {}

    @classmethod
    def point(cls, x, y):
        return cls(POINT, (x, y))

    @classmethod
    def linestring(cls, coords):
        return cls(LINESTRING, coords)

    @classmethod
    def polygon(cls, exterior, holes=()):
        return cls(POLYGON, (exterior, *holes))

    @classmethod
    def multipoint(cls, coords):
        return cls(MULTIPOINT, coords)

    @classmethod
    def multilinestring(cls, lines):
        return cls(MULTILINESTRING, lines)

    @classmethod
    def multipolygon(cls, polygons):
        return cls(MULTIPOLYGON, polygons)

    @property
    def primitive_kind(self):
        return PRIMITIVE_OF[self.kind]

    @property
    def is_multi(self):
        return self.kind in (MULTIPOINT, MULTILINESTRING, MULTIPOLYGON)

    def parts(self):
        """The primitive geometries composing this one."""
        if "parts" not in self._cache:
            if self.is_multi:
                self._cache["parts"] = tuple(
                    Geometry(self.primitive_kind, part, validate=False)
                    for part in self.coords
                )
            else:
                self._cache["parts"] = (self,)
        return self._cache["parts"]

    def rings(self):
        """Closed rings as ``(k, 2)`` arrays, for polygonal kinds."""
        if "rings" not in self._cache:
            if self.kind == POLYGON:
                rings = [np.array(r, dtype=float) for r in self.coords]
            elif self.kind == MULTIPOLYGON:
                rings = [np.array(r, dtype=float) for p in self.coords for r in p]
            else:
                rings = []
            self._cache["rings"] = rings
        return self._cache["rings"]

    def vertices(self):
        """All vertices as an ``(n, 2)`` array; ring closing duplicates are
        left out."""
        if "vertices" not in self._cache:
            if self.primitive_kind == POLYGON:
                verts = [v for r in self.rings() for v in r[:-1]]
            else:
                verts = _flatten(self.coords, DEPTH[self.kind])
            self._cache["vertices"] = np.array(verts, dtype=float).reshape(-1, 2)
        return self._cache["vertices"]

    def segments(self):
        """``(starts, ends)`` arrays of every linear or ring segment."""
        if "segments" not in self._cache:
            if self.primitive_kind == POLYGON:
                paths = self.rings()
            elif self.primitive_kind == LINESTRING:
                paths = [np.array(part.coords, dtype=float) for part in self.parts()]
            else:
                paths = []
            if paths:
                starts = np.concatenate([p[:-1] for p in paths])
                ends = np.concatenate([p[1:] for p in paths])
            else:
                starts = ends = np.empty((0, 2))
            self._cache["segments"] = (starts, ends)
        return self._cache["segments"]

    def bounds(self):
        verts = self.vertices()
        return (
            float(verts[:, 0].min()),
            float(verts[:, 1].min()),
            float(verts[:, 0].max()),
            float(verts[:, 1].max()),
        )

    def map_points(self, func):
        """New geometry of the same kind with ``func`` applied to an ``(n, 2)``
        array of every coordinate (closing duplicates included). ``func``
        must preserve validity, e.g. a similarity transform."""
        depth = DEPTH[self.kind]
        flat = np.array(_flatten(self.coords, depth), dtype=float).reshape(-1, 2)
        moved = func(flat)
        it = iter(tuple(map(float, p)) for p in moved)
        return Geometry(self.kind, _rebuild(self.coords, depth, it), validate=False)

    def almost_equals(self, other, tolerance=1e-12):
        if self.kind != other.kind:
            return False
        depth = DEPTH[self.kind]
        mine = np.array(_flatten(self.coords, depth), dtype=float)
        theirs = np.array(_flatten(other.coords, depth), dtype=float)
        if mine.shape != theirs.shape:
            return False
        return _same_structure(self.coords, other.coords, depth) and bool(
            np.all(np.abs(mine - theirs) <= tolerance)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Geometry)
            and self.kind == other.kind
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.kind, self.coords))

    def __repr__(self):
        return f"Geometry(kind={self.kind!r}, coords={self.coords!r})"


def _same_structure(a, b, depth):
    if depth == 1:
        return True
    if len(a) != len(b):
        return False
    return all(_same_structure(x, y, depth - 1) for x, y in zip(a, b))
