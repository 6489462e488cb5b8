"""GeoJSON reader and writer.

Only two-dimensional Simple-Features geometries are represented; further
coordinate dimensions are dropped and open polygon rings are closed, both
with a warning recorded on the returned :class:`FeatureList`.
"""
import json
import logging

from mppencode.exceptions import (
    InvalidGeometry,
    ParseError,
    UnsupportedGeometryType,
)
from mppencode.geometry import DEPTH, KINDS, MULTIPOLYGON, POLYGON, Geometry

NON_FINITE = ("NaN", "Infinity", "-Infinity")


class FeatureList(list):
    """List of ``(Geometry, properties)`` pairs plus the repairs made while
    reading them."""

    def __init__(self, items=(), warnings=()):
        super().__init__(items)
        self.warnings = list(warnings)


class _Reader:
    def __init__(self):
        self.warnings = []

    def warn(self, index, message):
        text = f"feature {index}: {message}"
        logging.warning("GeoJSON repair: %s", text)
        self.warnings.append(text)

    def position(self, data, index, dropped):
        if not isinstance(data, list) or len(data) < 2:
            raise InvalidGeometry(
                f"position {data!r} needs at least two numbers",
                reason="dimension",
                feature_index=index,
            )
        for value in data:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidGeometry(
                    f"position {data!r} holds a non-number",
                    reason="malformed",
                    feature_index=index,
                )
        if len(data) > 2:
            dropped.append(len(data) - 2)
        try:
            return (float(data[0]), float(data[1]))
        except OverflowError:
            raise InvalidGeometry(
                "position holds a number too large for a float",
                reason="non-finite",
                feature_index=index,
            ) from None

    def nested(self, data, depth, index, dropped):
        if depth == 1:
            return self.position(data, index, dropped)
        if not isinstance(data, list):
            raise InvalidGeometry(
                "coordinates are not nested as the geometry type requires",
                reason="malformed",
                feature_index=index,
            )
        return tuple(self.nested(item, depth - 1, index, dropped) for item in data)

    def close_rings(self, polygon, index):
        rings = []
        for ring in polygon:
            if len(ring) >= 3 and ring[0] != ring[-1]:
                self.warn(index, "closed an open polygon ring")
                ring = ring + (ring[0],)
            rings.append(ring)
        return tuple(rings)

    def geometry(self, obj, index):
        if not isinstance(obj, dict):
            raise InvalidGeometry(
                "feature has no geometry object", reason="missing", feature_index=index
            )
        kind = obj.get("type")
        if kind == "GeometryCollection":
            raise UnsupportedGeometryType(
                f"feature {index}: unsupported geometry type GeometryCollection."
            )
        if kind not in KINDS:
            raise UnsupportedGeometryType(
                f"feature {index}: unsupported geometry type {kind!r}."
            )

        dropped = []
        coords = self.nested(obj.get("coordinates"), DEPTH[kind], index, dropped)
        if dropped:
            self.warn(index, f"dropped extra dimensions from {len(dropped)} positions")
        if kind == POLYGON:
            coords = self.close_rings(coords, index)
        elif kind == MULTIPOLYGON:
            coords = tuple(self.close_rings(p, index) for p in coords)

        try:
            return Geometry(kind, coords)
        except InvalidGeometry as e:
            raise InvalidGeometry(
                str(e), reason=e.reason, feature_index=index
            ) from None

    def feature(self, obj, index):
        if not isinstance(obj, dict) or obj.get("type") != "Feature":
            raise ParseError(0, f"feature {index} is not a Feature object")
        properties = obj.get("properties") or {}
        if not isinstance(properties, dict):
            raise ParseError(0, f"feature {index} has non-object properties")
        return self.geometry(obj.get("geometry"), index), _stringify(properties)


def _stringify(properties):
    return {
        str(key): value
        if isinstance(value, str)
        else json.dumps(value, sort_keys=True)
        for key, value in properties.items()
    }


def _reject_constant(name):
    raise ValueError(name)


def parse_geojson(text):
    """Reads a Feature, FeatureCollection or bare geometry object.

    Property values are kept as strings; non-string values are stored as
    their JSON text.

    :param text: GeoJSON document.
    :type text: ``str`` or ``bytes``
    :returns: ``(Geometry, properties)`` pairs in document order, with the
              repairs made listed in ``warnings``.
    :rtype: :class:`FeatureList`
    :raises ParseError: If the text is not a GeoJSON document.
    :raises InvalidGeometry: If a geometry is invalid; ``feature_index``
                             names the feature.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(e.start, "invalid UTF-8") from None
    try:
        document = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        raise ParseError(offset, e.msg) from None
    except ValueError as e:
        if str(e) in NON_FINITE:
            offset = len(text[: max(text.find(str(e)), 0)].encode("utf-8"))
            raise ParseError(offset, f"non-finite number {e}") from None
        raise ParseError(0, str(e)) from None
    except RecursionError:
        raise ParseError(0, "document nested too deeply") from None

    if not isinstance(document, dict):
        raise ParseError(0, "GeoJSON text must hold an object", expected="object")

    reader = _Reader()
    kind = document.get("type")
    if kind == "FeatureCollection":
        features = document.get("features")
        if not isinstance(features, list):
            raise ParseError(0, "FeatureCollection without a features array")
        items = [reader.feature(f, i) for i, f in enumerate(features)]
    elif kind == "Feature":
        items = [reader.feature(document, 0)]
    elif kind in KINDS or kind == "GeometryCollection":
        items = [(reader.geometry(document, 0), {})]
    else:
        raise ParseError(0, f"unknown GeoJSON type {kind!r}", expected="GeoJSON type")

    return FeatureList(items, reader.warnings)


def geometry_to_dict(g):
    return {"type": g.kind, "coordinates": g.coords}


def write_geojson(items):
    """Serializes ``(Geometry, properties)`` pairs (or bare geometries) as a
    FeatureCollection. Output is deterministic: keys are sorted and
    coordinates are written at full precision.

    :rtype: ``str``
    """
    features = []
    for item in items:
        g, properties = item if isinstance(item, tuple) else (item, {})
        features.append(
            {
                "type": "Feature",
                "properties": dict(properties),
                "geometry": geometry_to_dict(g),
            }
        )
    document = {"type": "FeatureCollection", "features": features}
    return json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n"
