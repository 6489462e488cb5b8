"""Well-Known Text reader and writer for the six supported geometry kinds."""
import math
import re

from mppencode.exceptions import ParseError, UnsupportedGeometryType
from mppencode.format import format_coordinate
from mppencode.geometry import (
    LINESTRING,
    MULTILINESTRING,
    MULTIPOINT,
    MULTIPOLYGON,
    POINT,
    POLYGON,
    Geometry,
)

KEYWORDS = {
    kind.upper(): kind
    for kind in (POINT, LINESTRING, POLYGON, MULTIPOINT, MULTILINESTRING, MULTIPOLYGON)
}
UNSUPPORTED = {
    "GEOMETRYCOLLECTION",
    "CIRCULARSTRING",
    "COMPOUNDCURVE",
    "CURVEPOLYGON",
    "TRIANGLE",
    "TIN",
    "POLYHEDRALSURFACE",
}

TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<word>[A-Za-z]+)"
    r"|(?P<punct>[(),])"
    r"|(?P<bad>\S)"
    r")"
)


def _unexpected(value, offset, expected):
    found = value or "end of input"
    return ParseError(offset, f"unexpected {found!r}", expected=expected)


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        match = TOKEN.match(text, pos)
        if match is None:
            # Only whitespace remains.
            break
        kind = match.lastgroup
        if kind == "bad":
            raise ParseError(
                match.start(kind), f"unexpected character {match.group(kind)!r}"
            )
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def take(self):
        token = self.tokens[self.index]
        if token[0] != "end":
            self.index += 1
        return token

    def expect(self, symbol):
        kind, value, offset = self.take()
        if value != symbol:
            raise _unexpected(value, offset, f"'{symbol}'")

    def accept(self, symbol):
        if self.peek()[1] == symbol:
            self.index += 1
            return True
        return False

    def number(self):
        kind, value, offset = self.take()
        if kind != "number":
            raise _unexpected(value, offset, "number")
        x = float(value)
        if not math.isfinite(x):
            raise ParseError(offset, f"coordinate {value} is not finite")
        return x

    def coordinate(self):
        return (self.number(), self.number())

    def sequence(self, item):
        self.expect("(")
        items = [item()]
        while self.accept(","):
            items.append(item())
        self.expect(")")
        return tuple(items)

    def point_body(self):
        self.expect("(")
        coord = self.coordinate()
        self.expect(")")
        return coord

    def linestring_body(self):
        return self.sequence(self.coordinate)

    def polygon_body(self):
        return self.sequence(self.linestring_body)

    def multipoint_member(self):
        if self.peek()[1] == "(":
            return self.point_body()
        return self.coordinate()

    def geometry(self):
        kind, value, offset = self.take()
        if kind != "word":
            raise _unexpected(value, offset, "geometry type")
        keyword = value.upper()
        if keyword in UNSUPPORTED:
            raise UnsupportedGeometryType(f"Unsupported geometry type {keyword}.")
        if keyword not in KEYWORDS:
            raise ParseError(
                offset, f"unknown geometry type {value!r}", expected="geometry type"
            )

        kind2, value2, offset2 = self.peek()
        if kind2 == "word":
            modifier = value2.upper()
            if modifier == "EMPTY":
                raise ParseError(offset2, "EMPTY geometries are not supported")
            if modifier in ("Z", "M", "ZM"):
                raise ParseError(offset2, "only 2-D coordinates are supported")
            raise _unexpected(value2, offset2, "'('")

        geom_kind = KEYWORDS[keyword]
        body = {
            POINT: self.point_body,
            LINESTRING: self.linestring_body,
            POLYGON: self.polygon_body,
            MULTIPOINT: lambda: self.sequence(self.multipoint_member),
            MULTILINESTRING: lambda: self.sequence(self.linestring_body),
            MULTIPOLYGON: lambda: self.sequence(self.polygon_body),
        }[geom_kind]
        coords = body()

        kind3, value3, offset3 = self.peek()
        if kind3 != "end":
            raise _unexpected(value3, offset3, "end of input")
        return geom_kind, coords


def _ascii(text):
    if isinstance(text, (bytes, bytearray)):
        try:
            return bytes(text).decode("ascii")
        except UnicodeDecodeError as e:
            raise ParseError(e.start, "non-ASCII byte") from None
    for index, char in enumerate(text):
        if ord(char) > 127:
            offset = len(text[:index].encode("utf-8"))
            raise ParseError(offset, "non-ASCII character")
    return text


def parse_wkt(text):
    """Parses a WKT geometry.

    Keywords are case-insensitive. ``EMPTY`` geometries, Z/M coordinates and
    non-finite numbers are rejected.

    :param text: WKT text.
    :type text: ``str`` or ``bytes``
    :rtype: :class:`~mppencode.geometry.Geometry`
    :raises ParseError: On malformed input, with the byte offset of the
                        problem.
    :raises UnsupportedGeometryType: For GEOMETRYCOLLECTION and curve types.
    :raises InvalidGeometry: If the coordinates do not form a valid geometry.
    """
    kind, coords = _Parser(_ascii(text)).geometry()
    return Geometry(kind, coords)


def _coords_text(coords):
    return ", ".join(
        f"{format_coordinate(x)} {format_coordinate(y)}" for x, y in coords
    )


def _rings_text(rings):
    return ", ".join(f"({_coords_text(ring)})" for ring in rings)


def write_wkt(g):
    """WKT text for ``g``; coordinates use the shortest exact representation.

    :rtype: ``str``
    """
    keyword = g.kind.upper()
    if g.kind == POINT:
        body = _coords_text([g.coords])
    elif g.kind == LINESTRING:
        body = _coords_text(g.coords)
    elif g.kind == POLYGON:
        body = _rings_text(g.coords)
    elif g.kind == MULTIPOINT:
        body = ", ".join(f"({_coords_text([p])})" for p in g.coords)
    elif g.kind == MULTILINESTRING:
        body = _rings_text(g.coords)
    else:
        body = ", ".join(f"({_rings_text(polygon)})" for polygon in g.coords)
    return f"{keyword} ({body})"
