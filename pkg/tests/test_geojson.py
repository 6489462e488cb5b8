import json

import numpy as np
import pytest

from mppencode.exceptions import (
    InvalidGeometry,
    ParseError,
    UnsupportedGeometryType,
)
from mppencode.geojson import FeatureList, parse_geojson, write_geojson
from mppencode.geometry import LINESTRING, Geometry

from .samples import (
    OPEN_RING_GEOJSON,
    POINT_GEOJSON,
    POINT_Z_GEOJSON,
    SQUARE_WITH_HOLE,
    TWO_FEATURES_GEOJSON,
    UNIT_SQUARE,
)
from .utils import random_linestring, random_polygon


class TestParseGeoJSON:
    def test_bare_geometry(self):
        features = parse_geojson(POINT_GEOJSON)
        assert isinstance(features, FeatureList)
        assert features == [(Geometry.point(1, 2), {})]
        assert features.warnings == []

    def test_feature_collection(self):
        features = parse_geojson(TWO_FEATURES_GEOJSON)
        assert len(features) == 2
        g, properties = features[1]
        assert g.kind == LINESTRING
        assert properties == {"name": "b"}

    def test_properties_become_strings(self):
        _, properties = parse_geojson(TWO_FEATURES_GEOJSON)[0]
        assert properties == {"name": "a", "rank": "1"}

    def test_single_feature(self):
        text = json.dumps(
            {
                "type": "Feature",
                "properties": None,
                "geometry": {"type": "Point", "coordinates": [3, 4]},
            }
        )
        assert parse_geojson(text) == [(Geometry.point(3, 4), {})]

    def test_open_ring_is_closed(self):
        features = parse_geojson(OPEN_RING_GEOJSON)
        g, _ = features[0]
        assert g == Geometry.polygon(UNIT_SQUARE)
        assert len(features.warnings) == 1
        assert "closed" in features.warnings[0]

    def test_extra_dimensions_dropped(self):
        features = parse_geojson(POINT_Z_GEOJSON)
        assert features[0][0] == Geometry.point(1, 2)
        assert len(features.warnings) == 1

    def test_bytes(self):
        assert parse_geojson(POINT_GEOJSON.encode())[0][0] == Geometry.point(1, 2)


class TestParseErrors:
    def test_malformed_json(self):
        with pytest.raises(ParseError) as e:
            parse_geojson("{")
        assert e.value.byte_offset == 1

    def test_non_finite(self):
        with pytest.raises(ParseError, match="non-finite"):
            parse_geojson('{"type":"Point","coordinates":[NaN,1]}')

    def test_not_an_object(self):
        with pytest.raises(ParseError):
            parse_geojson("[1, 2]")

    def test_unknown_type(self):
        with pytest.raises(ParseError):
            parse_geojson('{"type":"Topology"}')

    def test_geometry_collection(self):
        with pytest.raises(UnsupportedGeometryType):
            parse_geojson('{"type":"GeometryCollection","geometries":[]}')

    def test_invalid_feature_is_named(self):
        text = json.dumps(
            {
                "type": "FeatureCollection",
                "features": [
                    {
                        "type": "Feature",
                        "properties": {},
                        "geometry": {"type": "Point", "coordinates": [0, 0]},
                    },
                    {
                        "type": "Feature",
                        "properties": {},
                        "geometry": {"type": "LineString", "coordinates": [[0, 0]]},
                    },
                ],
            }
        )
        with pytest.raises(InvalidGeometry) as e:
            parse_geojson(text)
        assert e.value.feature_index == 1
        assert "feature 1" in str(e.value)

    def test_non_numeric_position(self):
        with pytest.raises(InvalidGeometry):
            parse_geojson('{"type":"Point","coordinates":["1",2]}')

    def test_invalid_utf8(self):
        with pytest.raises(ParseError):
            parse_geojson(b'{"type":"Point","coordinates":[1,2]}\xff')

    def test_huge_integer(self):
        text = '{"type":"Point","coordinates":[1%s,2]}' % ("0" * 400)
        with pytest.raises(InvalidGeometry) as e:
            parse_geojson(text)
        assert e.value.reason == "non-finite"

    def test_float_overflow(self):
        with pytest.raises(InvalidGeometry):
            parse_geojson('{"type":"Point","coordinates":[1e999,2]}')

    def test_fuzz(self):
        rng = np.random.default_rng(17)
        source = write_geojson(
            [
                (Geometry.polygon(SQUARE_WITH_HOLE[0], SQUARE_WITH_HOLE[1:]), {}),
                (Geometry.linestring([(0, 0), (3, 4)]), {"name": "a"}),
            ]
        )
        alphabet = list('{}[]",:.-+eE0123456789 ') + ["é"]
        for _ in range(500):
            text = list(source)
            for _ in range(rng.integers(1, 6)):
                i = rng.integers(len(text))
                action = rng.integers(3)
                if action == 0:
                    del text[i]
                elif action == 1:
                    text.insert(i, alphabet[rng.integers(len(alphabet))])
                else:
                    text[i] = alphabet[rng.integers(len(alphabet))]
            try:
                features = parse_geojson("".join(text))
            except (ParseError, InvalidGeometry, UnsupportedGeometryType):
                continue
            assert all(isinstance(g, Geometry) for g, _ in features)


class TestWriteGeoJSON:
    def test_read_back(self):
        holed = Geometry.polygon(SQUARE_WITH_HOLE[0], SQUARE_WITH_HOLE[1:])
        items = [(holed, {"id": "7"}), (Geometry.point(0.1, 0.2), {})]
        assert parse_geojson(write_geojson(items)) == items

    def test_bare_geometries(self):
        text = write_geojson([Geometry.point(1, 2)])
        document = json.loads(text)
        assert document["type"] == "FeatureCollection"
        assert document["features"][0]["properties"] == {}

    def test_deterministic(self):
        items = [(Geometry.point(1, 2), {"b": "1", "a": "2"})]
        text = write_geojson(items)
        assert text == write_geojson(items)
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')

    def test_large_collection(self):
        rng = np.random.default_rng(6)
        items = []
        for i in range(1000):
            g = random_polygon(rng) if i % 2 else random_linestring(rng)
            items.append((g, {"id": str(i)}))
        features = parse_geojson(write_geojson(items))
        assert features == items
        assert features.warnings == []
