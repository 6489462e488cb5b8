import json

import pytest

from mppencode.encoding import DenseEncoding, MppEncoder, sparsify
from mppencode.exceptions import ParseError
from mppencode.fixtures import DEMO_FRAME, DEMO_RESOLUTION, demo_shapes
from mppencode.format import (
    ENCODING_FORMAT_VERSION,
    encodings_to_csv,
    encodings_to_json,
    format_coordinate,
    read_encodings_csv,
    read_encodings_json,
)

ENCODER = MppEncoder(DEMO_FRAME, DEMO_RESOLUTION)


def demo_rows():
    return [(name, ENCODER.encode(g)) for name, g in demo_shapes()]


class TestFormatCoordinate:
    def test_integral(self):
        assert format_coordinate(3.0) == "3"
        assert format_coordinate(-0.0) == "0"

    def test_shortest_exact(self):
        assert format_coordinate(0.1) == "0.1"
        assert float(format_coordinate(1 / 3)) == 1 / 3

    def test_huge_values_keep_exponent(self):
        assert format_coordinate(1e20) == "1e+20"


class TestCsv:
    def test_header_and_rows(self):
        rows = [
            ("a", DenseEncoding([1.0, 0.5], "g")),
            ("b", DenseEncoding([0, 0.25], "g")),
        ]
        text = encodings_to_csv(rows)
        assert text == "id,e0,e1\na,1,0.5\nb,0,0.25\n"

    def test_read_back(self):
        rows = demo_rows()
        parsed = read_encodings_csv(encodings_to_csv(rows), ENCODER.grid_id)
        assert parsed == rows

    def test_empty(self):
        assert encodings_to_csv([]) == "id\n"
        assert read_encodings_csv("id\n") == []

    def test_wrong_width(self):
        text = "id,e0,e1\na,1,2\nb,1\n"
        with pytest.raises(ParseError, match="row 2") as e:
            read_encodings_csv(text)
        assert e.value.byte_offset == len("id,e0,e1\na,1,2\n")

    def test_not_a_number(self):
        with pytest.raises(ParseError, match="row 1"):
            read_encodings_csv("id,e0\na,x\n")


class TestJson:
    def test_dense(self):
        rows = demo_rows()
        text = encodings_to_json(rows, ENCODER.grid, "mpp", scale=100.0)
        document, parsed = read_encodings_json(text)
        assert parsed == rows
        assert document["version"] == ENCODING_FORMAT_VERSION
        assert document["method"] == "mpp"
        assert document["grid"]["nx"] == 4

    def test_sparse(self):
        rows = [(name, sparsify(e, 0.3)) for name, e in demo_rows()]
        text = encodings_to_json(rows, ENCODER.grid, "mpp", sparse=True)
        assert "sparse" in json.loads(text)["encodings"][0]
        _, parsed = read_encodings_json(text)
        assert parsed == rows

    def test_deterministic(self):
        rows = demo_rows()
        assert encodings_to_json(rows, ENCODER.grid, "mpp") == encodings_to_json(
            rows, ENCODER.grid, "mpp"
        )

    def test_malformed(self):
        with pytest.raises(ParseError):
            read_encodings_json("{")
        with pytest.raises(ParseError):
            read_encodings_json('{"grid": {}}')
