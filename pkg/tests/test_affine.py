import math

import numpy as np
import pytest

from mppencode.affine import normalize_to_frame, transform
from mppencode.exceptions import DomainError
from mppencode.geometry import AffineTransform, Frame, Geometry
from mppencode.measures import area, centroid, char_ratio, sinuosity

from .samples import NOTCHED_SQUARE, UNIT_SQUARE
from .utils import random_linestring

FRAME = Frame.from_size(100, 100)


class TestTransform:
    def test_translation(self):
        moved = transform(
            Geometry.point(1, 2), AffineTransform(translation=(3, -1))
        )
        assert moved == Geometry.point(4, 1)

    def test_rotation_about_centroid(self):
        square = Geometry.polygon(UNIT_SQUARE)
        turned = transform(square, AffineTransform(rotation=math.pi / 4))
        assert area(turned) == pytest.approx(1.0)
        assert centroid(turned).x == pytest.approx(0.5)
        assert centroid(turned).y == pytest.approx(0.5)
        min_x, _, max_x, _ = turned.bounds()
        assert max_x - min_x == pytest.approx(math.sqrt(2))

    def test_scale(self):
        notched = Geometry.polygon(NOTCHED_SQUARE)
        grown = transform(notched, AffineTransform(scale=3))
        assert area(grown) == pytest.approx(9 * area(notched))
        assert char_ratio(grown) == pytest.approx(char_ratio(notched))

    def test_identity(self):
        square = Geometry.polygon(UNIT_SQUARE)
        assert transform(square, AffineTransform()) == square


class TestNormalizeToFrame:
    def test_fits_frame(self):
        rng = np.random.default_rng(0)
        notched = Geometry.polygon(NOTCHED_SQUARE)
        for _ in range(50):
            placed = normalize_to_frame(notched, FRAME, rng)
            assert FRAME.contains_bounds(placed.bounds())

    def test_extent_range(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            placed = normalize_to_frame(
                Geometry.polygon(UNIT_SQUARE), FRAME, rng, min_extent=10, max_extent=30
            )
            min_x, min_y, max_x, max_y = placed.bounds()
            extent = max(max_x - min_x, max_y - min_y)
            assert 10 - 1e-9 <= extent <= 30 + 1e-9

    def test_shape_is_preserved(self):
        rng = np.random.default_rng(2)
        line = random_linestring(rng)
        placed = normalize_to_frame(line, FRAME, rng)
        assert sinuosity(placed) == pytest.approx(sinuosity(line))

    def test_deterministic(self):
        notched = Geometry.polygon(NOTCHED_SQUARE)
        a = normalize_to_frame(notched, FRAME, 42)
        b = normalize_to_frame(notched, FRAME, 42)
        assert a == b

    def test_point(self):
        placed = normalize_to_frame(Geometry.point(-50, 700), FRAME, 3)
        assert FRAME.contains_bounds(placed.bounds())

    def test_offset_frame(self):
        frame = Frame(-200, 50, -100, 80)
        placed = normalize_to_frame(Geometry.polygon(UNIT_SQUARE), frame, 4)
        assert frame.contains_bounds(placed.bounds())

    def test_min_extent_too_large(self):
        with pytest.raises(DomainError):
            normalize_to_frame(Geometry.polygon(UNIT_SQUARE), FRAME, 0, min_extent=500)
