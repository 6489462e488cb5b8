import json
import math

import numpy as np
import pytest

from mppencode.evaluation.corpus import (
    AREA,
    CHAR,
    COS2T,
    SIN2T,
    SINUOSITY,
    TARGETS_OF,
    TASKS,
    CorpusSpec,
    PropertySample,
    compute_targets,
    generate_corpus,
    random_shape,
    random_star,
    random_walk,
    read_corpus,
    samples_for,
    write_corpus,
)
from mppencode.geojson import write_geojson
from mppencode.geometry import LINESTRING, POINT, POLYGON, Frame, Geometry
from mppencode.measures import char_ratio

from ..samples import NOTCHED_SQUARE

SMALL = CorpusSpec(n_lines=6, n_polygons=6, seed=3)


class TestCorpusSpec:
    def test_defaults(self):
        spec = CorpusSpec()
        assert spec.frame == Frame.from_size(100, 100)
        assert (spec.n_lines, spec.n_polygons) == (0, 0)

    def test_dict(self):
        spec = CorpusSpec(frame=Frame(0, 0, 50, 50), n_lines=3, curvature=0.1)
        again = CorpusSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
        assert again.to_dict() == spec.to_dict()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_lines": -1},
            {"line_vertices": (1, 5)},
            {"line_vertices": (6, 5)},
            {"polygon_vertices": (2, 5)},
            {"irregularity": 1.0},
            {"concave_fraction": 1.5},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            CorpusSpec(**kwargs)


class TestTargets:
    def test_polygon(self):
        targets = compute_targets(Geometry.polygon(NOTCHED_SQUARE))
        assert set(targets) == set(TARGETS_OF[POLYGON])
        assert targets[AREA] == pytest.approx(0.91)
        assert targets[CHAR] == pytest.approx(0.91)
        # Farthest pair is the (0, 0)-(1, 1) diagonal.
        assert targets[COS2T] == pytest.approx(0.0, abs=1e-12)
        assert targets[SIN2T] == pytest.approx(1.0)

    def test_line(self):
        targets = compute_targets(Geometry.linestring([(0, 0), (3, 4)]))
        assert set(targets) == set(TARGETS_OF[LINESTRING])
        assert targets["length"] == 5
        assert targets[SINUOSITY] == pytest.approx(0.0)

    def test_point_has_no_targets(self):
        with pytest.raises(ValueError):
            compute_targets(Geometry.point(1, 1))

    def test_tasks_use_known_targets(self):
        for kind, keys in TASKS.values():
            assert set(keys) <= set(TARGETS_OF[kind])


class TestShapes:
    def test_random_walk_vertex_count(self):
        rng = np.random.default_rng(0)
        spec = CorpusSpec(line_vertices=(4, 6))
        for _ in range(20):
            assert 4 <= len(random_walk(spec, rng).coords) <= 6

    def test_notches_make_stars_concave(self):
        rng = np.random.default_rng(1)
        spec = CorpusSpec()
        concave = np.mean([char_ratio(random_star(spec, rng, True)) for _ in range(40)])
        convex = np.mean([char_ratio(random_star(spec, rng, False)) for _ in range(40)])
        assert concave < convex

    def test_max_extent(self):
        rng = np.random.default_rng(2)
        for kind in (LINESTRING, POLYGON):
            for _ in range(10):
                g = random_shape(kind, CorpusSpec(), rng, max_extent=30)
                min_x, min_y, max_x, max_y = g.bounds()
                assert max(max_x - min_x, max_y - min_y) <= 30 + 1e-9

    def test_point(self):
        g = random_shape(POINT, CorpusSpec(), np.random.default_rng(0))
        assert g.kind == POINT
        assert CorpusSpec().frame.contains_bounds(g.bounds())


class TestGenerateCorpus:
    def test_counts_and_order(self):
        samples = generate_corpus(SMALL)
        assert [s.geometry.kind for s in samples] == [LINESTRING] * 6 + [POLYGON] * 6
        assert len(samples_for(samples, POLYGON)) == 6

    def test_inside_frame(self):
        for sample in generate_corpus(SMALL):
            assert SMALL.frame.contains_bounds(sample.geometry.bounds())

    def test_targets_are_consistent(self):
        for sample in generate_corpus(SMALL):
            t = sample.targets
            assert math.hypot(t[COS2T], t[SIN2T]) == pytest.approx(1.0)
            if sample.geometry.kind == LINESTRING:
                assert 0 <= t[SINUOSITY] <= 1
            else:
                assert 0 < t[CHAR] <= 1
                assert t[AREA] > 0

    def test_deterministic(self):
        assert generate_corpus(SMALL) == generate_corpus(SMALL)
        other = CorpusSpec(n_lines=6, n_polygons=6, seed=4)
        assert generate_corpus(other) != generate_corpus(SMALL)


class TestCorpusFiles:
    def test_read_back(self):
        samples = generate_corpus(SMALL)
        assert read_corpus(write_corpus(samples)) == samples

    def test_targets_computed_when_missing(self):
        square = Geometry.polygon(NOTCHED_SQUARE)
        text = write_geojson([square, Geometry.point(1, 1)])
        samples = read_corpus(text)
        assert samples == [PropertySample.from_geometry(square)]
