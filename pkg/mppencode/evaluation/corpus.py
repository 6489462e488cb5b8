"""Synthetic shape corpora for property estimation.

Lines are random walks whose heading drifts with a per-line curvature, so
that they range from nearly straight roads to meandering rivers. Polygons
are star-shaped rings with noisy radii, some of them notched to make them
concave. Every shape is randomly rotated, scaled and placed in the frame.
"""
import logging
import math

import numpy as np

from mppencode.affine import normalize_to_frame
from mppencode.exceptions import GeneratorError, InvalidGeometry
from mppencode.geojson import parse_geojson, write_geojson
from mppencode.geometry import LINESTRING, POINT, POLYGON, Frame, Geometry
from mppencode.measures import (
    area,
    char_ratio,
    length,
    orientation_angle,
    sinuosity,
)

LENGTH = "length"
AREA = "area"
COS2T = "cos2t"
SIN2T = "sin2t"
SINUOSITY = "sinuosity"
CHAR = "char"

TARGETS_OF = {
    LINESTRING: (LENGTH, COS2T, SIN2T, SINUOSITY),
    POLYGON: (AREA, COS2T, SIN2T, CHAR),
}

# Property task -> (geometry kind, targets it predicts).
TASKS = {
    "linestring_length": (LINESTRING, (LENGTH,)),
    "linestring_orientation": (LINESTRING, (COS2T, SIN2T)),
    "linestring_sinuosity": (LINESTRING, (SINUOSITY,)),
    "polygon_area": (POLYGON, (AREA,)),
    "polygon_orientation": (POLYGON, (COS2T, SIN2T)),
    "polygon_char": (POLYGON, (CHAR,)),
}

MAX_SHAPE_ATTEMPTS = 100


class CorpusSpec:
    """Parameters of a synthetic corpus.

    :param frame: Frame shapes are placed in; 100 x 100 by default.
    :param n_lines: Number of LineStrings.
    :param n_polygons: Number of Polygons.
    :param line_vertices: Inclusive ``(min, max)`` vertex count of lines.
    :param polygon_vertices: Inclusive ``(min, max)`` vertex count of
                             polygon rings.
    :param curvature: Standard deviation of the per-line heading drift, in
                      radians per step.
    :param turn_noise: Standard deviation of the per-step heading jitter.
    :param irregularity: Largest relative radius noise of polygons.
    :param concave_fraction: Share of polygons that get notches.
    :param seed: Master seed.
    """

    __slots__ = (
        "frame",
        "n_lines",
        "n_polygons",
        "line_vertices",
        "polygon_vertices",
        "curvature",
        "turn_noise",
        "irregularity",
        "concave_fraction",
        "seed",
    )

    def __init__(
        self,
        frame=None,
        n_lines=0,
        n_polygons=0,
        line_vertices=(4, 16),
        polygon_vertices=(5, 16),
        curvature=0.35,
        turn_noise=0.2,
        irregularity=0.35,
        concave_fraction=0.4,
        seed=0,
    ):
        if n_lines < 0 or n_polygons < 0:
            raise ValueError("Corpus counts must be non-negative.")
        if not 2 <= line_vertices[0] <= line_vertices[1]:
            raise ValueError(f"Invalid line vertex range {line_vertices}.")
        if not 3 <= polygon_vertices[0] <= polygon_vertices[1]:
            raise ValueError(f"Invalid polygon vertex range {polygon_vertices}.")
        if not 0 <= irregularity < 1:
            raise ValueError("irregularity must be in [0, 1).")
        if not 0 <= concave_fraction <= 1:
            raise ValueError("concave_fraction must be in [0, 1].")
        self.frame = frame or Frame.from_size(100, 100)
        self.n_lines = int(n_lines)
        self.n_polygons = int(n_polygons)
        self.line_vertices = tuple(int(v) for v in line_vertices)
        self.polygon_vertices = tuple(int(v) for v in polygon_vertices)
        self.curvature = float(curvature)
        self.turn_noise = float(turn_noise)
        self.irregularity = float(irregularity)
        self.concave_fraction = float(concave_fraction)
        self.seed = int(seed)

    def to_dict(self):
        d = {attr: getattr(self, attr) for attr in CorpusSpec.__slots__}
        d["frame"] = self.frame.to_dict()
        d["line_vertices"] = list(self.line_vertices)
        d["polygon_vertices"] = list(self.polygon_vertices)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "frame" in d:
            d["frame"] = Frame.from_dict(d["frame"])
        return cls(**{k: v for k, v in d.items() if k in CorpusSpec.__slots__})

    def __repr__(self):
        return f"CorpusSpec({self.to_dict()!r})"


class PropertySample:
    """A geometry and its exactly computed property targets."""

    __slots__ = ("geometry", "targets")

    def __init__(self, geometry, targets):
        self.geometry = geometry
        self.targets = dict(targets)

    @classmethod
    def from_geometry(cls, g):
        return cls(g, compute_targets(g))

    def __eq__(self, other):
        return (
            isinstance(other, PropertySample)
            and self.geometry == other.geometry
            and self.targets == other.targets
        )

    def __repr__(self):
        return f"PropertySample({self.geometry!r}, targets={self.targets!r})"


def compute_targets(g):
    theta = orientation_angle(g)
    targets = {COS2T: math.cos(2 * theta), SIN2T: math.sin(2 * theta)}
    if g.kind == LINESTRING:
        targets[LENGTH] = length(g)
        targets[SINUOSITY] = sinuosity(g)
    elif g.kind == POLYGON:
        targets[AREA] = area(g)
        targets[CHAR] = char_ratio(g)
    else:
        raise ValueError(f"No property targets are defined for {g.kind}.")
    return targets


def random_walk(spec, rng):
    """Unscaled random-walk polyline with a per-line curvature."""
    n = int(rng.integers(spec.line_vertices[0], spec.line_vertices[1] + 1))
    drift = rng.normal(0.0, spec.curvature)
    heading = rng.uniform(0.0, 2 * math.pi)
    point = np.zeros(2)
    coords = [tuple(point)]
    for _ in range(n - 1):
        step = rng.uniform(0.5, 1.5)
        point = point + step * np.array([math.cos(heading), math.sin(heading)])
        coords.append(tuple(point))
        heading += drift + rng.normal(0.0, spec.turn_noise)
    return Geometry.linestring(coords)


def random_star(spec, rng, concave=None):
    """Unscaled counter-clockwise star-shaped polygon.

    Vertex angles are evenly spaced with jitter and radii are noisy, so the
    ring is simple. Concave variants have one to three notched vertices.
    """
    n = int(rng.integers(spec.polygon_vertices[0], spec.polygon_vertices[1] + 1))
    gap = 2 * math.pi / n
    angles = np.arange(n) * gap + rng.uniform(-0.4, 0.4, n) * gap
    noise = rng.uniform(0.0, spec.irregularity)
    radii = 1.0 + rng.uniform(-noise, noise, n)
    if concave is None:
        concave = rng.random() < spec.concave_fraction
    if concave and n >= 4:
        n_notches = int(rng.integers(1, min(3, n - 2) + 1))
        notches = rng.choice(n, size=n_notches, replace=False)
        radii[notches] *= rng.uniform(0.2, 0.5, n_notches)
    ring = [(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles)]
    return Geometry.polygon(ring + ring[:1])


def random_shape(kind, spec, rng, max_extent=None):
    """A shape of ``kind`` normalized into ``spec.frame``.

    :raises GeneratorError: If no valid shape turns up within the attempt
                            budget.
    """
    if kind == POINT:
        x = rng.uniform(spec.frame.min_x, spec.frame.max_x)
        y = rng.uniform(spec.frame.min_y, spec.frame.max_y)
        return Geometry.point(x, y)

    make = {LINESTRING: random_walk, POLYGON: random_star}[kind]
    min_extent = None
    if max_extent is not None:
        min_extent = min(0.2 * min(spec.frame.width, spec.frame.height), max_extent)
    for attempt in range(MAX_SHAPE_ATTEMPTS):
        try:
            shape = make(spec, rng)
            return normalize_to_frame(
                shape, spec.frame, rng, min_extent=min_extent, max_extent=max_extent
            )
        except InvalidGeometry as e:
            logging.debug("Rejected generated %s: %s", kind, e)
    raise GeneratorError(kind, f"no valid shape in {MAX_SHAPE_ATTEMPTS} attempts")


def generate_corpus(spec):
    """Generates ``spec.n_lines`` LineStrings then ``spec.n_polygons``
    Polygons with their property targets. The corpus depends only on
    ``spec``.

    :type spec: :class:`CorpusSpec`
    :rtype: ``list`` of :class:`PropertySample`
    """
    rng = np.random.default_rng(spec.seed)
    samples = []
    for kind, count in ((LINESTRING, spec.n_lines), (POLYGON, spec.n_polygons)):
        for _ in range(count):
            samples.append(PropertySample.from_geometry(random_shape(kind, spec, rng)))
    logging.info(
        "Generated corpus of %d lines and %d polygons", spec.n_lines, spec.n_polygons
    )
    return samples


def samples_for(samples, kind):
    return [s for s in samples if s.geometry.kind == kind]


def write_corpus(samples):
    """GeoJSON FeatureCollection with each sample's targets in its
    properties.

    :rtype: ``str``
    """
    return write_geojson((s.geometry, s.targets) for s in samples)


def read_corpus(text):
    """Reads a corpus file. Stored targets are used when present; otherwise
    they are computed from the geometry, so any LineString/Polygon GeoJSON
    file can serve as a corpus.

    :rtype: ``list`` of :class:`PropertySample`
    """
    samples = []
    for g, properties in parse_geojson(text):
        if g.kind not in TARGETS_OF:
            logging.warning("Skipping %s feature in corpus", g.kind)
            continue
        keys = TARGETS_OF[g.kind]
        if all(k in properties for k in keys):
            targets = {k: float(properties[k]) for k in keys}
            samples.append(PropertySample(g, targets))
        else:
            samples.append(PropertySample.from_geometry(g))
    return samples
