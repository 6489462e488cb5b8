"""Labelled shape pairs for the pairwise relation tasks.

The second operand ``b`` of every pair is an anchor shape; the first operand
``a`` is moved around it until the requested label holds. Relations that
random placement almost never makes true (a point on a line, two polygons
sharing an edge) get constructed true cases instead. Every emitted label is
checked with :func:`~mppencode.relations.relation`.
"""
import logging
import math

import numpy as np

from mppencode.affine import transform
from mppencode.evaluation.corpus import random_shape
from mppencode.exceptions import GeneratorError
from mppencode.geojson import parse_geojson, write_geojson
from mppencode.geometry import POINT, AffineTransform, Geometry
from mppencode.measures import centroid
from mppencode.planar import signed_ring_area
from mppencode.relations import OPERAND_KINDS, RelationKind, relation

# Largest bounding-box side of a generated pair operand.
PAIR_EXTENT = 40.0
MAX_ATTEMPTS_PER_SAMPLE = 100
BORDER_SHIFT = (0.5, 3.0)


class PairSample:
    """Two geometries and whether ``relation(kind, a, b)`` holds."""

    __slots__ = ("kind", "a", "b", "label")

    def __init__(self, kind, a, b, label):
        self.kind = RelationKind(kind)
        self.a = a
        self.b = b
        self.label = bool(label)

    def verify(self):
        return relation(self.kind, self.a, self.b) == self.label

    def __eq__(self, other):
        return isinstance(other, PairSample) and (
            self.kind,
            self.a,
            self.b,
            self.label,
        ) == (other.kind, other.a, other.b, other.label)

    def __repr__(self):
        return (
            f"PairSample({self.kind.value}, a={self.a!r}, b={self.b!r}, "
            f"label={self.label})"
        )


def _translate(g, dx, dy):
    return transform(g, AffineTransform(translation=(dx, dy)))


def _clamp_into(g, frame):
    """Shifts ``g`` the least amount that puts its bounding box in ``frame``."""
    min_x, min_y, max_x, max_y = g.bounds()
    dx = max(frame.min_x - min_x, 0.0) + min(frame.max_x - max_x, 0.0)
    dy = max(frame.min_y - min_y, 0.0) + min(frame.max_y - max_y, 0.0)
    if dx == 0 and dy == 0:
        return g
    return _translate(g, dx, dy)


def _place_near(a, b, frame, rng):
    """Moves ``a`` so that its centroid lands uniformly in ``b``'s bounding box
    grown by half of ``a``'s size."""
    a_min_x, a_min_y, a_max_x, a_max_y = a.bounds()
    half_w = 0.5 * (a_max_x - a_min_x)
    half_h = 0.5 * (a_max_y - a_min_y)
    b_min_x, b_min_y, b_max_x, b_max_y = b.bounds()
    grow_x = max(half_w, 0.25 * (b_max_x - b_min_x))
    grow_y = max(half_h, 0.25 * (b_max_y - b_min_y))
    x = rng.uniform(b_min_x - grow_x, b_max_x + grow_x)
    y = rng.uniform(b_min_y - grow_y, b_max_y + grow_y)
    if a.kind == POINT:
        x = min(max(x, frame.min_x), frame.max_x)
        y = min(max(y, frame.min_y), frame.max_y)
        return Geometry.point(x, y)
    cx, cy = centroid(a)
    return _clamp_into(_translate(a, x - cx, y - cy), frame)


def _point_on(line, rng):
    starts, ends = line.segments()
    index = int(rng.integers(len(starts)))
    t = rng.uniform(0.0, 1.0)
    x, y = starts[index] + t * (ends[index] - starts[index])
    return Geometry.point(float(x), float(y))


def _ccw_exterior(polygon):
    ring = polygon.rings()[0]
    return ring if signed_ring_area(ring) > 0 else ring[::-1]


def _snap_to_edge(a, b, rng):
    """Rotates and moves ``a`` so that one of its edges lies on an edge of
    ``b`` running the other way, midpoints matched.

    :returns: The moved ``a`` and the outward unit normal of ``b``'s edge.
    """
    ring_a = _ccw_exterior(a)
    ring_b = _ccw_exterior(b)
    i = int(rng.integers(len(ring_a) - 1))
    j = int(rng.integers(len(ring_b) - 1))
    pa, qa = ring_a[i], ring_a[i + 1]
    pb, qb = ring_b[j], ring_b[j + 1]
    angle_a = math.atan2(qa[1] - pa[1], qa[0] - pa[0])
    angle_b = math.atan2(qb[1] - pb[1], qb[0] - pb[0])

    rotation = angle_b + math.pi - angle_a
    cx, cy = centroid(a)
    cos_r, sin_r = math.cos(rotation), math.sin(rotation)
    mid_a = 0.5 * (pa + qa) - (cx, cy)
    mid_a = np.array(
        [cos_r * mid_a[0] - sin_r * mid_a[1], sin_r * mid_a[0] + cos_r * mid_a[1]]
    )
    mid_b = 0.5 * (pb + qb)
    moved = transform(
        a,
        AffineTransform(
            rotation=rotation,
            translation=tuple(mid_b - (cx, cy) - mid_a),
        ),
    )
    edge = (qb - pb) / np.hypot(*(qb - pb))
    return moved, np.array([edge[1], -edge[0]])


def _fit_pair(a, b, frame, rng):
    """Moves ``a`` and ``b`` together to a uniform position inside ``frame``,
    or returns ``None`` if the pair does not fit."""
    a_bounds, b_bounds = a.bounds(), b.bounds()
    min_x = min(a_bounds[0], b_bounds[0])
    min_y = min(a_bounds[1], b_bounds[1])
    max_x = max(a_bounds[2], b_bounds[2])
    max_y = max(a_bounds[3], b_bounds[3])
    slack_x = frame.width - (max_x - min_x)
    slack_y = frame.height - (max_y - min_y)
    if slack_x < 0 or slack_y < 0:
        return None
    dx = frame.min_x + rng.uniform(0.0, slack_x) - min_x
    dy = frame.min_y + rng.uniform(0.0, slack_y) - min_y
    return _translate(a, dx, dy), _translate(b, dx, dy)


def _candidate(kind, want, spec, rng):
    """One candidate pair, built to make ``want`` likely for ``kind``."""
    kind_a, kind_b = OPERAND_KINDS[kind]
    b = random_shape(kind_b, spec, rng, max_extent=PAIR_EXTENT)
    a = random_shape(kind_a, spec, rng, max_extent=PAIR_EXTENT)

    if kind is RelationKind.POINT_ON_LINESTRING and want:
        return _point_on(b, rng), b

    if kind is RelationKind.POLYGON_BORDERS_POLYGON and (want or rng.random() < 0.5):
        a, normal = _snap_to_edge(a, b, rng)
        if not want:
            shift = rng.uniform(*BORDER_SHIFT) * rng.choice((-1.0, 1.0))
            a = _translate(a, *(shift * normal))
        return _fit_pair(a, b, spec.frame, rng)

    return _place_near(a, b, spec.frame, rng), b


def generate_pairs(kind, n_true, n_false, spec, rng):
    """Generates exactly ``n_true`` pairs for which ``relation(kind, a, b)``
    holds and ``n_false`` for which it does not.

    :param kind: The relation to sample.
    :type kind: :class:`~mppencode.relations.RelationKind` or ``str``
    :param n_true: Number of true cases.
    :param n_false: Number of false cases.
    :param spec: Frame and shape generator parameters.
    :type spec: :class:`~mppencode.evaluation.corpus.CorpusSpec`
    :param rng: ``numpy.random.Generator`` or a seed for one.
    :rtype: ``list`` of :class:`PairSample`
    :raises GeneratorError: If the attempt budget runs out first.
    """
    kind = RelationKind(kind)
    if n_true < 0 or n_false < 0:
        raise ValueError("Pair counts must be non-negative.")
    rng = np.random.default_rng(rng)
    needed = {True: int(n_true), False: int(n_false)}
    budget = MAX_ATTEMPTS_PER_SAMPLE * (needed[True] + needed[False] + 1)
    samples = []
    attempts = rejected = 0

    while needed[True] or needed[False]:
        if attempts >= budget:
            raise GeneratorError(
                kind.value,
                f"{needed[True]} true and {needed[False]} false cases still "
                f"missing after {attempts} attempts",
            )
        attempts += 1
        want = needed[True] >= needed[False]
        pair = _candidate(kind, want, spec, rng)
        if pair is None:
            rejected += 1
            continue
        a, b = pair
        label = relation(kind, a, b)
        if not needed[label]:
            rejected += 1
            continue
        needed[label] -= 1
        samples.append(PairSample(kind, a, b, label))

    logging.info(
        "Generated %d %s pairs in %d attempts (%d rejected)",
        len(samples),
        kind.value,
        attempts,
        rejected,
    )
    return samples


def write_pairs(samples):
    """GeoJSON FeatureCollection with two features per pair, ``a`` then
    ``b``, tagged with the pair index, relation and label.

    :rtype: ``str``
    """
    items = []
    for index, sample in enumerate(samples):
        for role, g in (("a", sample.a), ("b", sample.b)):
            properties = {
                "pair": index,
                "role": role,
                "relation": sample.kind.value,
                "label": sample.label,
            }
            items.append((g, properties))
    return write_geojson(items)


def read_pairs(text):
    """Reads pairs written by :func:`write_pairs`.

    :rtype: ``list`` of :class:`PairSample`
    :raises ValueError: If a pair is incomplete.
    """
    members = {}
    for g, properties in parse_geojson(text):
        try:
            index = int(properties["pair"])
            role = properties["role"]
            kind = properties["relation"]
            label = properties["label"] == "true"
        except KeyError as e:
            raise ValueError(f"Pair feature is missing the {e} property.") from None
        members.setdefault(index, {"kind": kind, "label": label})[role] = g

    samples = []
    for index in sorted(members):
        member = members[index]
        if "a" not in member or "b" not in member:
            raise ValueError(f"Pair {index} does not have both operands.")
        samples.append(
            PairSample(member["kind"], member["a"], member["b"], member["label"])
        )
    return samples
