"""Small reconstructed scenes used by the demo commands and the tests."""
import math

from mppencode.geometry import Frame, Geometry

# A 400 x 300 region with 100-unit spacing: a 3 x 4 grid of reference points.
DEMO_FRAME = Frame.from_size(400, 300)
DEMO_RESOLUTION = 100.0
DEMO_SCALE = 100.0


def demo_shapes():
    """A point, a line and a polygon on :data:`DEMO_FRAME`. The polygon
    contains the reference point ``(250, 150)``.

    :rtype: ``list`` of ``(str, Geometry)``
    """
    return [
        ("point", Geometry.point(60, 230)),
        ("line", Geometry.linestring([(120, 40), (220, 120), (330, 90)])),
        (
            "polygon",
            Geometry.polygon(
                [(200, 120), (300, 130), (290, 220), (210, 200), (200, 120)]
            ),
        ),
    ]


# A 3 x 3 grid; the path crosses four tile borders and never runs along one.
TRAJECTORY_FRAME = Frame.from_size(300, 300)
TRAJECTORY_RESOLUTION = 100.0
TRAJECTORY_STEPS = 50
TRAJECTORY_WAYPOINTS = [(30, 150), (150, 150), (150, 250), (250, 250), (250, 130)]


def trajectory_path():
    return Geometry.linestring(TRAJECTORY_WAYPOINTS)


# A 5 x 5 grid over 100 x 100; every shape is centred on (50, 50).
CLUSTER_FRAME = Frame.from_size(100, 100)
CLUSTER_RESOLUTION = 20.0
CLUSTER_SCALE = 20.0
CLUSTER_EPS_SWEEP = (0.6, 0.9, 1.3)

POINTS = "points"
HEXAGONS = "hexagons"
LONG_HORIZONTAL = "long horizontal lines"
SHORT_HORIZONTAL = "short horizontal lines"
LONG_VERTICAL = "long vertical lines"


def hexagon(cx, cy, radius):
    angles = [k * math.pi / 3 for k in range(6)]
    ring = [(cx + radius * math.cos(t), cy + radius * math.sin(t)) for t in angles]
    return Geometry.polygon(ring + ring[:1])


def cluster_shapes():
    """Five groups of near-identical shapes.

    Clustering their encodings merges the long and short horizontal lines
    first, then the points join them; hexagons and vertical lines stay
    apart.

    :returns: ``(group, Geometry)`` pairs, grouped.
    :rtype: ``list``
    """
    shapes = []
    for x, y in [(50, 50), (50.5, 50), (50, 50.5), (49.5, 49.5)]:
        shapes.append((POINTS, Geometry.point(x, y)))
    for radius in (30, 30.5, 31):
        shapes.append((HEXAGONS, hexagon(50, 50, radius)))
    for y in (49.5, 50, 50.5):
        shapes.append((LONG_HORIZONTAL, Geometry.linestring([(10, y), (90, y)])))
    for y in (49.5, 50, 50.5):
        shapes.append((SHORT_HORIZONTAL, Geometry.linestring([(26, y), (74, y)])))
    for x in (49.5, 50, 50.5):
        shapes.append((LONG_VERTICAL, Geometry.linestring([(x, 10), (x, 90)])))
    return shapes
