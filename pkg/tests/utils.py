import numpy as np

from mppencode.evaluation.corpus import CorpusSpec, random_shape
from mppencode.geometry import LINESTRING, POLYGON, Frame
from mppencode.planar import crossing_parity


def random_polygon(rng, frame=None):
    spec = CorpusSpec(frame=frame or Frame.from_size(100, 100))
    return random_shape(POLYGON, spec, rng)


def random_linestring(rng, frame=None, vertices=(4, 16)):
    spec = CorpusSpec(frame=frame or Frame.from_size(100, 100), line_vertices=vertices)
    return random_shape(LINESTRING, spec, rng)


def sampled_distance(g, p, samples=100000):
    """Minimum distance from ``p`` to points sampled densely along every
    segment of ``g``, 0 inside polygons."""
    p = np.asarray(p, dtype=float)
    starts, ends = g.segments()
    if g.primitive_kind == POLYGON and crossing_parity(p[None, :], starts, ends)[0]:
        return 0.0
    lengths = np.hypot(*(ends - starts).T)
    counts = np.maximum((samples * lengths / lengths.sum()).astype(int), 2)
    best = np.inf
    for a, b, n in zip(starts, ends, counts):
        t = np.linspace(0.0, 1.0, n)[:, None]
        pts = a + t * (b - a)
        best = min(best, float(np.min(np.hypot(*(pts - p).T))))
    return best


def monte_carlo_area(g, rng, samples=1000000):
    min_x, min_y, max_x, max_y = g.bounds()
    pts = np.column_stack(
        (rng.uniform(min_x, max_x, samples), rng.uniform(min_y, max_y, samples))
    )
    starts, ends = g.segments()
    inside = np.zeros(samples, dtype=bool)
    for chunk in range(0, samples, 100000):
        inside[chunk : chunk + 100000] = crossing_parity(
            pts[chunk : chunk + 100000], starts, ends
        )
    return inside.mean() * (max_x - min_x) * (max_y - min_y)


def orientation(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return int(v > 0) - int(v < 0)


def on_segment(a, b, c):
    within_x = min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
    return within_x and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def segments_meet(p1, p2, q1, q2):
    """Textbook orientation test for closed segments."""
    o1 = orientation(p1, p2, q1)
    o2 = orientation(p1, p2, q2)
    o3 = orientation(q1, q2, p1)
    o4 = orientation(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and on_segment(p1, p2, q1))
        or (o2 == 0 and on_segment(p1, p2, q2))
        or (o3 == 0 and on_segment(q1, q2, p1))
        or (o4 == 0 and on_segment(q1, q2, p2))
    )


def pair_count_auc(labels, scores):
    wins = 0.0
    positives = [s for label, s in zip(labels, scores) if label]
    negatives = [s for label, s in zip(labels, scores) if not label]
    for p in positives:
        for n in negatives:
            wins += 1.0 if p > n else 0.5 if p == n else 0.0
    return wins / (len(positives) * len(negatives))


def density_partition(x, eps, min_pts):
    """Core-point components, their border points and the noise set, from
    pairwise distances alone."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
    near = d <= eps
    core = near.sum(axis=1) >= min_pts

    component = [-1] * n
    count = 0
    for i in range(n):
        if not core[i] or component[i] >= 0:
            continue
        stack = [i]
        component[i] = count
        while stack:
            j = stack.pop()
            for k in np.flatnonzero(near[j] & core):
                if component[k] < 0:
                    component[k] = count
                    stack.append(k)
        count += 1

    cores = {frozenset(i for i in range(n) if component[i] == c) for c in range(count)}
    noise = {i for i in range(n) if not core[i] and not np.any(near[i] & core)}
    return cores, noise, core, near
