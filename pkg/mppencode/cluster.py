import logging
from collections import deque

import numpy as np
from scipy.spatial.distance import cdist

from mppencode.exceptions import GridMismatch

NOISE = -1
DEFAULT_MIN_PTS = 2


class DbscanParams:
    """Neighbourhood radius ``eps`` and the neighbourhood size ``min_pts``
    (counting the point itself) that makes a point a core point."""

    __slots__ = ("eps", "min_pts")

    def __init__(self, eps, min_pts=DEFAULT_MIN_PTS):
        if not eps >= 0:
            raise ValueError(f"eps must be non-negative, got {eps!r}.")
        if int(min_pts) != min_pts or min_pts < 1:
            raise ValueError(f"min_pts must be a positive integer, got {min_pts!r}.")
        self.eps = float(eps)
        self.min_pts = int(min_pts)

    def __repr__(self):
        return f"DbscanParams(eps={self.eps!r}, min_pts={self.min_pts!r})"


class ClusterLabels:
    """Per-item cluster ids, contiguous from 0, with ``NOISE`` for noise."""

    __slots__ = ("labels",)

    def __init__(self, labels):
        self.labels = tuple(int(label) for label in labels)

    @property
    def n_clusters(self):
        return len({label for label in self.labels if label != NOISE})

    def clusters(self):
        """Member index sets, one per cluster id."""
        groups = [set() for _ in range(self.n_clusters)]
        for index, label in enumerate(self.labels):
            if label != NOISE:
                groups[label].add(index)
        return groups

    def partition(self):
        """The clustering as a set of frozensets, independent of numbering."""
        return {frozenset(group) for group in self.clusters()}

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other):
        return isinstance(other, ClusterLabels) and self.labels == other.labels

    def __repr__(self):
        return f"ClusterLabels({list(self.labels)!r})"


def _as_matrix(vectors):
    vectors = list(vectors)
    if not vectors:
        return np.empty((0, 0))
    if hasattr(vectors[0], "grid_id"):
        grid_ids = {v.grid_id for v in vectors}
        if len(grid_ids) > 1:
            names = ", ".join(sorted(map(str, grid_ids)))
            raise GridMismatch(f"Cannot cluster encodings of different grids: {names}.")
        vectors = [v.values for v in vectors]
    if len({len(v) for v in vectors}) > 1:
        raise GridMismatch("Cannot cluster encodings of different lengths.")
    return np.array(vectors, dtype=float)


def dbscan(vectors, params):
    """Density-based clustering with the Euclidean metric.

    Points are visited in input order; each unlabelled core point starts a
    new cluster that is grown breadth-first through the neighbourhoods of its
    core members. Non-core points reached this way become border points of
    the cluster; the remaining points are noise.

    :param vectors: :class:`~mppencode.encoding.DenseEncoding` objects of
                    one grid, or plain equal-length vectors.
    :type params: :class:`DbscanParams`
    :rtype: :class:`ClusterLabels`
    :raises GridMismatch: If the encodings come from different grids.
    """
    x = _as_matrix(vectors)
    n = len(x)
    if n == 0:
        return ClusterLabels(())

    neighbours = [np.flatnonzero(row <= params.eps) for row in cdist(x, x)]
    core = np.array([len(nb) >= params.min_pts for nb in neighbours])

    labels = np.full(n, NOISE)
    visited = np.zeros(n, dtype=bool)
    cluster = 0
    for i in range(n):
        if visited[i] or not core[i]:
            continue
        visited[i] = True
        labels[i] = cluster
        queue = deque(neighbours[i])
        while queue:
            j = queue.popleft()
            if visited[j]:
                continue
            visited[j] = True
            labels[j] = cluster
            if core[j]:
                queue.extend(neighbours[j])
        cluster += 1

    logging.debug(
        "dbscan: %d points, %d clusters, %d noise",
        n,
        cluster,
        int(np.count_nonzero(labels == NOISE)),
    )
    return ClusterLabels(labels)
