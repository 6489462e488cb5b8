import math

import numpy as np
from scipy.stats import rankdata

from mppencode.exceptions import DomainError

# Below this magnitude (cos 2t, sin 2t) carries no usable direction.
ANGLE_MAGNITUDE_EPS = 1e-12

POOL = "pool"
MEAN = "mean"


def _pair(y_true, y_pred):
    y_true = np.asarray(y_true, dtype=float).reshape(-1)
    y_pred = np.asarray(y_pred, dtype=float).reshape(-1)
    if len(y_true) != len(y_pred):
        raise ValueError(
            f"Length mismatch: {len(y_true)} targets, {len(y_pred)} predictions."
        )
    return y_true, y_pred


def _sums(y_true, y_pred):
    y_true, y_pred = _pair(y_true, y_pred)
    ss_res = float(np.sum((y_true - y_pred) ** 2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    return ss_res, ss_tot


def r2(y_true, y_pred):
    """Coefficient of determination ``1 - SS_res / SS_tot``.

    :raises DomainError: If ``y_true`` has no variance.
    """
    ss_res, ss_tot = _sums(y_true, y_pred)
    if ss_tot == 0:
        raise DomainError("R^2 is undefined for constant targets.")
    return 1.0 - ss_res / ss_tot


def pooled_r2(series, method=POOL):
    """R^2 over several ``(y_true, y_pred)`` series.

    With ``method="pool"`` residual and total sums of squares are added
    across the series before taking the ratio; ``method="mean"`` averages
    the per-series R^2 values.
    """
    series = list(series)
    if method == MEAN:
        return float(np.mean([r2(t, p) for t, p in series]))
    if method != POOL:
        raise ValueError(f"Unknown pooling method {method!r}.")
    sums = [_sums(t, p) for t, p in series]
    ss_res = sum(s[0] for s in sums)
    ss_tot = sum(s[1] for s in sums)
    if ss_tot == 0:
        raise DomainError("Pooled R^2 is undefined for constant targets.")
    return 1.0 - ss_res / ss_tot


def roc_auc(labels, scores):
    """Area under the ROC curve from the rank-sum statistic: the probability
    that a positive case scores higher than a negative one, ties counting
    one half.

    :raises DomainError: If only one class is present.
    """
    labels, scores = _pair(labels, scores)
    positive = labels > 0.5
    n_pos = int(np.count_nonzero(positive))
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DomainError("ROC AUC needs both positive and negative cases.")
    ranks = rankdata(scores)
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def angle_from_cos_sin(c, s):
    """Orientation in ``[0, pi)`` from ``cos(2t)`` and ``sin(2t)``.

    :raises DomainError: If ``(c, s)`` is too close to the origin.
    """
    if math.hypot(c, s) < ANGLE_MAGNITUDE_EPS:
        raise DomainError("Orientation is undefined for a zero (cos, sin) vector.")
    angle = (math.atan2(s, c) / 2.0) % math.pi
    return 0.0 if angle >= math.pi else angle
