"""Probe models: small perceptrons trained on encodings to estimate shape
properties and pairwise relations."""
import logging
import math

import numpy as np
from scipy.special import expit

from mppencode.evaluation.corpus import TASKS, PropertySample
from mppencode.evaluation.metrics import POOL, pooled_r2, r2, roc_auc
from mppencode.evaluation.pairs import PairSample
from mppencode.evaluation.report import POOLED_R2, R2, ROC_AUC, ReportRow
from mppencode.exceptions import TrainingError
from mppencode.relations import RelationKind
from mppencode.utils import chunk_data

REGRESSION = "regression"
BINARY = "binary"

HIDDEN_SIZES = (128, 128)
OUTPUT_INIT_SCALE = 1e-2
MIN_SPLIT_SIZE = 10


class TrainConfig:
    """Training hyper-parameters.

    :param split: Train, validation and test fractions; must sum to 1.
    :param epochs: Maximum number of passes over the training split.
    :param batch_size: Mini-batch size.
    :param learning_rate: Adam step size.
    :param patience: Epochs without validation improvement before stopping.
    :param seed: Seed for the split, initialization and batch order.
    """

    __slots__ = ("split", "epochs", "batch_size", "learning_rate", "patience", "seed")

    def __init__(
        self,
        split=(0.6, 0.2, 0.2),
        epochs=300,
        batch_size=256,
        learning_rate=1e-3,
        patience=50,
        seed=0,
    ):
        split = tuple(float(f) for f in split)
        if len(split) != 3 or min(split) <= 0 or abs(sum(split) - 1) > 1e-9:
            raise ValueError(f"Split fractions {split} must be positive and sum to 1.")
        if epochs < 1:
            raise ValueError("epochs must be at least 1.")
        if batch_size < 1:
            raise ValueError("batch_size must be at least 1.")
        if not learning_rate > 0:
            raise ValueError("learning_rate must be positive.")
        self.split = split
        self.epochs = int(epochs)
        self.batch_size = int(batch_size)
        self.learning_rate = float(learning_rate)
        self.patience = int(patience)
        self.seed = int(seed)

    def to_dict(self):
        d = {attr: getattr(self, attr) for attr in TrainConfig.__slots__}
        d["split"] = list(self.split)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**{attr: d[attr] for attr in TrainConfig.__slots__ if attr in d})

    def replace(self, **changes):
        d = self.to_dict()
        d.update(changes)
        return TrainConfig.from_dict(d)

    def __repr__(self):
        fields = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())
        return f"TrainConfig({fields})"


class ProbeModel:
    """Fully connected network ``[n_in, 128, 128, 1]`` with ReLU hidden
    layers.

    Regression models output the prediction directly; binary models output a
    logit and are trained with binary cross-entropy.

    :param n_in: Input width (``N`` or ``2N`` for pair tasks).
    :param task: ``"regression"`` or ``"binary"``.
    :param rng: ``numpy.random.Generator`` used for He initialization.
    """

    def __init__(self, n_in, task=REGRESSION, rng=None, hidden=HIDDEN_SIZES):
        if task not in (REGRESSION, BINARY):
            raise ValueError(f"Unknown probe task {task!r}.")
        rng = np.random.default_rng(rng)
        self.task = task
        self.sizes = (int(n_in),) + tuple(hidden) + (1,)
        self.params = []
        for index, (fan_in, fan_out) in enumerate(zip(self.sizes[:-1], self.sizes[1:])):
            w = rng.normal(0.0, math.sqrt(2.0 / fan_in), (fan_in, fan_out))
            if index == len(self.sizes) - 2:
                w *= OUTPUT_INIT_SCALE
            self.params.extend([w, np.zeros(fan_out)])

    def _forward(self, x):
        activations = [x]
        h = x
        n_layers = len(self.params) // 2
        for layer in range(n_layers):
            w, b = self.params[2 * layer], self.params[2 * layer + 1]
            z = h @ w + b
            h = np.maximum(z, 0.0) if layer < n_layers - 1 else z
            activations.append(h)
        return activations

    def output(self, x):
        """Raw network output: predictions or logits, shape ``(n,)``."""
        return self._forward(np.asarray(x, dtype=float))[-1][:, 0]

    def predict(self, x):
        out = self.output(x)
        return expit(out) if self.task == BINARY else out

    def _loss(self, out, y):
        if self.task == BINARY:
            return float(np.mean(np.logaddexp(0.0, out) - y * out))
        return float(np.mean((out - y) ** 2))

    def loss(self, x, y):
        return self._loss(self.output(x), np.asarray(y, dtype=float))

    def loss_and_gradients(self, x, y):
        """Mean loss over the batch and its gradient for every parameter, in
        :attr:`params` order."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        activations = self._forward(x)
        out = activations[-1][:, 0]
        n = len(y)
        loss = self._loss(out, y)

        if self.task == BINARY:
            delta = ((expit(out) - y) / n)[:, None]
        else:
            delta = (2.0 * (out - y) / n)[:, None]

        grads = [None] * len(self.params)
        for layer in reversed(range(len(self.params) // 2)):
            h_in = activations[layer]
            grads[2 * layer] = h_in.T @ delta
            grads[2 * layer + 1] = delta.sum(axis=0)
            if layer > 0:
                delta = (delta @ self.params[2 * layer].T) * (h_in > 0)
        return loss, grads

    def get_params(self):
        return [p.copy() for p in self.params]

    def set_params(self, params):
        self.params = [p.copy() for p in params]


class Adam:
    """Adaptive moment estimation with per-parameter step sizes."""

    def __init__(self, params, learning_rate=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        correction1 = 1 - self.beta1**self.t
        correction2 = 1 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            p -= self.learning_rate * (m / correction1) / (
                np.sqrt(v / correction2) + self.eps
            )


class TrainingCurve:
    __slots__ = ("best_epoch", "epochs_run", "final_train_loss", "best_val_loss")

    def __init__(self, best_epoch, epochs_run, final_train_loss, best_val_loss):
        self.best_epoch = best_epoch
        self.epochs_run = epochs_run
        self.final_train_loss = final_train_loss
        self.best_val_loss = best_val_loss

    def to_dict(self):
        return {attr: getattr(self, attr) for attr in TrainingCurve.__slots__}

    def __repr__(self):
        fields = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())
        return f"TrainingCurve({fields})"


def split_indices(n, fractions, rng):
    """Shuffled train, validation and test index arrays.

    :raises TrainingError: If a split would hold fewer than 10 samples.
    """
    n_train = int(round(fractions[0] * n))
    n_val = int(round(fractions[1] * n))
    n_test = n - n_train - n_val
    if min(n_train, n_val, n_test) < MIN_SPLIT_SIZE:
        raise TrainingError(
            f"{n} samples give splits of {n_train}/{n_val}/{n_test}; every split "
            f"needs at least {MIN_SPLIT_SIZE}."
        )
    order = rng.permutation(n)
    return order[:n_train], order[n_train : n_train + n_val], order[n_train + n_val :]


def fit(model, x_train, y_train, x_val, y_val, cfg, rng):
    """Trains ``model`` with Adam on mini-batches and keeps the parameters
    with the lowest validation loss (the untrained model included).

    :rtype: :class:`TrainingCurve`
    :raises TrainingError: If a loss becomes NaN or infinite.
    """
    optimizer = Adam(model.params, cfg.learning_rate)
    best_val = model.loss(x_val, y_val)
    best_params = model.get_params()
    best_epoch = 0
    train_loss = model.loss(x_train, y_train)
    epoch = 0

    for epoch in range(1, cfg.epochs + 1):
        total = 0.0
        order = rng.permutation(len(y_train))
        for batch in chunk_data(order, cfg.batch_size):
            loss, grads = model.loss_and_gradients(x_train[batch], y_train[batch])
            if not math.isfinite(loss):
                raise TrainingError("Training loss diverged.", epoch=epoch, loss=loss)
            optimizer.step(model.params, grads)
            total += loss * len(batch)
        train_loss = total / len(y_train)

        val_loss = model.loss(x_val, y_val)
        if not math.isfinite(val_loss):
            raise TrainingError("Validation loss diverged.", epoch=epoch, loss=val_loss)
        logging.debug(
            "epoch %d: train loss %.6g, validation loss %.6g",
            epoch,
            train_loss,
            val_loss,
        )
        if val_loss < best_val:
            best_val = val_loss
            best_params = model.get_params()
            best_epoch = epoch
        elif epoch - best_epoch >= cfg.patience:
            break

    model.set_params(best_params)
    logging.info(
        "Selected epoch %d of %d (validation loss %.6g)", best_epoch, epoch, best_val
    )
    return TrainingCurve(best_epoch, epoch, train_loss, best_val)


def _design_matrix(samples, encoder, task):
    """Inputs, target columns and metric name for ``task``."""
    if task in TASKS:
        kind, keys = TASKS[task]
        chosen = [
            s
            for s in samples
            if isinstance(s, PropertySample) and s.geometry.kind == kind
        ]
        x = encoder.encode_many([s.geometry for s in chosen])
        targets = [np.array([s.targets[k] for s in chosen]) for k in keys]
        metric = R2 if len(keys) == 1 else POOLED_R2
        return x, targets, metric

    kind = RelationKind(task)
    chosen = [s for s in samples if isinstance(s, PairSample) and s.kind is kind]
    x = np.array([encoder.encode_pair(s.a, s.b) for s in chosen]).reshape(
        len(chosen), 2 * encoder.size
    )
    return x, [np.array([float(s.label) for s in chosen])], ROC_AUC


def train_probe(samples, encoder, task, train_cfg, pooling=POOL):
    """Encodes ``samples``, trains probe models for ``task`` and scores them
    on the held-out test split.

    Property tasks train one regression model per target on standardized
    targets; orientation tasks train two (``cos2t`` and ``sin2t``) and
    report their pooled R^2. Relation tasks train a binary model on
    concatenated pair encodings and report ROC AUC.

    :param samples: :class:`~mppencode.evaluation.corpus.PropertySample` or
                    :class:`~mppencode.evaluation.pairs.PairSample` objects;
                    only those matching ``task`` are used.
    :param encoder: An encoder from :func:`~mppencode.encoding.make_encoder`.
    :param task: A key of :data:`~mppencode.evaluation.corpus.TASKS` or a
                 :class:`~mppencode.relations.RelationKind` value.
    :type train_cfg: :class:`TrainConfig`
    :param pooling: ``"pool"`` or ``"mean"``, see
                    :func:`~mppencode.evaluation.metrics.pooled_r2`.
    :returns: The trained models and the report row.
    :rtype: ``(tuple, ReportRow)``
    :raises TrainingError: If a split is too small or training diverges.
    """
    task = str(task)
    x, targets, metric = _design_matrix(samples, encoder, task)
    rng = np.random.default_rng(train_cfg.seed)
    train, val, test = split_indices(len(x), train_cfg.split, rng)

    models, curves, series = [], [], []
    for y in targets:
        if metric == ROC_AUC:
            model = ProbeModel(x.shape[1], BINARY, rng)
            curve = fit(model, x[train], y[train], x[val], y[val], train_cfg, rng)
            series.append((y[test], model.predict(x[test])))
        else:
            mean = float(y[train].mean())
            std = float(y[train].std()) or 1.0
            scaled = (y - mean) / std
            model = ProbeModel(x.shape[1], REGRESSION, rng)
            curve = fit(
                model, x[train], scaled[train], x[val], scaled[val], train_cfg, rng
            )
            series.append((y[test], model.predict(x[test]) * std + mean))
        models.append(model)
        curves.append(curve)

    if metric == ROC_AUC:
        value = roc_auc(*series[0])
    elif metric == R2:
        value = r2(*series[0])
    else:
        value = pooled_r2(series, method=pooling)

    row = ReportRow(
        encoder=encoder.method,
        resolution=encoder.grid.spacing,
        task=task,
        metric=metric,
        value=value,
        seed=train_cfg.seed,
        curves=[c.to_dict() for c in curves],
    )
    logging.info(
        "%s %s at %g: %s = %.4f", row.encoder, task, row.resolution, metric, value
    )
    return tuple(models), row
