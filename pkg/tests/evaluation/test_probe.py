import math

import numpy as np
import pytest

from mppencode.encoding import make_encoder
from mppencode.evaluation.corpus import CorpusSpec, generate_corpus
from mppencode.evaluation.pairs import generate_pairs
from mppencode.evaluation.probe import (
    BINARY,
    REGRESSION,
    ProbeModel,
    TrainConfig,
    fit,
    split_indices,
    train_probe,
)
from mppencode.evaluation.report import POOLED_R2, R2, ROC_AUC
from mppencode.exceptions import TrainingError

SPEC = CorpusSpec(n_lines=50, n_polygons=50, seed=11)
QUICK = TrainConfig(epochs=20, batch_size=16, patience=5, seed=2)


def numeric_gradient(model, x, y, index, position, h=1e-6):
    p = model.params[index]
    original = p[position]
    p[position] = original + h
    up = model.loss(x, y)
    p[position] = original - h
    down = model.loss(x, y)
    p[position] = original
    return (up - down) / (2 * h)


class TestTrainConfig:
    def test_defaults(self):
        cfg = TrainConfig()
        assert cfg.split == (0.6, 0.2, 0.2)
        assert (cfg.epochs, cfg.batch_size, cfg.patience) == (300, 256, 50)
        assert cfg.learning_rate == 1e-3

    def test_replace(self):
        cfg = TrainConfig().replace(seed=9, epochs=5)
        assert (cfg.seed, cfg.epochs) == (9, 5)
        assert TrainConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"split": (0.5, 0.5)},
            {"split": (0.6, 0.3, 0.2)},
            {"split": (1.0, 0.0, 0.0)},
            {"epochs": 0},
            {"batch_size": 0},
            {"learning_rate": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TrainConfig(**kwargs)


class TestProbeModel:
    def test_shapes(self):
        model = ProbeModel(12, rng=0)
        assert model.sizes == (12, 128, 128, 1)
        assert model.output(np.zeros((3, 12))).shape == (3,)

    def test_unknown_task(self):
        with pytest.raises(ValueError):
            ProbeModel(3, "ranking")

    def test_binary_predicts_probabilities(self):
        model = ProbeModel(4, BINARY, rng=1, hidden=(8,))
        p = model.predict(np.random.default_rng(0).normal(size=(20, 4)) * 100)
        assert np.all((p >= 0) & (p <= 1))

    @pytest.mark.parametrize("task", [REGRESSION, BINARY])
    def test_gradients_match_finite_differences(self, task):
        rng = np.random.default_rng(3)
        model = ProbeModel(3, task, rng, hidden=(6, 5))
        # lift the output layer so its gradient is not negligible
        model.params[-2] *= 100
        x = rng.normal(size=(16, 3))
        y = rng.random(16) < 0.5 if task == BINARY else rng.normal(size=16)
        _, grads = model.loss_and_gradients(x, y)
        for index, grad in enumerate(grads):
            assert grad.shape == model.params[index].shape
            for position in [(0,) * grad.ndim, tuple(s - 1 for s in grad.shape)]:
                expected = numeric_gradient(model, x, y.astype(float), index, position)
                assert grad[position] == pytest.approx(expected, rel=1e-4, abs=1e-7)

    def test_params_are_copied(self):
        model = ProbeModel(2, rng=0, hidden=(3,))
        saved = model.get_params()
        model.params[0] += 1
        model.set_params(saved)
        assert np.array_equal(model.params[0], saved[0])
        assert model.params[0] is not saved[0]


class TestSplits:
    def test_sizes(self):
        train, val, test = split_indices(50, (0.6, 0.2, 0.2), np.random.default_rng(0))
        assert (len(train), len(val), len(test)) == (30, 10, 10)
        assert sorted(np.concatenate([train, val, test])) == list(range(50))

    def test_too_small(self):
        with pytest.raises(TrainingError):
            split_indices(40, (0.6, 0.2, 0.2), np.random.default_rng(0))


class TestFit:
    def test_learns_linear_target(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(300, 4))
        y = x @ np.array([1.0, -2.0, 0.5, 0.0])
        model = ProbeModel(4, rng=rng, hidden=(16,))
        initial = model.loss(x[200:], y[200:])
        cfg = TrainConfig(epochs=200, batch_size=32, learning_rate=1e-2, patience=200)
        curve = fit(model, x[:200], y[:200], x[200:], y[200:], cfg, rng)
        assert curve.best_val_loss < 0.1 * initial
        assert model.loss(x[200:], y[200:]) == pytest.approx(curve.best_val_loss)
        assert 1 <= curve.best_epoch <= curve.epochs_run <= 200

    def test_early_stopping(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=(60, 2))
        y = rng.normal(size=60)
        model = ProbeModel(2, rng=rng, hidden=(4,))
        cfg = TrainConfig(epochs=500, batch_size=8, learning_rate=1e-2, patience=3)
        curve = fit(model, x[:40], y[:40], x[40:], y[40:], cfg, rng)
        assert curve.epochs_run - curve.best_epoch <= 3
        assert curve.epochs_run < 500

    def test_divergence(self):
        rng = np.random.default_rng(7)
        x = np.full((20, 2), 1e200)
        model = ProbeModel(2, rng=rng, hidden=(4,))
        with pytest.raises(TrainingError):
            fit(model, x[:10], np.ones(10), x[10:], np.ones(10), QUICK, rng)


class TestTrainProbe:
    def test_property_task(self):
        samples = generate_corpus(SPEC)
        encoder = make_encoder("mpp", SPEC.frame, 25)
        models, row = train_probe(samples, encoder, "polygon_area", QUICK)
        assert len(models) == 1
        assert row.cell == ("mpp", 25.0, "polygon_area")
        assert row.metric == R2
        assert row.seed == QUICK.seed
        assert math.isfinite(row.value)
        assert len(row.curves) == 1

    def test_orientation_task_pools(self):
        samples = generate_corpus(SPEC)
        encoder = make_encoder("div", SPEC.frame, 25)
        models, row = train_probe(samples, encoder, "linestring_orientation", QUICK)
        assert len(models) == 2
        assert row.metric == POOLED_R2
        assert len(row.curves) == 2

    def test_relation_task(self):
        pairs = generate_pairs("PointInPolygon", 30, 30, SPEC, 4)
        encoder = make_encoder("mpp", SPEC.frame, 25)
        models, row = train_probe(pairs, encoder, "PointInPolygon", QUICK)
        assert models[0].sizes[0] == 2 * encoder.size
        assert row.metric == ROC_AUC
        assert 0.0 <= row.value <= 1.0

    def test_other_samples_are_ignored(self):
        samples = generate_corpus(SPEC)
        pairs = generate_pairs("PointInPolygon", 30, 30, SPEC, 4)
        encoder = make_encoder("mpp", SPEC.frame, 25)
        _, alone = train_probe(samples, encoder, "polygon_area", QUICK)
        _, mixed = train_probe(pairs + samples, encoder, "polygon_area", QUICK)
        assert mixed == alone

    def test_deterministic(self):
        samples = generate_corpus(SPEC)
        encoder = make_encoder("mpp", SPEC.frame, 25)
        _, a = train_probe(samples, encoder, "linestring_length", QUICK)
        _, b = train_probe(samples, encoder, "linestring_length", QUICK)
        assert a == b

    def test_too_few_samples(self):
        samples = generate_corpus(CorpusSpec(n_polygons=20, seed=1))
        encoder = make_encoder("mpp", SPEC.frame, 25)
        with pytest.raises(TrainingError):
            train_probe(samples, encoder, "polygon_area", QUICK)
