"""Experiment matrices: every (encoder, resolution, task) cell trains its own
probe, and cells run in parallel worker processes."""
import logging
import time
from multiprocessing import Pool

from mppencode.encoding import METHODS, make_encoder
from mppencode.evaluation.corpus import TASKS
from mppencode.evaluation.metrics import POOL
from mppencode.evaluation.probe import train_probe
from mppencode.evaluation.report import EvalReport
from mppencode.geometry import Frame
from mppencode.relations import RelationKind
from mppencode.utils import cell_seed, cores_from_env, resolve_cores

# Grid spacings evaluated over the 100 x 100 frame, coarse to fine.
TABLE_RESOLUTIONS = (50.0, 25.0, 12.5, 6.25)
PROPERTY_TASKS = tuple(TASKS)
RELATION_TASKS = tuple(kind.value for kind in RelationKind)

DEFAULT_CORES = "all"


def set_default_cores(cores):
    """Worker processes used when :func:`run_experiment` is not told;
    ``"all"`` or a count. The ``MPPENCODE_CORES`` environment variable takes
    precedence."""
    global DEFAULT_CORES
    DEFAULT_CORES = cores


class ExperimentMatrix:
    """The cells of an experiment: encoders x resolutions x tasks.

    :param encoders: Encoding methods, ``"mpp"`` and/or ``"div"``.
    :param resolutions: Grid spacings; each must divide the frame.
    :param tasks: Property task names and/or relation kinds.
    :param frame: Frame the grids cover.
    :param scale: MPP scale factor; defaults to each grid's spacing.
    """

    __slots__ = ("encoders", "resolutions", "tasks", "frame", "scale")

    def __init__(
        self,
        encoders=METHODS,
        resolutions=TABLE_RESOLUTIONS,
        tasks=PROPERTY_TASKS,
        frame=None,
        scale=None,
    ):
        self.encoders = tuple(e.lower() for e in encoders)
        for encoder in self.encoders:
            if encoder not in METHODS:
                raise ValueError(f"Unknown encoder {encoder!r}.")
        self.resolutions = tuple(float(r) for r in resolutions)
        self.tasks = tuple(str(t) for t in tasks)
        for task in self.tasks:
            if task not in TASKS and task not in RELATION_TASKS:
                raise ValueError(f"Unknown task {task!r}.")
        self.frame = frame or Frame.from_size(100, 100)
        self.scale = scale

    def cells(self):
        """``(encoder, resolution, task)`` tuples in report order."""
        return [
            (encoder, resolution, task)
            for task in self.tasks
            for resolution in self.resolutions
            for encoder in self.encoders
        ]

    def __len__(self):
        return len(self.encoders) * len(self.resolutions) * len(self.tasks)

    def to_dict(self):
        return {
            "encoders": list(self.encoders),
            "resolutions": list(self.resolutions),
            "tasks": list(self.tasks),
            "frame": self.frame.to_dict(),
            "scale": self.scale,
        }

    def __repr__(self):
        return f"ExperimentMatrix({self.to_dict()!r})"


_worker_samples = None


def _init_worker(samples):
    global _worker_samples
    _worker_samples = samples


def _run_cell(job):
    encoder_name, resolution, task, frame, scale, train_cfg, pooling = job
    start = time.perf_counter()
    encoder = make_encoder(encoder_name, frame, resolution, scale)
    _, row = train_probe(_worker_samples, encoder, task, train_cfg, pooling)
    logging.info(
        "Cell %s/%g/%s finished in %.1fs",
        encoder_name,
        resolution,
        task,
        time.perf_counter() - start,
    )
    return row


def run_experiment(matrix, samples, train_cfg, cores=None, pooling=POOL):
    """Trains and scores a probe for every cell of ``matrix``.

    Each cell gets its own seed derived from ``train_cfg.seed`` and its
    position in the matrix, so the report does not depend on the number of
    workers.

    :type matrix: :class:`ExperimentMatrix`
    :param samples: Property samples and/or pair samples.
    :type train_cfg: :class:`~mppencode.evaluation.probe.TrainConfig`
    :param cores: ``"all"`` or a worker count; see :func:`set_default_cores`.
    :param pooling: Pooled R^2 method for orientation tasks.
    :rtype: :class:`~mppencode.evaluation.report.EvalReport`
    """
    start = time.perf_counter()
    jobs = [
        (
            encoder,
            resolution,
            task,
            matrix.frame,
            matrix.scale,
            train_cfg.replace(seed=cell_seed(train_cfg.seed, index)),
            pooling,
        )
        for index, (encoder, resolution, task) in enumerate(matrix.cells())
    ]
    workers = min(resolve_cores(cores or cores_from_env(DEFAULT_CORES)), len(jobs))

    if workers > 1:
        with Pool(workers, initializer=_init_worker, initargs=(samples,)) as pool:
            rows = pool.map(_run_cell, jobs, chunksize=1)
    else:
        _init_worker(samples)
        try:
            rows = [_run_cell(job) for job in jobs]
        finally:
            _init_worker(None)

    wall_time = time.perf_counter() - start
    logging.info("Ran %d cells on %d workers in %.1fs", len(jobs), workers, wall_time)
    config = {
        "matrix": matrix.to_dict(),
        "train": train_cfg.to_dict(),
        "pooling": pooling,
    }
    return EvalReport(rows, config=config, seed=train_cfg.seed, wall_time=wall_time)
