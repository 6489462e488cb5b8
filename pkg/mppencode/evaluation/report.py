"""Experiment reports: result rows, the CSV table, the JSON run manifest and
SVG charts of metric against resolution."""
import csv
import io
import json

R2 = "r2"
POOLED_R2 = "pooled_r2"
ROC_AUC = "roc_auc"

CSV_HEADER = ("encoder", "resolution", "task", "metric", "value", "seed")

SVG_RC = {"svg.hashsalt": "mppencode", "svg.fonttype": "none"}
SERIES_COLORS = {"mpp": "#1f77b4", "div": "#ff7f0e"}


class ReportRow:
    """Test-set result of one experiment cell.

    :param encoder: ``"mpp"`` or ``"div"``.
    :param resolution: Grid spacing.
    :param task: Property task name or relation kind.
    :param metric: ``"r2"``, ``"pooled_r2"`` or ``"roc_auc"``.
    :param value: Metric value on the test split.
    :param seed: Seed the cell was trained with.
    :param curves: Training-curve summaries, one per trained model.
    """

    __slots__ = ("encoder", "resolution", "task", "metric", "value", "seed", "curves")

    def __init__(self, encoder, resolution, task, metric, value, seed, curves=()):
        self.encoder = encoder
        self.resolution = float(resolution)
        self.task = str(task)
        self.metric = metric
        self.value = float(value)
        self.seed = int(seed)
        self.curves = list(curves)

    @property
    def cell(self):
        return self.encoder, self.resolution, self.task

    def csv_fields(self):
        return [
            self.encoder,
            repr(self.resolution),
            self.task,
            self.metric,
            repr(self.value),
            str(self.seed),
        ]

    def to_dict(self):
        return {attr: getattr(self, attr) for attr in ReportRow.__slots__}

    @classmethod
    def from_dict(cls, d):
        return cls(**{attr: d[attr] for attr in ReportRow.__slots__ if attr in d})

    def __eq__(self, other):
        return isinstance(other, ReportRow) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return (
            f"ReportRow({self.encoder}, {self.resolution!r}, {self.task}, "
            f"{self.metric}={self.value!r}, seed={self.seed})"
        )


class EvalReport:
    """Rows of an experiment run, ordered as the matrix lists its cells,
    plus what is needed to rerun it.

    :param rows: :class:`ReportRow` objects.
    :param config: JSON-serializable description of the run (matrix, corpus,
                   training configuration).
    :param seed: Master seed.
    :param wall_time: Seconds the run took.
    """

    def __init__(self, rows, config=None, seed=0, wall_time=None):
        self.rows = list(rows)
        self.config = dict(config or {})
        self.seed = seed
        self.wall_time = wall_time

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def value(self, encoder, resolution, task):
        """Metric value of a cell.

        :raises KeyError: If the report has no such cell.
        """
        for row in self.rows:
            if row.cell == (encoder, float(resolution), str(task)):
                return row.value
        raise KeyError((encoder, resolution, task))

    def to_csv(self):
        """``encoder,resolution,task,metric,value,seed`` table; floats are
        written with ``repr`` so the file is reproducible bit for bit."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.csv_fields())
        return buffer.getvalue()

    def manifest(self):
        return {
            "config": self.config,
            "seed": self.seed,
            "wall_time": self.wall_time,
            "cells": [
                {
                    "encoder": row.encoder,
                    "resolution": row.resolution,
                    "task": row.task,
                    "seed": row.seed,
                    "curves": row.curves,
                }
                for row in self.rows
            ],
        }

    def manifest_json(self):
        return json.dumps(self.manifest(), sort_keys=True, indent=1) + "\n"

    def to_svg(self, title=None):
        """Grouped bar chart per task: one bar per encoder at every
        resolution, coarse to fine. Needs ``matplotlib``.

        :rtype: ``str``
        """
        import matplotlib
        from matplotlib.figure import Figure

        tasks = list(dict.fromkeys(row.task for row in self.rows))
        encoders = list(dict.fromkeys(row.encoder for row in self.rows))
        resolutions = sorted({row.resolution for row in self.rows}, reverse=True)
        width = 0.8 / max(len(encoders), 1)

        with matplotlib.rc_context(SVG_RC):
            fig = Figure(figsize=(3.2 * max(len(tasks), 1), 3.0))
            axes = fig.subplots(1, max(len(tasks), 1), squeeze=False)[0]
            for ax, task in zip(axes, tasks):
                rows = [r for r in self.rows if r.task == task]
                cells = {(r.encoder, r.resolution): r.value for r in rows}
                for offset, encoder in enumerate(encoders):
                    shift = (offset - (len(encoders) - 1) / 2) * width
                    xs, ys = [], []
                    for position, resolution in enumerate(resolutions):
                        if (encoder, resolution) in cells:
                            xs.append(position + shift)
                            ys.append(cells[(encoder, resolution)])
                    ax.bar(
                        xs,
                        ys,
                        width,
                        label=encoder.upper(),
                        color=SERIES_COLORS.get(encoder),
                    )
                metric = rows[0].metric
                ax.set_title(task, fontsize=9)
                ax.set_xticks(range(len(resolutions)))
                ax.set_xticklabels([f"{r:g}" for r in resolutions])
                ax.set_xlabel("resolution")
                ax.set_ylabel(metric)
                ax.set_ylim(min(0.0, min(cells.values())), 1.0)
            if tasks:
                axes[0].legend(fontsize=8)
            if title:
                fig.suptitle(title)
            fig.tight_layout()
            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        return buffer.getvalue()
