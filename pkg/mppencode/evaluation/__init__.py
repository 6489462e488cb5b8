from mppencode.evaluation.corpus import (
    TASKS,
    CorpusSpec,
    PropertySample,
    generate_corpus,
    read_corpus,
    write_corpus,
)
from mppencode.evaluation.experiment import (
    TABLE_RESOLUTIONS,
    ExperimentMatrix,
    run_experiment,
    set_default_cores,
)
from mppencode.evaluation.metrics import angle_from_cos_sin, pooled_r2, r2, roc_auc
from mppencode.evaluation.pairs import (
    PairSample,
    generate_pairs,
    read_pairs,
    write_pairs,
)
from mppencode.evaluation.probe import ProbeModel, TrainConfig, train_probe
from mppencode.evaluation.report import EvalReport, ReportRow
