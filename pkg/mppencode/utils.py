import os
from multiprocessing import cpu_count

import numpy as np

CORES_ENV_VARIABLE = "MPPENCODE_CORES"


def chunk_data(data, size):
    return (data[i : i + size] for i in range(0, len(data), size))


def resolve_cores(cores="all"):
    """Number of worker processes for ``cores``: ``"all"``, or a count from 1
    to the machine's CPU count. Any other count falls back to 1."""
    available_cores = cpu_count()

    if cores == "all":
        return available_cores
    elif 0 < int(cores) <= available_cores:
        return int(cores)
    else:
        return 1


def cores_from_env(default="all"):
    return os.environ.get(CORES_ENV_VARIABLE, default)


def cell_seed(master_seed, index):
    """Independent integer seed for work item ``index`` of a run seeded with
    ``master_seed``."""
    sequence = np.random.SeedSequence([int(master_seed), int(index)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def unique_rows(matrix):
    return len({row.tobytes() for row in np.ascontiguousarray(matrix)})
