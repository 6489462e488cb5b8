import json
import logging
import os
import sys
import time

import click
import numpy as np

from mppencode import __version__
from mppencode.cluster import DbscanParams, dbscan
from mppencode.config import default_map, load_config
from mppencode.encoding import (
    DECODE_TOLERANCE,
    DIV,
    METHODS,
    MPP,
    DenseEncoding,
    MppConfig,
    SparseEncoding,
    decode_point_residual,
    densify,
    make_encoder,
    sparsify,
    trajectory_encodings,
)
from mppencode.evaluation.corpus import (
    TASKS,
    CorpusSpec,
    generate_corpus,
    read_corpus,
    write_corpus,
)
from mppencode.evaluation.experiment import (
    RELATION_TASKS,
    TABLE_RESOLUTIONS,
    ExperimentMatrix,
    run_experiment,
)
from mppencode.evaluation.metrics import MEAN, POOL
from mppencode.evaluation.pairs import generate_pairs, read_pairs, write_pairs
from mppencode.evaluation.probe import TrainConfig
from mppencode.exceptions import InconsistentEncoding, ParseError
from mppencode.fixtures import (
    CLUSTER_FRAME,
    CLUSTER_RESOLUTION,
    CLUSTER_SCALE,
    DEMO_FRAME,
    DEMO_RESOLUTION,
    DEMO_SCALE,
    TRAJECTORY_FRAME,
    TRAJECTORY_RESOLUTION,
    TRAJECTORY_STEPS,
    cluster_shapes,
    demo_shapes,
    trajectory_path,
)
from mppencode.format import (
    encodings_to_csv,
    encodings_to_json,
    read_encodings_csv,
    read_encodings_json,
)
from mppencode.geojson import parse_geojson, write_geojson
from mppencode.geometry import LINESTRING, Frame, Geometry
from mppencode.grid import ReferenceGrid, make_grids
from mppencode.utils import cell_seed
from mppencode.wkt import parse_wkt

DEFAULT_FRAME = (100.0, 100.0)
DEFAULT_RESOLUTION = 25.0
DEFAULT_OUT = "mppencode-out"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

USAGE_EXIT = 1
DATA_EXIT = 2
INTERNAL_EXIT = 3


def frame_option(func):
    return click.option(
        "--frame",
        nargs=2,
        type=float,
        default=None,
        metavar="W H",
        help="Frame width and height.",
    )(func)


def grid_options(func):
    func = click.option(
        "--scale", "-s", type=float, default=None, help="MPP scale factor s."
    )(func)
    func = click.option(
        "--resolution", "-r", type=float, default=None, help="Grid spacing."
    )(func)
    return frame_option(func)


def run_options(func):
    func = click.option(
        "--out",
        "-o",
        type=click.Path(file_okay=False),
        default=DEFAULT_OUT,
        show_default=True,
        help="Output directory.",
    )(func)
    return click.option("--seed", type=int, default=0, show_default=True)(func)


def train_options(func):
    defaults = TrainConfig()
    for name, kind, default in reversed(
        [
            ("--epochs", int, defaults.epochs),
            ("--batch-size", int, defaults.batch_size),
            ("--learning-rate", float, defaults.learning_rate),
            ("--patience", int, defaults.patience),
        ]
    ):
        func = click.option(name, type=kind, default=default, show_default=True)(func)
    func = click.option(
        "--split",
        nargs=3,
        type=float,
        default=defaults.split,
        show_default=True,
        metavar="TRAIN VAL TEST",
    )(func)
    func = click.option(
        "--encoder",
        "encoders",
        multiple=True,
        type=click.Choice(METHODS, case_sensitive=False),
        default=METHODS,
        show_default=True,
    )(func)
    func = click.option(
        "--resolution",
        "-r",
        "resolutions",
        multiple=True,
        type=float,
        default=TABLE_RESOLUTIONS,
        show_default=True,
    )(func)
    func = click.option(
        "--pooling",
        type=click.Choice((POOL, MEAN)),
        default=POOL,
        show_default=True,
        help="How orientation R^2 combines its two predictions.",
    )(func)
    func = click.option("--cores", "-c", default=None, help='"all" or a count.')(func)
    func = click.option("--scale", "-s", type=float, default=None)(func)
    return frame_option(func)


def _frame(frame, default):
    return Frame.from_size(*frame) if frame else default


def _write(out, name, text):
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, name)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logging.info("Wrote %s", path)
    return path


def _write_manifest(out, ctx, started, **extra):
    params = {k: list(v) if isinstance(v, tuple) else v for k, v in ctx.params.items()}
    manifest = {
        "command": ctx.info_name,
        "config": params,
        "seed": ctx.params.get("seed"),
        "version": __version__,
        "timings": {"wall_time": time.perf_counter() - started},
    }
    manifest.update(extra)
    _write(out, "manifest.json", json.dumps(manifest, sort_keys=True, indent=1) + "\n")


def read_geometries(path):
    """``(id, Geometry)`` pairs from a GeoJSON file or a file with one WKT
    geometry per line. Feature ids come from an ``id`` property when
    present, else the feature position."""
    with open(path, "rb") as f:
        data = f.read()

    if data.lstrip()[:1] == b"{":
        return [
            (properties.get("id", str(index)), g)
            for index, (g, properties) in enumerate(parse_geojson(data))
        ]

    items = []
    offset = 0
    for line in data.splitlines(keepends=True):
        start = offset
        offset += len(line)
        if not line.strip():
            continue
        try:
            g = parse_wkt(line)
        except ParseError as e:
            raise ParseError(
                start + e.byte_offset, f"feature {len(items)}: {e.message}", e.expected
            ) from None
        items.append((str(len(items)), g))
    return items


def _read_encodings(path, frame, resolution, scale):
    """Encodings and the MPP configuration they were made with, from an
    ``encode`` JSON document or CSV file."""
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()

    if text.lstrip().startswith("{"):
        document, rows = read_encodings_json(text)
        grid = ReferenceGrid.from_dict(document["grid"])
        method = document.get("method")
        scale = document.get("scale") if scale is None else scale
    else:
        if frame is None or resolution is None:
            raise click.UsageError("CSV encodings need --frame and --resolution.")
        grid, _ = make_grids(Frame.from_size(*frame), resolution)
        rows = read_encodings_csv(text, grid.grid_id)
        method = None

    rows = [
        (ident, densify(e) if isinstance(e, SparseEncoding) else e)
        for ident, e in rows
    ]
    return rows, grid, method, scale


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, exists=True),
    default=None,
    help="JSON configuration file.",
)
@click.option("--verbose", "-v", is_flag=True, help="Log debugging output.")
@click.version_option(__version__)
@click.pass_context
def mppencode(ctx, config_path, verbose):
    """Multi-point proximity and discrete indicator vector encodings of
    vector geometries."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT
    )
    ctx.default_map = default_map(load_config(config_path), list(mppencode.commands))


@mppencode.command()
@click.argument(
    "input_path", required=False, type=click.Path(dir_okay=False, exists=True)
)
@grid_options
@click.option(
    "--method", "-m", type=click.Choice(METHODS, case_sensitive=False), default=MPP
)
@click.option(
    "--threshold",
    "-t",
    type=float,
    default=None,
    help="Write sparse encodings dropping values below this.",
)
@click.option("--demo", is_flag=True, help="Encode the demo point, line and polygon.")
@run_options
@click.pass_context
def encode(
    ctx, input_path, frame, resolution, scale, method, threshold, demo, seed, out
):
    """Encodes every geometry of INPUT_PATH (GeoJSON, or WKT one per line)."""
    started = time.perf_counter()
    if demo:
        items = demo_shapes()
        default_frame, resolution = DEMO_FRAME, resolution or DEMO_RESOLUTION
        if method.lower() == MPP and scale is None:
            scale = DEMO_SCALE
    elif input_path is None:
        raise click.UsageError("Give INPUT_PATH or --demo.")
    else:
        items = read_geometries(input_path)
        default_frame = Frame.from_size(*DEFAULT_FRAME)

    encoder = make_encoder(
        method, _frame(frame, default_frame), resolution or DEFAULT_RESOLUTION, scale
    )
    rows = [(ident, encoder.encode(g)) for ident, g in items]
    used_scale = encoder.config.s if encoder.method == MPP else None

    if threshold is None:
        _write(out, "encodings.csv", encodings_to_csv(rows))
        document = encodings_to_json(rows, encoder.grid, encoder.method, used_scale)
    else:
        rows = [(ident, sparsify(e, threshold)) for ident, e in rows]
        document = encodings_to_json(
            rows, encoder.grid, encoder.method, used_scale, sparse=True
        )
    _write(out, "encodings.json", document)
    _write_manifest(out, ctx, started, grid_id=encoder.grid_id, count=len(rows))
    click.echo(f"Encoded {len(rows)} geometries into {encoder.size} elements each.")


@mppencode.command("decode-point")
@click.argument("encodings_path", type=click.Path(dir_okay=False, exists=True))
@grid_options
@click.option("--tolerance", type=float, default=DECODE_TOLERANCE, show_default=True)
@run_options
@click.pass_context
def decode_point_command(
    ctx, encodings_path, frame, resolution, scale, tolerance, seed, out
):
    """Recovers point coordinates from MPP encodings of points."""
    started = time.perf_counter()
    rows, grid, method, scale = _read_encodings(
        encodings_path, frame, resolution, scale
    )
    if method == DIV:
        raise click.UsageError("Points can only be decoded from MPP encodings.")
    cfg = MppConfig(grid, scale)

    points, failures = [], []
    max_residual = 0.0
    for ident, encoding in rows:
        try:
            point, residual = decode_point_residual(encoding, cfg)
            if residual > tolerance:
                raise InconsistentEncoding(
                    f"residual {residual:.3g} exceeds {tolerance:g}", residual
                )
        except ValueError as e:
            logging.warning("Row %s: %s", ident, e)
            failures.append({"id": ident, "error": str(e)})
            continue
        max_residual = max(max_residual, residual)
        points.append((Geometry.point(*point), {"id": ident, "residual": residual}))

    _write(out, "points.geojson", write_geojson(points))
    if failures:
        _write(out, "errors.json", json.dumps(failures, indent=1) + "\n")
    _write_manifest(
        out,
        ctx,
        started,
        decoded=len(points),
        failed=len(failures),
        max_residual=max_residual,
    )
    click.echo(
        f"Decoded {len(points)} points, {len(failures)} failed; "
        f"max residual {max_residual:.3g}."
    )
    if failures:
        ctx.exit(DATA_EXIT)


@mppencode.command()
@click.argument(
    "encodings_path", required=False, type=click.Path(dir_okay=False, exists=True)
)
@grid_options
@click.option("--eps", type=float, default=0.6, show_default=True)
@click.option("--min-pts", type=int, default=2, show_default=True)
@run_options
@click.pass_context
def cluster(ctx, encodings_path, frame, resolution, scale, eps, min_pts, seed, out):
    """DBSCAN over encodings; without ENCODINGS_PATH the demo shapes are
    encoded with MPP and clustered."""
    started = time.perf_counter()
    if encodings_path is None:
        encoder = make_encoder(
            MPP,
            _frame(frame, CLUSTER_FRAME),
            resolution or CLUSTER_RESOLUTION,
            CLUSTER_SCALE if scale is None else scale,
        )
        shapes = cluster_shapes()
        rows = [
            (f"{i}:{group}", encoder.encode(g)) for i, (group, g) in enumerate(shapes)
        ]
    else:
        rows, _, _, _ = _read_encodings(encodings_path, frame, resolution, scale)

    labels = dbscan([e for _, e in rows], DbscanParams(eps, min_pts))
    text = "id,label\n" + "".join(
        f"{ident},{label}\n" for (ident, _), label in zip(rows, labels)
    )
    _write(out, "labels.csv", text)
    _write_manifest(out, ctx, started, n_clusters=labels.n_clusters)
    click.echo(f"{labels.n_clusters} clusters")


@mppencode.command()
@frame_option
@click.option("--resolution", "-r", type=float, default=None)
@click.option("--scale", "-s", type=float, default=None)
@click.option(
    "--path",
    "path_wkt",
    default=None,
    help="LineString WKT to follow; defaults to the demo trajectory.",
)
@click.option("--steps", type=int, default=TRAJECTORY_STEPS, show_default=True)
@run_options
@click.pass_context
def continuity(ctx, frame, resolution, scale, path_wkt, steps, seed, out):
    """Encodes a point moving along a path and counts distinct encodings."""
    started = time.perf_counter()
    path = parse_wkt(path_wkt) if path_wkt else trajectory_path()
    if path.kind != LINESTRING:
        raise click.BadParameter("the path must be a LINESTRING", param_hint="--path")
    frame = _frame(frame, TRAJECTORY_FRAME)
    resolution = resolution or TRAJECTORY_RESOLUTION
    mpp = make_encoder(MPP, frame, resolution, scale)
    div = make_encoder(DIV, frame, resolution)
    result = trajectory_encodings(path, steps, mpp, div)

    grid_id = mpp.grid_id
    for name, matrix in (("mpp", result.mpp), ("div", result.div)):
        rows = [(str(i), DenseEncoding(v, grid_id)) for i, v in enumerate(matrix)]
        _write(out, f"continuity_{name}.csv", encodings_to_csv(rows))
    summary = {
        "steps": steps,
        "mpp_unique": result.mpp_unique,
        "div_unique": result.div_unique,
        "tile_sets_unique": result.tile_sets_unique,
        "max_lipschitz_excess": result.max_lipschitz_excess,
    }
    _write(out, "summary.json", json.dumps(summary, sort_keys=True, indent=1) + "\n")
    _write_manifest(out, ctx, started, summary=summary)
    click.echo(
        f"mpp_unique={result.mpp_unique} div_unique={result.div_unique} "
        f"tile_sets={result.tile_sets_unique}"
    )


def _corpus_spec(frame, lines, polygons, seed):
    return CorpusSpec(
        frame=_frame(frame, Frame.from_size(*DEFAULT_FRAME)),
        n_lines=lines,
        n_polygons=polygons,
        seed=seed,
    )


def _pairs(spec, relations, n_pairs, seed):
    samples = []
    for index, kind in enumerate(relations):
        n_true = n_pairs // 2
        rng = np.random.default_rng(cell_seed(seed, index))
        samples.extend(generate_pairs(kind, n_true, n_pairs - n_true, spec, rng))
    return samples


@mppencode.command("gen-corpus")
@frame_option
@click.option("--lines", type=int, default=4000, show_default=True)
@click.option("--polygons", type=int, default=4000, show_default=True)
@click.option(
    "--pairs",
    "n_pairs",
    type=int,
    default=0,
    show_default=True,
    help="Balanced pairs per relation to generate as well.",
)
@click.option(
    "--relation", "relations", multiple=True, type=click.Choice(RELATION_TASKS)
)
@run_options
@click.pass_context
def gen_corpus(ctx, frame, lines, polygons, n_pairs, relations, seed, out):
    """Writes a synthetic property corpus, and optionally relation pairs, as
    GeoJSON."""
    started = time.perf_counter()
    spec = _corpus_spec(frame, lines, polygons, seed)
    samples = generate_corpus(spec)
    _write(out, "corpus.geojson", write_corpus(samples))
    if n_pairs:
        pairs = _pairs(spec, relations or RELATION_TASKS, n_pairs, seed)
        _write(out, "pairs.geojson", write_pairs(pairs))
    _write_manifest(out, ctx, started, corpus=spec.to_dict())
    click.echo(f"Generated {len(samples)} shapes.")


def _train_config(split, epochs, batch_size, learning_rate, patience, seed):
    return TrainConfig(
        split=split,
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        patience=patience,
        seed=seed,
    )


def _write_report(out, ctx, started, report, title):
    _write(out, "report.csv", report.to_csv())
    _write(out, "report.svg", report.to_svg(title))
    _write_manifest(out, ctx, started, report=report.manifest())
    for row in report:
        click.echo(f"{row.encoder}\t{row.resolution:g}\t{row.task}\t{row.value:.4f}")


@mppencode.command("eval-properties")
@click.option(
    "--corpus",
    "corpus_path",
    type=click.Path(dir_okay=False, exists=True),
    default=None,
    help="GeoJSON corpus; generated when omitted.",
)
@click.option("--lines", type=int, default=4000, show_default=True)
@click.option("--polygons", type=int, default=4000, show_default=True)
@click.option("--task", "tasks", multiple=True, type=click.Choice(tuple(TASKS)))
@train_options
@run_options
@click.pass_context
def eval_properties(
    ctx,
    corpus_path,
    lines,
    polygons,
    tasks,
    frame,
    scale,
    cores,
    pooling,
    resolutions,
    encoders,
    split,
    epochs,
    batch_size,
    learning_rate,
    patience,
    seed,
    out,
):
    """Trains probes estimating shape properties from encodings."""
    started = time.perf_counter()
    spec = _corpus_spec(frame, lines, polygons, seed)
    if corpus_path:
        with open(corpus_path, "rb") as f:
            samples = read_corpus(f.read())
    else:
        samples = generate_corpus(spec)

    tasks = tasks or tuple(TASKS)
    matrix = ExperimentMatrix(encoders, resolutions, tasks, spec.frame, scale)
    train_cfg = _train_config(split, epochs, batch_size, learning_rate, patience, seed)
    report = run_experiment(matrix, samples, train_cfg, cores, pooling)
    _write_report(out, ctx, started, report, "Property estimation")


@mppencode.command("eval-pairwise")
@click.option(
    "--pairs",
    "pairs_path",
    type=click.Path(dir_okay=False, exists=True),
    default=None,
    help="GeoJSON pairs file; generated when omitted.",
)
@click.option(
    "--n-pairs",
    type=int,
    default=4000,
    show_default=True,
    help="Balanced pairs generated per relation.",
)
@click.option(
    "--relation", "relations", multiple=True, type=click.Choice(RELATION_TASKS)
)
@train_options
@run_options
@click.pass_context
def eval_pairwise(
    ctx,
    pairs_path,
    n_pairs,
    relations,
    frame,
    scale,
    cores,
    pooling,
    resolutions,
    encoders,
    split,
    epochs,
    batch_size,
    learning_rate,
    patience,
    seed,
    out,
):
    """Trains probes classifying pairwise spatial relations from
    concatenated encodings."""
    started = time.perf_counter()
    relations = relations or RELATION_TASKS
    spec = _corpus_spec(frame, 0, 0, seed)
    if pairs_path:
        with open(pairs_path, "rb") as f:
            samples = read_pairs(f.read())
    else:
        samples = _pairs(spec, relations, n_pairs, seed)

    matrix = ExperimentMatrix(encoders, resolutions, relations, spec.frame, scale)
    train_cfg = _train_config(split, epochs, batch_size, learning_rate, patience, seed)
    report = run_experiment(matrix, samples, train_cfg, cores, pooling)
    _write_report(out, ctx, started, report, "Pairwise relations")


def main(argv=None):
    """Console entry point; returns the process exit code: 1 for usage
    errors, 2 for bad data and 3 for internal failures."""
    try:
        code = mppencode.main(args=argv, prog_name="mppencode", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return USAGE_EXIT
    except click.ClickException as e:
        e.show()
        return USAGE_EXIT
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        return DATA_EXIT
    except Exception:
        logging.exception("Internal error")
        return INTERNAL_EXIT
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
