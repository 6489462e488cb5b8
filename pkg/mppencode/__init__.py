from mppencode.affine import normalize_to_frame, transform
from mppencode.cluster import ClusterLabels, DbscanParams, dbscan
from mppencode.encoding import (
    DenseEncoding,
    DivEncoder,
    MppConfig,
    MppEncoder,
    SparseEncoding,
    decode_point,
    densify,
    div_encode,
    exclusion_radius,
    exclusion_zones,
    make_encoder,
    mpp_encode,
    sparsify,
)
from mppencode.evaluation.experiment import set_default_cores
from mppencode.geojson import parse_geojson, write_geojson
from mppencode.geometry import AffineTransform, Frame, Geometry, Point2
from mppencode.grid import ReferenceGrid, TileGrid, make_grids
from mppencode.measures import (
    area,
    centroid,
    char_ratio,
    convex_hull,
    farthest_pair,
    length,
    min_distance,
    orientation_angle,
    sinuosity,
)
from mppencode.relations import RelationKind, relation, set_predicate_tolerance
from mppencode.wkt import parse_wkt, write_wkt

__version__ = "0.1.0"
