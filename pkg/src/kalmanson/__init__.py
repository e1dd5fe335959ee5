"""Circular split systems, Kalmanson metrics and circular-ones matrices."""
from ._accel import BACKEND
from .consecutive_ones import (
    RowClass,
    TuckerConfig,
    complement_rows_by_first_column,
    contains_configuration,
    is_c1r,
    is_circ1r,
    rowclass_to_splits,
    splits_to_rowclass,
    tucker_config_matrix,
)
from .enumeration import (
    FVector,
    count_F03,
    facets,
    fvector_bruteforce,
    fvector_formulas,
    stirling2,
    surjections,
    triangles,
    triangles_bruteforce,
)
from .geometry import (
    Decomposition,
    Metric,
    RayMatrix,
    Tour,
    decompose,
    is_kalmanson,
    is_kalmanson_under,
    ray_matrix,
    ray_to_split,
    recognize,
    tsp_bruteforce,
    tsp_kalmanson,
)
from .splits import (
    CircularOrdering,
    Split,
    SplitSystem,
    circular_closure,
    is_circular,
    is_circular_exhaustive,
    is_weakly_compatible,
    join,
    make_split,
    split_from_metric,
    split_metric,
)

__version__ = "0.1.0"
