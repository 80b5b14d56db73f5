"""Two-phase clustering: a CF-tree pass, then density-based leaf refinement.

Phase 1 summarizes the data into leaf micro-clusters of a height-balanced
clustering-feature tree under a diameter threshold.  Phase 2 fits one
Gaussian per micro-cluster and splits off members whose min-max
normalized density falls below a global threshold.  Supervised validity
measures (entropy, purity, precision, recall) score the result against
class labels.
"""

from .backend import available_backends, default_backend_name, get_kernels
from .cf_tree import (
    CFNode,
    CFTree,
    CFTreeParams,
    CFVector,
    DataPoint,
    MicroCluster,
    build_tree,
    centroid,
    cf_add,
    choose_closest_entry,
    diameter,
    leaf_micro_clusters,
    merge_refine,
    radius,
    split_node,
)
from .dataio import (
    ABALONE_COLUMNS,
    ABALONE_FEATURES,
    ABALONE_LABEL,
    Dataset,
    load_abalone,
    load_csv,
    replicate,
    save_csv,
)
from .errors import CFRefineError, DataError, NumericalError, UsageError
from .gaussian import (
    GaussianModel,
    RefineParams,
    covariance_matrix,
    density,
    fit_gaussian,
    log_densities,
    log_density,
    mean_vector,
    normalize_densities,
    refine,
    split_cluster,
)
from .metrics import (
    ContingencyTable,
    PrecisionRecall,
    build_contingency,
    entropy,
    precision_recall,
    purity,
)
from .pipeline import (
    RunConfig,
    metrics_block,
    run_cluster,
    run_eval,
    run_scale,
    run_sweep,
    sweep_thresholds,
)

__version__ = "0.1.0"

__all__ = [
    "ABALONE_COLUMNS",
    "ABALONE_FEATURES",
    "ABALONE_LABEL",
    "CFNode",
    "CFRefineError",
    "CFTree",
    "CFTreeParams",
    "CFVector",
    "ContingencyTable",
    "DataError",
    "DataPoint",
    "Dataset",
    "GaussianModel",
    "MicroCluster",
    "NumericalError",
    "PrecisionRecall",
    "RefineParams",
    "RunConfig",
    "UsageError",
    "available_backends",
    "build_contingency",
    "build_tree",
    "centroid",
    "cf_add",
    "choose_closest_entry",
    "covariance_matrix",
    "default_backend_name",
    "density",
    "diameter",
    "entropy",
    "fit_gaussian",
    "get_kernels",
    "leaf_micro_clusters",
    "load_abalone",
    "load_csv",
    "log_densities",
    "log_density",
    "mean_vector",
    "merge_refine",
    "metrics_block",
    "normalize_densities",
    "precision_recall",
    "purity",
    "radius",
    "refine",
    "replicate",
    "run_cluster",
    "run_eval",
    "run_scale",
    "run_sweep",
    "save_csv",
    "split_cluster",
    "split_node",
    "sweep_thresholds",
    "__version__",
]
