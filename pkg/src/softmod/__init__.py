"""Adaptive attributed-graph community detection by soft-modularity optimization.

The pipeline: Louvain pre-detection fixes the number of communities through a
size-threshold filter; a single graph-convolution layer embeds the nodes;
community centers are means of member embeddings; a temperature softmax over
node-center similarities yields a row-stochastic membership matrix; and the
encoder weights are trained to maximize a differentiable soft modularity.
"""

from .data import (
    DatasetBundle,
    SbmSpec,
    generate_sbm,
    load_dataset,
    read_edges,
    read_features,
    read_labels,
    write_edges,
    write_features,
    write_labels,
    write_results,
)
from .encoder import build_propagation, encode, init_weights, l2_normalize
from .errors import DataError, NumericalError
from .graph import AttributedGraph, Partition, build_graph, modularity_hard
from .membership import (
    SoftModularityValue,
    compute_centers,
    hard_assign,
    similarity,
    soft_assign,
    soft_modularity,
)
from .metrics import acc, ari, contingency, dbi, f1, nmi, optimal_mapping
from .predetect import FilterResult, filter_communities, louvain_detect
from .training import (
    AdamState,
    EvalRecord,
    TrainConfig,
    TrainHistory,
    adam_step,
    check_gradient,
    loss_and_grad,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AttributedGraph", "Partition", "build_graph", "modularity_hard",
    "FilterResult", "louvain_detect", "filter_communities",
    "build_propagation", "init_weights", "encode", "l2_normalize",
    "SoftModularityValue", "compute_centers", "similarity", "soft_assign",
    "hard_assign", "soft_modularity",
    "TrainConfig", "AdamState", "EvalRecord", "TrainHistory",
    "loss_and_grad", "adam_step", "train", "check_gradient",
    "contingency", "optimal_mapping", "nmi", "acc", "f1", "ari", "dbi",
    "DatasetBundle", "SbmSpec", "load_dataset", "generate_sbm",
    "read_edges", "read_features", "read_labels",
    "write_edges", "write_features", "write_labels", "write_results",
    "DataError", "NumericalError",
]
