"""SPI and GSPI graph kernels for one-cluster vs two-cluster random graphs.

The BFS path-count and Pegasos loops run in a Cython extension when it is
built; otherwise a pure-Python implementation is used (see ``BACKEND``).
"""
from ._backend import BACKEND, available_backends
from .features import (BinningScheme, GspiVector, PathCountOverflow, SourceProfile, SpiVector,
                       SsspResult, average_profiles, gspi_vector, normalize, source_profile,
                       spi_vector, sssp_count)
from .graph import (Graph, GraphLabel, ModelParams, derive_q2, erdos_renyi, planted_partition,
                    read_edge_list, write_edge_list)
from .kernels import FeatureIndex, GramMatrix, gram, k_gspi, k_spi
from .learn import EvalReport, FoldPlan, LinearModel, kfold_eval, pegasos_train, stratified_folds
from .theory import (BinomialLaw, InclusionExclusionEstimate, MixtureModel, SpiExpectationBounds,
                     inclusion_exclusion_estimate, one_cluster_d2_prediction, peak_separation,
                     spi_expected_bounds, theorem1_factor, two_cluster_d2_prediction)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "available_backends",
    "Graph", "GraphLabel", "ModelParams", "derive_q2", "erdos_renyi", "planted_partition",
    "read_edge_list", "write_edge_list",
    "BinningScheme", "SpiVector", "GspiVector", "SsspResult", "SourceProfile", "PathCountOverflow",
    "sssp_count", "spi_vector", "gspi_vector", "source_profile", "average_profiles", "normalize",
    "FeatureIndex", "GramMatrix", "gram", "k_spi", "k_gspi",
    "LinearModel", "FoldPlan", "EvalReport", "pegasos_train", "stratified_folds", "kfold_eval",
    "SpiExpectationBounds", "BinomialLaw", "MixtureModel", "InclusionExclusionEstimate",
    "spi_expected_bounds", "theorem1_factor", "one_cluster_d2_prediction",
    "two_cluster_d2_prediction", "peak_separation", "inclusion_exclusion_estimate",
]
