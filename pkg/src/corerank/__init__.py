"""Coreness-based hierarchy analysis for embedded datasets.

Pipeline: pool spatial features -> build a thresholded cosine-similarity
graph per class -> peel it round by round to get coreness, peeling round,
and the neighborhood rd score -> select tier/fraction subsets -> report
histograms and radial layouts.
"""

__version__ = "0.1.0"

from .analysis import (
    HistogramReport,
    RadialLayout,
    coreness_histogram,
    radial_layout,
    render,
)
from .decomposition import DecompositionResult, core_numbers, decompose
from .embeddings import (
    EmbeddingMatrix,
    RawFeatureTensor,
    load_embeddings,
    partition_by_label,
    pool_spatial,
    pool_to_matrix,
    save_embeddings,
)
from .errors import ConfigurationError, CorerankError, FormatError, ValidationError
from .graph import BuildConfig, SimilarityGraph, build_graph, build_per_class, cosine_similarity
from .selection import Tier, rank_nodes, ranked_ids, select_fraction, select_tier

__all__ = [
    "BuildConfig",
    "ConfigurationError",
    "CorerankError",
    "DecompositionResult",
    "EmbeddingMatrix",
    "FormatError",
    "HistogramReport",
    "RadialLayout",
    "RawFeatureTensor",
    "SimilarityGraph",
    "Tier",
    "ValidationError",
    "build_graph",
    "build_per_class",
    "core_numbers",
    "coreness_histogram",
    "cosine_similarity",
    "decompose",
    "load_embeddings",
    "partition_by_label",
    "pool_spatial",
    "pool_to_matrix",
    "radial_layout",
    "rank_nodes",
    "ranked_ids",
    "render",
    "save_embeddings",
    "select_fraction",
    "select_tier",
]
