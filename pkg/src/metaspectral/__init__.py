"""Spectral clustering with fewer than k eigenvectors, meta-graph analysis and
numerical checks of the accompanying structure bounds."""
from .eigen import EigenPairs, bottom_eigenpairs
from .errors import MetaSpectralError
from .generators import MetaTemplate, meta_template, parse_template, sbm_meta
from .graph import (WeightedGraph, build_graph, conductance, k_way_expansion_bruteforce,
                    normalized_laplacian)
from .kmeans import KMeansResult, kmeans, kmeans_cost
from .metagraph import (MetaEmbedding, MetaGraph, blow_up, build_meta_graph,
                        distinguishability_theta, meta_embedding, psi, upsilon)
from .metrics import MatchResult, accuracy, optimal_match, pair_indices, symdiff_volume
from .pipeline import Clustering, SpectralEmbedding, spectral_cluster, spectral_embed
from .similarity import FeatureTable, gaussian_graph, knn_graph, read_feature_csv
from .theory import (TheoryReport, center_geometry_report, kmeans_cost_identity,
                     misclassification_bound_check, verify_structure_theorem_k,
                     verify_structure_theorem_meta)

__version__ = "0.1.0"

__all__ = [
    "EigenPairs", "bottom_eigenpairs", "MetaSpectralError", "MetaTemplate", "meta_template",
    "parse_template", "sbm_meta", "WeightedGraph", "build_graph", "conductance",
    "k_way_expansion_bruteforce", "normalized_laplacian", "KMeansResult", "kmeans",
    "kmeans_cost", "MetaEmbedding", "MetaGraph", "blow_up", "build_meta_graph",
    "distinguishability_theta", "meta_embedding", "psi", "upsilon", "MatchResult", "accuracy",
    "optimal_match", "pair_indices", "symdiff_volume", "Clustering", "SpectralEmbedding",
    "spectral_cluster", "spectral_embed", "FeatureTable", "gaussian_graph", "knn_graph",
    "read_feature_csv", "TheoryReport", "center_geometry_report", "kmeans_cost_identity",
    "misclassification_bound_check", "verify_structure_theorem_k",
    "verify_structure_theorem_meta",
]
