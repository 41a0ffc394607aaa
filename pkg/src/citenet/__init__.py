"""citenet: citation-network analysis toolkit.

Pipeline: load a document corpus, build a citation network from seed
keyword matches, detect map-equation communities, extract per-community
keywords and document-type profiles, measure topology (degrees,
clustering, betweenness, path lengths), and track temporal evolution.
A synthetic-corpus generator provides planted ground truth for
benchmarks and acceptance runs.
"""

from .corpus import (Corpus, DocType, Document, LoadReport, Query,
                     load_corpus, matches_query, save_corpus, select_seeds,
                     tokenize)
from .errors import (CitenetError, ConvergenceError, CorpusError,
                     EmptyResultError, GraphError, NoSeedMatchesError,
                     SynthError)
from .graph import (BuildTrace, CitationGraph, build_network,
                    close_expanded_edges, expand_with_references, full_graph,
                    largest_weak_component, prune_expanded, seed_graph,
                    weak_components)
from .community import (Codelength, FlowDistribution, Partition, codelength,
                        detect_communities, nmi, stationary_flow)
from .keywords import (STOPWORDS, CommunityProfile, TermStats,
                       community_profiles, score_terms, term_candidates,
                       term_score)
from .metrics import (MeasureReport, ReducedGraph, betweenness, clustering,
                      community_means, compute_measures, degrees,
                      mean_shortest_path, reduce_by_community)
from .temporal import (PathLengthPoint, PublicationSeries, Snapshot,
                       WindowRow, path_length_series, publication_series,
                       snapshot, window_subnetwork)
from .synth import (GroundTruth, SynthSpec, benchmark_spec, desk_spec,
                    generate, write_ground_truth)
from .layout import force_directed_layout

__version__ = "0.1.0"

__all__ = [
    "Corpus", "DocType", "Document", "LoadReport", "Query",
    "load_corpus", "matches_query", "save_corpus", "select_seeds", "tokenize",
    "CitenetError", "ConvergenceError", "CorpusError", "EmptyResultError",
    "GraphError", "NoSeedMatchesError", "SynthError",
    "BuildTrace", "CitationGraph", "build_network", "close_expanded_edges",
    "expand_with_references", "full_graph", "largest_weak_component",
    "prune_expanded", "seed_graph", "weak_components",
    "Codelength", "FlowDistribution", "Partition", "codelength",
    "detect_communities", "nmi", "stationary_flow",
    "STOPWORDS", "CommunityProfile", "TermStats", "community_profiles",
    "score_terms", "term_candidates", "term_score",
    "MeasureReport", "ReducedGraph", "betweenness", "clustering",
    "community_means", "compute_measures", "degrees", "mean_shortest_path",
    "reduce_by_community",
    "PathLengthPoint", "PublicationSeries", "Snapshot", "WindowRow",
    "path_length_series", "publication_series", "snapshot",
    "window_subnetwork",
    "GroundTruth", "SynthSpec", "benchmark_spec", "desk_spec", "generate",
    "write_ground_truth",
    "force_directed_layout",
    "__version__",
]
