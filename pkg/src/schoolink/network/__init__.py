"""
Researcher graphs, pair similarity scores and School-level aggregation.
"""

from schoolink.network.core import (
    UNREACHABLE,
    CoauthorGraph,
    IncidenceGraph,
    all_distance2_pairs,
    build_coauthor_graph,
    build_incidence_graph,
    geodesic,
    neighbors,
)
from schoolink.network.school import (
    DistanceGate,
    SchoolEdgeSet,
    SchoolWeights,
    aggregate_bipartite,
    aggregate_coauthor,
    candidate_pairs,
    new_edges,
    school_edges,
    school_weights,
)
from schoolink.network.similarity import (
    BIPARTITE_KINDS,
    COAUTHOR_KINDS,
    PairScore,
    ScoreFamily,
    ScoreKind,
    ScoreMatrix,
    score_matrix,
    score_pair,
)

__all__ = [
    'BIPARTITE_KINDS',
    'COAUTHOR_KINDS',
    'UNREACHABLE',
    'CoauthorGraph',
    'DistanceGate',
    'IncidenceGraph',
    'PairScore',
    'SchoolEdgeSet',
    'SchoolWeights',
    'ScoreFamily',
    'ScoreKind',
    'ScoreMatrix',
    'aggregate_bipartite',
    'aggregate_coauthor',
    'all_distance2_pairs',
    'build_coauthor_graph',
    'build_incidence_graph',
    'candidate_pairs',
    'geodesic',
    'neighbors',
    'new_edges',
    'school_edges',
    'school_weights',
    'score_matrix',
    'score_pair',
]
