"""
Shared state of one train/test split.

Graphs, School edge sets, score matrices, aggregated weights and the
community dendrogram are built on first use and memoised, so the single
runs and the sweep share them. Memo entries are guarded per key, which
lets sweep rows run on worker threads.
"""

from __future__ import annotations

import logging
import threading
from typing import Any, Callable, Optional, TypeVar, Union

from schoolink.engine.community import (
    Dendrogram,
    SchoolGraph,
    build_school_graph,
    cut,
    greedy_modularity,
    predict_from_partition,
)
from schoolink.engine.predictor import Prediction, ThresholdRule, predict
from schoolink.ingest.corpus import YearSplit
from schoolink.network.core import (
    CoauthorGraph,
    IncidenceGraph,
    build_coauthor_graph,
    build_incidence_graph,
)
from schoolink.network.school import (
    DistanceGate,
    SchoolEdgeSet,
    SchoolPair,
    SchoolWeights,
    aggregate_bipartite,
    aggregate_coauthor,
    candidate_pairs,
    new_edges,
    school_edges,
    school_weights,
)
from schoolink.network.similarity import ScoreFamily, ScoreKind, ScoreMatrix, score_matrix

logger = logging.getLogger(__name__)

T = TypeVar("T")

GateLike = Union[DistanceGate, str, int, float, None]


class SplitContext:
    """Everything derived from one YearSplit, computed lazily."""

    def __init__(self, split: YearSplit, max_workers: Optional[int] = None):
        self.split = split
        self.max_workers = max_workers
        self._memo: dict[Any, Any] = {}
        self._locks: dict[Any, threading.Lock] = {}
        self._guard = threading.Lock()

    def _get(self, key: Any, factory: Callable[[], T]) -> T:
        with self._guard:
            if key in self._memo:
                return self._memo[key]
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._memo:
                value = factory()
                with self._guard:
                    self._memo[key] = value
        return self._memo[key]

    # ------------------------------------------------------------------
    # Step 1: graphs and edge sets
    # ------------------------------------------------------------------

    @property
    def train_graph(self) -> CoauthorGraph:
        return self._get("train_graph", lambda: build_coauthor_graph(self.split.train))

    @property
    def test_graph(self) -> CoauthorGraph:
        return self._get("test_graph", lambda: build_coauthor_graph(self.split.test))

    @property
    def incidence(self) -> IncidenceGraph:
        return self._get("incidence", lambda: build_incidence_graph(self.split.train))

    @property
    def test_incidence(self) -> IncidenceGraph:
        return self._get("test_incidence", lambda: build_incidence_graph(self.split.test))

    @property
    def train_edges(self) -> SchoolEdgeSet:
        return self._get("train_edges", lambda: school_edges(self.train_graph, self.split.train))

    @property
    def test_edges(self) -> SchoolEdgeSet:
        return self._get("test_edges", lambda: school_edges(self.test_graph, self.split.test))

    @property
    def new_edges(self) -> SchoolEdgeSet:
        def build() -> SchoolEdgeSet:
            edges = new_edges(self.train_edges, self.test_edges)
            logger.info(
                "E^train %d, E^test %d, E^new %d",
                len(self.train_edges), len(self.test_edges), len(edges),
            )
            return edges

        return self._get("new_edges", build)

    @property
    def candidates(self) -> set[SchoolPair]:
        return self._get(
            "candidates", lambda: candidate_pairs(self.train_edges, self.split.train.schools)
        )

    def prepare(self) -> None:
        """Build the shared graphs and all hop distances up front."""
        self.train_graph.distance_matrix(self.max_workers)
        _ = self.incidence, self.new_edges, self.candidates

    # ------------------------------------------------------------------
    # Step 2: scores and weights
    # ------------------------------------------------------------------

    def scores(self, kind: ScoreKind) -> ScoreMatrix:
        return self._get(("scores", kind), lambda: score_matrix(kind, self.train_graph, self.incidence))

    def weights(self, kind: Union[ScoreKind, str], gate: GateLike = None) -> SchoolWeights:
        """School weights for ``kind``; the gate only applies to journal-based scores."""
        if not isinstance(kind, ScoreKind):
            kind = ScoreKind.parse(kind)
        if kind.family is ScoreFamily.COAUTHOR:
            return self._get(
                ("weights", kind, None),
                lambda: aggregate_coauthor(self.scores(kind), self.split.train),
            )
        gate = DistanceGate.parse(gate)
        return self._get(
            ("weights", kind, gate),
            lambda: aggregate_bipartite(self.scores(kind), self.train_graph, self.split.train, gate),
        )

    def test_weights(self, kind: Union[ScoreKind, str], gate: GateLike = None) -> SchoolWeights:
        """The same School weights computed on the test half; colours the realised new links."""
        if not isinstance(kind, ScoreKind):
            kind = ScoreKind.parse(kind)
        gate = None if kind.family is ScoreFamily.COAUTHOR else DistanceGate.parse(gate)
        return self._get(
            ("test_weights", kind, gate),
            lambda: school_weights(kind, self.test_graph, self.test_incidence, self.split.test, gate),
        )

    # ------------------------------------------------------------------
    # Step 3 and the baseline
    # ------------------------------------------------------------------

    def predict(self, kind: Union[ScoreKind, str], rule: ThresholdRule, gate: GateLike = None) -> Prediction:
        return predict(self.weights(kind, gate), self.train_edges, rule)

    @property
    def school_graph(self) -> SchoolGraph:
        return self._get("school_graph", lambda: build_school_graph(self.train_graph, self.split.train))

    @property
    def dendrogram(self) -> Dendrogram:
        return self._get("dendrogram", lambda: greedy_modularity(self.school_graph))

    def baseline(self, n: int) -> SchoolEdgeSet:
        return predict_from_partition(cut(self.dendrogram, n), self.train_edges)
