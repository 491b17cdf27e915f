"""
School-level edge sets and aggregated School-pair weights.

Researcher-pair quantities are lifted to Schools through the researcher x
School membership matrix M: for a symmetric researcher matrix W the ordered
double sum is ``M.T @ W @ M``. Every unordered researcher pair contributes
once to each unordered School pair it spans, so pairs of researchers who
are both affiliated with the same two Schools are counted once, not twice.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional, Union

import numpy as np
import scipy.sparse as sp

from schoolink.engine.errors import ValidationError
from schoolink.ingest.corpus import Corpus
from schoolink.network.core import CoauthorGraph, IncidenceGraph
from schoolink.network.similarity import (
    PairScore,
    ScoreFamily,
    ScoreKind,
    ScoreMatrix,
    score_matrix,
)

logger = logging.getLogger(__name__)

SchoolPair = tuple[str, str]


def school_pair(k: str, l: str) -> SchoolPair:
    """Canonical unordered pair (k < l); self-pairs are rejected."""
    if k == l:
        raise ValidationError(f"school pair needs two distinct schools, got {k!r} twice")
    return (k, l) if k < l else (l, k)


@dataclass(frozen=True)
class SchoolEdgeSet:
    """Unordered School pairs such as E^train, E^test, E^new or E^pred."""

    pairs: frozenset[SchoolPair] = frozenset()

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, str]]) -> SchoolEdgeSet:
        return cls(frozenset(school_pair(k, l) for k, l in pairs))

    def __iter__(self) -> Iterator[SchoolPair]:
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        if not isinstance(pair, tuple) or len(pair) != 2 or pair[0] == pair[1]:
            return False
        return school_pair(*pair) in self.pairs

    def __or__(self, other: SchoolEdgeSet) -> SchoolEdgeSet:
        return SchoolEdgeSet(self.pairs | other.pairs)

    def __and__(self, other: SchoolEdgeSet) -> SchoolEdgeSet:
        return SchoolEdgeSet(self.pairs & other.pairs)

    def __sub__(self, other: SchoolEdgeSet) -> SchoolEdgeSet:
        return SchoolEdgeSet(self.pairs - other.pairs)

    def issubset(self, other: Iterable[SchoolPair]) -> bool:
        return self.pairs <= set(other)

    @property
    def schools(self) -> frozenset[str]:
        return frozenset(s for pair in self.pairs for s in pair)


@dataclass(frozen=True, eq=False)
class SchoolWeights:
    """
    Symmetric School x School weights w_kl.

    ``values`` is indexed by ``schools`` (sorted); the diagonal is zero and
    pairs absent from the matrix weigh 0.
    """

    schools: tuple[str, ...]
    values: np.ndarray
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {s: k for k, s in enumerate(self.schools)})

    def get(self, k: str, l: str) -> float:
        """w_kl; 0 for unknown schools."""
        a, b = self.index.get(k), self.index.get(l)
        if a is None or b is None or a == b:
            return 0.0
        return float(self.values[a, b])

    def __getitem__(self, pair: tuple[str, str]) -> float:
        return self.get(*pair)

    def items(self) -> Iterator[tuple[SchoolPair, float]]:
        """Positive-weight pairs in school order."""
        rows, cols = np.nonzero(np.triu(self.values, k=1) > 0)
        for a, b in zip(rows.tolist(), cols.tolist()):
            yield (self.schools[a], self.schools[b]), float(self.values[a, b])

    def positive(self) -> list[float]:
        return [w for _, w in self.items()]

    def scaled(self, factor: float) -> SchoolWeights:
        return SchoolWeights(self.schools, self.values * factor)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["school_k", "school_l", "weight"])
        for (k, l), w in self.items():
            writer.writerow([k, l, repr(w)])
        return buf.getvalue()


class DistanceGate:
    """
    Geodesic gate of the bipartite aggregation.

    ``limit`` is ``None`` (NA: no gate), ``math.inf`` (reachable pairs only)
    or a positive integer d (pairs with g < d).
    """

    __slots__ = ("limit",)

    def __init__(self, limit: Optional[Union[int, float]] = None):
        if limit is not None and not math.isinf(limit):
            if isinstance(limit, bool) or int(limit) != limit or limit < 1:
                raise ValidationError(f"distance gate must be NA, inf or a positive integer, got {limit!r}")
            limit = int(limit)
        elif limit is not None:
            limit = math.inf
        self.limit = limit

    @classmethod
    def parse(cls, value: Union[str, int, float, None, DistanceGate]) -> DistanceGate:
        """Accept ``NA``/``None``, ``inf``/``∞`` or an integer."""
        if isinstance(value, DistanceGate):
            return value
        if value is None:
            return cls(None)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return cls(value)
        text = str(value).strip().lower()
        if text in ("na", "none", ""):
            return cls(None)
        if text in ("inf", "infinity", "∞"):
            return cls(math.inf)
        try:
            return cls(int(text))
        except ValueError:
            raise ValidationError(f"cannot parse distance gate {value!r}", "use NA, inf or an integer") from None

    @property
    def is_off(self) -> bool:
        return self.limit is None

    def mask(self, distances: np.ndarray) -> np.ndarray:
        """1.0 where a pair at the given hop distance passes the gate."""
        if self.limit is None:
            return np.ones_like(distances, dtype=np.float64)
        if math.isinf(self.limit):
            return np.isfinite(distances).astype(np.float64)
        return (distances < self.limit).astype(np.float64)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DistanceGate) and self.limit == other.limit

    def __hash__(self) -> int:
        return hash(self.limit)

    def __str__(self) -> str:
        if self.limit is None:
            return "NA"
        if math.isinf(self.limit):
            return "inf"
        return str(self.limit)

    def __repr__(self) -> str:
        return f"DistanceGate({self})"


# ============================================================================
# Membership and the School-level double sum
# ============================================================================

def membership_matrix(corpus: Corpus) -> tuple[tuple[str, ...], sp.csr_matrix]:
    """Sorted school codes and the researcher x School 0/1 matrix M."""
    schools = tuple(sorted(corpus.schools))
    sindex = {s: k for k, s in enumerate(schools)}
    rows: list[int] = []
    cols: list[int] = []
    for i, rid in enumerate(corpus.researcher_ids):
        for s in corpus.researchers[rid].schools:
            rows.append(i)
            cols.append(sindex[s])
    M = sp.coo_matrix(
        (np.ones(len(rows), dtype=np.float64), (rows, cols)),
        shape=(len(corpus.researcher_ids), len(schools)),
    ).tocsr()
    return schools, M


def aggregate_matrix(values: Union[np.ndarray, sp.spmatrix], corpus: Corpus) -> tuple[tuple[str, ...], np.ndarray]:
    """
    Sum a symmetric researcher-pair matrix over School pairs.

    Off-diagonal entries hold the unordered-pair sum of cross-School pairs;
    the diagonal holds the intra-School sum. The researcher diagonal of
    ``values`` is ignored.
    """
    schools, M = membership_matrix(corpus)
    W = sp.csr_matrix(values, dtype=np.float64)
    W = (W - sp.diags(W.diagonal())).tocsr()
    U = np.asarray((M.T @ W @ M).toarray(), dtype=np.float64)

    diagonal = np.diag(U) / 2.0
    _correct_shared_affiliations(U, W, corpus, schools)
    np.fill_diagonal(U, diagonal)
    return schools, U


def _correct_shared_affiliations(
    U: np.ndarray, W: sp.csr_matrix, corpus: Corpus, schools: tuple[str, ...]
) -> None:
    """Remove the second count of pairs whose researchers both sit in k and l."""
    sindex = {s: k for k, s in enumerate(schools)}
    multi = [
        i for i, rid in enumerate(corpus.researcher_ids)
        if len(corpus.researchers[rid].schools) > 1
    ]
    for i, j in combinations(multi, 2):
        w = W[i, j]
        if not w:
            continue
        shared = corpus.researchers[corpus.researcher_ids[i]].schools & corpus.researchers[corpus.researcher_ids[j]].schools
        for k, l in combinations(sorted(sindex[s] for s in shared), 2):
            U[k, l] -= w
            U[l, k] -= w


def _cross_school(schools: tuple[str, ...], U: np.ndarray) -> SchoolWeights:
    values = U.copy()
    np.fill_diagonal(values, 0.0)
    # float cancellation from the shared-affiliation correction
    values[np.abs(values) < 1e-12] = 0.0
    return SchoolWeights(schools, values)


# ============================================================================
# Edge sets
# ============================================================================

def school_edges(g: CoauthorGraph, corpus: Corpus) -> SchoolEdgeSet:
    """(k, l) for every joint publication between a k researcher and an l researcher, k != l."""
    _check_cohort(g.researcher_ids, corpus)
    schools, U = aggregate_matrix(g.pattern, corpus)
    rows, cols = np.nonzero(np.triu(U, k=1) > 0)
    edges = SchoolEdgeSet(frozenset((schools[a], schools[b]) for a, b in zip(rows.tolist(), cols.tolist())))
    logger.debug("School network: %d schools, %d edges", len(schools), len(edges))
    return edges


def new_edges(train: SchoolEdgeSet, test: SchoolEdgeSet) -> SchoolEdgeSet:
    """E^new = E^test minus E^train."""
    return test - train


def candidate_pairs(train: SchoolEdgeSet, schools: Iterable[str]) -> set[SchoolPair]:
    """Unordered School pairs with no training collaboration."""
    return {pair for pair in combinations(sorted(set(schools)), 2) if pair not in train.pairs}


# ============================================================================
# Aggregation
# ============================================================================

def aggregate_coauthor(scores: Union[ScoreMatrix, Iterable[PairScore]], corpus: Corpus) -> SchoolWeights:
    """w_kl = sum of w0_ij over researcher pairs spanning k and l."""
    values = _score_values(scores, len(corpus.researcher_ids))
    schools, U = aggregate_matrix(values, corpus)
    return _cross_school(schools, U)


def aggregate_bipartite(
    sigma: Union[ScoreMatrix, Callable[[int, int], float]],
    g: CoauthorGraph,
    corpus: Corpus,
    gate: Union[DistanceGate, str, int, float, None] = None,
) -> SchoolWeights:
    """
    w_kl = sum of sigma(i, i') * gate(g_ii') over researcher pairs spanning k and l.

    ``sigma`` is a score matrix or a function of two researcher indices.
    Directly collaborating pairs pass every gate.
    """
    _check_cohort(g.researcher_ids, corpus)
    gate = DistanceGate.parse(gate)
    if isinstance(sigma, ScoreMatrix):
        values = sigma.values
    else:
        values = np.zeros((g.n, g.n))
        for i, j in combinations(range(g.n), 2):
            values[i, j] = values[j, i] = sigma(i, j)
    if not gate.is_off:
        values = values * gate.mask(g.distance_matrix())
    schools, U = aggregate_matrix(values, corpus)
    return _cross_school(schools, U)


def school_weights(
    kind: Union[ScoreKind, str],
    g: CoauthorGraph,
    inc: IncidenceGraph,
    corpus: Corpus,
    gate: Union[DistanceGate, str, int, float, None] = None,
) -> SchoolWeights:
    """Score every researcher pair with ``kind`` and aggregate to Schools."""
    if not isinstance(kind, ScoreKind):
        kind = ScoreKind.parse(kind)
    scores = score_matrix(kind, g, inc)
    if kind.family is ScoreFamily.COAUTHOR:
        if gate is not None and not DistanceGate.parse(gate).is_off:
            logger.debug("Distance gate %s ignored for co-authorship score %s", gate, kind.value)
        weights = aggregate_coauthor(scores, corpus)
    else:
        weights = aggregate_bipartite(scores, g, corpus, gate)
    logger.info("%s: %d positive school-pair weights", kind.value, len(weights.positive()))
    return weights


def _score_values(scores: Union[ScoreMatrix, Iterable[PairScore]], n: int) -> np.ndarray:
    if isinstance(scores, ScoreMatrix):
        return scores.values
    values = np.zeros((n, n))
    for s in scores:
        if s.i == s.j:
            raise ValidationError(f"pair score on a single researcher {s.i}")
        values[s.i, s.j] = values[s.j, s.i] = s.value
    return values


def _check_cohort(researcher_ids: tuple[str, ...], corpus: Corpus) -> None:
    if researcher_ids != corpus.researcher_ids:
        raise ValidationError("graph and corpus have different researcher cohorts")
