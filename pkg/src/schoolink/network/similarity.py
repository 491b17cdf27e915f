"""
Researcher-pair similarity scores w0_ij.

Two families:

- co-authorship scores (``PATH2``, ``COMMON_NEIGHBORS``, ``ORDER2_OVERLAP``,
  ``PATH_WEIGHT_SUM``) read the train co-authorship graph and are nonzero
  exactly for pairs at hop distance 2;
- researcher-journal scores (``JACCARD1``, ``JACCARD2``, ``ADAMIC_ADAR``,
  ``COOC1``, ``COOC2``) read the incidence graph and are not gated here;
  the distance gate is applied when they are aggregated to Schools.

Each score has a per-pair function, which is the reference definition, and
an all-pairs form in ``score_matrix`` built from sparse products.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
import scipy.sparse as sp

from schoolink.engine.errors import ValidationError
from schoolink.network.core import CoauthorGraph, IncidenceGraph


class ScoreFamily(str, enum.Enum):
    COAUTHOR = "coauthor"
    BIPARTITE = "bipartite"


class ScoreKind(str, enum.Enum):
    """Every researcher-pair score the pipeline can run."""

    PATH2 = "path2"
    COMMON_NEIGHBORS = "common_neighbors"
    ORDER2_OVERLAP = "order2_overlap"
    PATH_WEIGHT_SUM = "path_weight_sum"
    JACCARD1 = "jaccard1"
    JACCARD2 = "jaccard2"
    ADAMIC_ADAR = "adamic_adar"
    COOC1 = "cooc1"
    COOC2 = "cooc2"

    @property
    def family(self) -> ScoreFamily:
        if self in COAUTHOR_KINDS:
            return ScoreFamily.COAUTHOR
        return ScoreFamily.BIPARTITE

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, text: str) -> ScoreKind:
        """Accept the value (``cooc1``), the name (``COOC1``) or a letter ``a``-``d``."""
        key = text.strip().lower().replace("-", "_")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValidationError(f"Unknown score kind {text!r}", f"choose one of: {choices}") from None


COAUTHOR_KINDS = (
    ScoreKind.PATH2,
    ScoreKind.COMMON_NEIGHBORS,
    ScoreKind.ORDER2_OVERLAP,
    ScoreKind.PATH_WEIGHT_SUM,
)
BIPARTITE_KINDS = (
    ScoreKind.JACCARD1,
    ScoreKind.JACCARD2,
    ScoreKind.ADAMIC_ADAR,
    ScoreKind.COOC1,
    ScoreKind.COOC2,
)

_LABELS = {
    ScoreKind.PATH2: "(a)",
    ScoreKind.COMMON_NEIGHBORS: "(b)",
    ScoreKind.ORDER2_OVERLAP: "(c)",
    ScoreKind.PATH_WEIGHT_SUM: "(d)",
    ScoreKind.JACCARD1: "jaccard1",
    ScoreKind.JACCARD2: "jaccard2",
    ScoreKind.ADAMIC_ADAR: "AA",
    ScoreKind.COOC1: "cooc1",
    ScoreKind.COOC2: "cooc2",
}
_ALIASES = {
    "a": "path2",
    "b": "common_neighbors",
    "c": "order2_overlap",
    "d": "path_weight_sum",
    "aa": "adamic_adar",
}


@dataclass(frozen=True)
class PairScore:
    """Score of an unordered researcher pair; stored with i < j."""

    i: int
    j: int
    value: float

    @classmethod
    def of(cls, i: int, j: int, value: float) -> PairScore:
        return cls(min(i, j), max(i, j), float(value))


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """All-pairs scores as a dense symmetric matrix with a zero diagonal."""

    kind: ScoreKind
    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, pair: tuple[int, int]) -> float:
        return float(self.values[pair])

    def pairs(self) -> Iterator[PairScore]:
        """Positive-score pairs, i < j."""
        rows, cols = np.nonzero(np.triu(self.values, k=1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield PairScore(i, j, float(self.values[i, j]))

    def support(self) -> set[tuple[int, int]]:
        return {(p.i, p.j) for p in self.pairs()}


# ============================================================================
# Co-authorship scores
# ============================================================================

def _check_pair(i: int, j: int) -> None:
    if i == j:
        raise ValidationError(f"similarity needs two distinct researchers, got {i} twice")


def _at_distance2(g: CoauthorGraph, i: int, j: int) -> bool:
    ni = g.neighbors(i)
    return j not in ni and bool(ni & g.neighbors(j))


def _order2(g: CoauthorGraph, x: int) -> set[int]:
    """N(x) together with every neighbour of a neighbour (x itself included)."""
    first = g.neighbors(x)
    out = set(first)
    for l in first:
        out |= g.neighbors(l)
    return out


def score_path2(g: CoauthorGraph, i: int, j: int) -> float:
    _check_pair(i, j)
    return 1.0 if _at_distance2(g, i, j) else 0.0


def score_common_neighbors(g: CoauthorGraph, i: int, j: int) -> float:
    _check_pair(i, j)
    if not _at_distance2(g, i, j):
        return 0.0
    return float(len(g.neighbors(i) & g.neighbors(j)))


def score_order2_overlap(g: CoauthorGraph, i: int, j: int) -> float:
    _check_pair(i, j)
    if not _at_distance2(g, i, j):
        return 0.0
    return float(len(_order2(g, i) & _order2(g, j)))


def score_path_weight_sum(g: CoauthorGraph, i: int, j: int) -> float:
    _check_pair(i, j)
    if not _at_distance2(g, i, j):
        return 0.0
    common = g.neighbors(i) & g.neighbors(j)
    return float(sum(g.count(i, k) + g.count(k, j) for k in common))


# ============================================================================
# Researcher-journal scores
# ============================================================================

def jaccard1(inc: IncidenceGraph, i: int, i2: int) -> float:
    """|J(i) & J(i')| / |J(i) | J(i')|."""
    _check_pair(i, i2)
    ji, ji2 = inc.journals_of(i), inc.journals_of(i2)
    union = ji | ji2
    if not union:
        return 0.0
    return len(ji & ji2) / len(union)


def jaccard2(inc: IncidenceGraph, i: int, i2: int) -> float:
    """Publication-weighted Jaccard over the two journal profiles."""
    _check_pair(i, i2)
    ji, ji2 = inc.journals_of(i), inc.journals_of(i2)
    union = ji | ji2
    denom = sum(inc.count(i, j) + inc.count(i2, j) for j in union)
    if denom == 0:
        return 0.0
    return sum(inc.count(i, j) + inc.count(i2, j) for j in ji & ji2) / denom


def adamic_adar(inc: IncidenceGraph, i: int, i2: int) -> float:
    """Sum of 1/ln(T_j) over shared journals; journals with T_j <= 1 are skipped."""
    _check_pair(i, i2)
    totals = inc.journal_totals()
    score = 0.0
    for j in sorted(inc.journals_of(i) & inc.journals_of(i2)):
        t = float(totals[j])
        if t > 1:
            score += 1.0 / math.log(t)
    return score


def journal_jaccard(inc: IncidenceGraph, j: int, j2: int, variant: int = 1) -> float:
    """Jaccard between two journals' researcher sets; 1.0 for a journal with itself."""
    _check_variant(variant)
    ri, ri2 = inc.researchers_of(j), inc.researchers_of(j2)
    if j == j2:
        return 1.0
    union = ri | ri2
    if not union:
        return 0.0
    if variant == 1:
        return len(ri & ri2) / len(union)
    denom = sum(inc.count(i, j) + inc.count(i, j2) for i in union)
    return sum(inc.count(i, j) + inc.count(i, j2) for i in ri & ri2) / denom


def cooc(inc: IncidenceGraph, i: int, i2: int, variant: int = 1) -> float:
    """
    Co-occurrence smoothing: publication shares of i and i' paired over all
    journal combinations, weighted by journal similarity.
    """
    _check_pair(i, i2)
    _check_variant(variant)
    ji, ji2 = inc.journals_of(i), inc.journals_of(i2)
    if not ji or not ji2:
        return 0.0
    ti = sum(inc.count(i, j) for j in ji)
    ti2 = sum(inc.count(i2, j) for j in ji2)
    score = 0.0
    for j in sorted(ji):
        for j2 in sorted(ji2):
            sim = journal_jaccard(inc, j, j2, variant)
            if sim:
                score += (inc.count(i, j) / ti) * (inc.count(i2, j2) / ti2) * sim
    return score


def _check_variant(variant: int) -> None:
    if variant not in (1, 2):
        raise ValidationError(f"Jaccard variant must be 1 or 2, got {variant}")


_PAIR_FUNCS: dict[ScoreKind, Callable[[CoauthorGraph, IncidenceGraph, int, int], float]] = {
    ScoreKind.PATH2: lambda g, inc, i, j: score_path2(g, i, j),
    ScoreKind.COMMON_NEIGHBORS: lambda g, inc, i, j: score_common_neighbors(g, i, j),
    ScoreKind.ORDER2_OVERLAP: lambda g, inc, i, j: score_order2_overlap(g, i, j),
    ScoreKind.PATH_WEIGHT_SUM: lambda g, inc, i, j: score_path_weight_sum(g, i, j),
    ScoreKind.JACCARD1: lambda g, inc, i, j: jaccard1(inc, i, j),
    ScoreKind.JACCARD2: lambda g, inc, i, j: jaccard2(inc, i, j),
    ScoreKind.ADAMIC_ADAR: lambda g, inc, i, j: adamic_adar(inc, i, j),
    ScoreKind.COOC1: lambda g, inc, i, j: cooc(inc, i, j, 1),
    ScoreKind.COOC2: lambda g, inc, i, j: cooc(inc, i, j, 2),
}


def score_pair(
    kind: ScoreKind | str,
    g: CoauthorGraph,
    inc: IncidenceGraph,
    i: int,
    j: int,
) -> PairScore:
    """Dispatch to the per-pair score of ``kind``."""
    if not isinstance(kind, ScoreKind):
        kind = ScoreKind.parse(kind)
    return PairScore.of(i, j, _PAIR_FUNCS[kind](g, inc, i, j))


# ============================================================================
# All-pairs forms
# ============================================================================

def score_matrix(kind: ScoreKind | str, g: CoauthorGraph, inc: IncidenceGraph) -> ScoreMatrix:
    """Evaluate ``kind`` for every researcher pair at once."""
    if not isinstance(kind, ScoreKind):
        kind = ScoreKind.parse(kind)
    if kind.family is ScoreFamily.COAUTHOR:
        values = _coauthor_matrix(kind, g)
    else:
        values = _bipartite_matrix(kind, inc)
    np.fill_diagonal(values, 0.0)
    return ScoreMatrix(kind, values)


def _coauthor_matrix(kind: ScoreKind, g: CoauthorGraph) -> np.ndarray:
    mask = g.distance2_mask().astype(np.float64)
    B = g.pattern
    if kind is ScoreKind.PATH2:
        out = mask
    elif kind is ScoreKind.COMMON_NEIGHBORS:
        out = mask.multiply(B @ B)
    elif kind is ScoreKind.ORDER2_OVERLAP:
        order2 = ((B + B @ B) > 0).astype(np.int64)
        out = mask.multiply(order2 @ order2.T)
    else:
        A = g.matrix
        out = mask.multiply(A @ B + B @ A)
    return np.asarray(sp.csr_matrix(out).toarray(), dtype=np.float64)


def _jaccard_dense(counts: sp.csr_matrix, variant: int) -> np.ndarray:
    """Row-vs-row Jaccard (variant 1) or weighted Jaccard (variant 2) of a count matrix."""
    pattern = (counts > 0).astype(np.int64).tocsr()
    inter = np.asarray((pattern @ pattern.T).toarray(), dtype=np.float64)
    if variant == 1:
        sizes = np.asarray(pattern.sum(axis=1), dtype=np.float64).ravel()
        num = inter
        denom = sizes[:, None] + sizes[None, :] - inter
    else:
        totals = np.asarray(counts.sum(axis=1), dtype=np.float64).ravel()
        num = np.asarray((counts @ pattern.T + pattern @ counts.T).toarray(), dtype=np.float64)
        denom = totals[:, None] + totals[None, :]
    out = np.zeros_like(num)
    np.divide(num, denom, out=out, where=denom > 0)
    return out


def journal_similarity_matrix(inc: IncidenceGraph, variant: int = 1) -> np.ndarray:
    """Journal x journal Jaccard over researcher sets, with ones on the diagonal."""
    _check_variant(variant)
    sim = _jaccard_dense(inc.matrix.T.tocsr(), variant)
    np.fill_diagonal(sim, 1.0)
    return sim


def _bipartite_matrix(kind: ScoreKind, inc: IncidenceGraph) -> np.ndarray:
    if kind is ScoreKind.JACCARD1:
        return _jaccard_dense(inc.matrix, 1)
    if kind is ScoreKind.JACCARD2:
        return _jaccard_dense(inc.matrix, 2)
    if kind is ScoreKind.ADAMIC_ADAR:
        totals = inc.journal_totals().astype(np.float64)
        weights = np.zeros_like(totals)
        rare = totals > 1
        weights[rare] = 1.0 / np.log(totals[rare])
        P = inc.pattern
        return np.asarray((P.multiply(weights[None, :]).tocsr() @ P.T).toarray(), dtype=np.float64)

    variant = 1 if kind is ScoreKind.COOC1 else 2
    totals = inc.researcher_totals().astype(np.float64)
    inv = np.zeros_like(totals)
    np.divide(1.0, totals, out=inv, where=totals > 0)
    shares = np.asarray(sp.diags(inv) @ inc.matrix.toarray(), dtype=np.float64)
    sim = journal_similarity_matrix(inc, variant)
    return np.asarray(shares @ sim @ shares.T, dtype=np.float64)
