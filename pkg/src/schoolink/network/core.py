"""
Co-authorship and researcher-journal graphs.

Both graphs are immutable sparse count matrices indexed by the corpus'
dense researcher index, so graphs built from the train and test halves of
one corpus line up row for row.
"""

from __future__ import annotations

import logging
import math
import threading
from itertools import combinations
from pathlib import Path
from typing import Iterator, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from schoolink.ingest.corpus import Corpus
from schoolink.platform.concurrency import parallel_map
from schoolink.platform.fs import atomic_write

logger = logging.getLogger(__name__)

# Hop count of a disconnected pair; compares greater than every finite distance.
UNREACHABLE: float = math.inf

Distance = Union[int, float]
Pair = tuple[int, int]

_DISTANCE_CHUNK = 256


class CoauthorGraph:
    """
    Symmetric researcher x researcher joint-publication counts A.

    ``A[i, j]`` is the number of publications listing both i and j; the
    diagonal is zero. Hop distances treat every positive count as one
    unweighted edge.
    """

    def __init__(self, researcher_ids: tuple[str, ...], matrix: sp.csr_matrix):
        self.researcher_ids = researcher_ids
        self.index = {rid: i for i, rid in enumerate(researcher_ids)}
        matrix = matrix.tocsr()
        self.matrix = (matrix - sp.diags(matrix.diagonal())).tocsr()
        self.matrix.eliminate_zeros()
        self.matrix.sort_indices()
        self.pattern = (self.matrix > 0).astype(np.int64).tocsr()
        self._rows: dict[int, np.ndarray] = {}
        self._all: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return len(self.researcher_ids)

    @property
    def n_edges(self) -> int:
        return int(self.pattern.nnz // 2)

    def count(self, i: int, j: int) -> int:
        self._check(i)
        self._check(j)
        return int(self.matrix[i, j])

    def neighbors(self, i: int) -> set[int]:
        """N(i) = {k : A[i, k] > 0}."""
        self._check(i)
        start, end = self.pattern.indptr[i], self.pattern.indptr[i + 1]
        return {int(k) for k in self.pattern.indices[start:end]}

    def distances_from(self, i: int) -> np.ndarray:
        """Hop distances from ``i`` to every researcher (``inf`` when unreachable)."""
        self._check(i)
        if self._all is not None:
            return self._all[i]
        row = self._rows.get(i)
        if row is None:
            row = csgraph.shortest_path(
                self.pattern, method="D", directed=False, unweighted=True, indices=i
            )
            self._rows[i] = row
        return row

    def geodesic(self, i: int, j: int) -> Distance:
        """Unweighted shortest-path hop count, or UNREACHABLE."""
        self._check(j)
        d = self.distances_from(i)[j]
        return UNREACHABLE if np.isinf(d) else int(d)

    def distance_matrix(self, max_workers: Optional[int] = None) -> np.ndarray:
        """All hop distances; source rows are computed in parallel chunks and memoised."""
        with self._lock:
            if self._all is None:
                chunks = [
                    np.arange(s, min(s + _DISTANCE_CHUNK, self.n))
                    for s in range(0, self.n, _DISTANCE_CHUNK)
                ]
                rows = parallel_map(self._distance_chunk, chunks, max_workers)
                self._all = np.vstack(rows) if rows else np.zeros((0, 0))
                logger.debug("Computed %d x %d hop distances", self.n, self.n)
        return self._all

    def _distance_chunk(self, sources: np.ndarray) -> np.ndarray:
        out = csgraph.shortest_path(
            self.pattern, method="D", directed=False, unweighted=True, indices=sources
        )
        return np.atleast_2d(out)

    def common_neighbor_counts(self) -> sp.csr_matrix:
        """(B @ B)[i, j] = |N(i) & N(j)| for the 0/1 pattern B."""
        return (self.pattern @ self.pattern).tocsr()

    def distance2_mask(self) -> sp.csr_matrix:
        """Boolean matrix of pairs at hop distance exactly 2."""
        common = self.common_neighbor_counts()
        shared = (common - sp.diags(common.diagonal()) > 0).astype(np.int64)
        mask = (shared - shared.multiply(self.pattern)).tocsr()
        mask.eliminate_zeros()
        return (mask > 0).tocsr()

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, count)`` for i < j."""
        upper = sp.triu(self.matrix, k=1).tocoo()
        for i, j, c in sorted(zip(upper.row.tolist(), upper.col.tolist(), upper.data.tolist())):
            yield i, j, int(c)

    def export_coo(self, path: Union[str, Path]) -> Path:
        """Debug export: one ``row col count`` line per stored entry (i < j)."""
        lines = ["# row col count"]
        lines += [f"{self.researcher_ids[i]} {self.researcher_ids[j]} {c}" for i, j, c in self.edges()]
        return atomic_write(path, "\n".join(lines) + "\n")

    def _check(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"researcher index {i} out of range 0..{self.n - 1}")


class IncidenceGraph:
    """
    Researcher x journal publication counts I.

    ``I[i, j]`` is the number of publications by researcher i in journal j;
    a multi-author paper counts once for each listed author.
    """

    def __init__(
        self,
        researcher_ids: tuple[str, ...],
        journals: tuple[str, ...],
        matrix: sp.csr_matrix,
    ):
        self.researcher_ids = researcher_ids
        self.journals = journals
        self.journal_index = {name: j for j, name in enumerate(journals)}
        self.matrix = matrix.tocsr()
        self.matrix.eliminate_zeros()
        self.matrix.sort_indices()
        self.pattern = (self.matrix > 0).astype(np.int64).tocsr()

    @property
    def n(self) -> int:
        return len(self.researcher_ids)

    @property
    def n_journals(self) -> int:
        return len(self.journals)

    def count(self, i: int, j: int) -> int:
        return int(self.matrix[i, j])

    def journals_of(self, i: int) -> set[int]:
        """J(i): journals researcher i published in."""
        if not 0 <= i < self.n:
            raise IndexError(f"researcher index {i} out of range 0..{self.n - 1}")
        start, end = self.pattern.indptr[i], self.pattern.indptr[i + 1]
        return {int(j) for j in self.pattern.indices[start:end]}

    def researchers_of(self, j: int) -> set[int]:
        """I(j): researchers who published in journal j."""
        if not 0 <= j < self.n_journals:
            raise IndexError(f"journal index {j} out of range 0..{self.n_journals - 1}")
        return {int(i) for i in self.pattern[:, j].nonzero()[0]}

    def researcher_totals(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def journal_totals(self) -> np.ndarray:
        """T_j: total incidence count of journal j."""
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def export_coo(self, path: Union[str, Path]) -> Path:
        """Debug export: one ``researcher journal count`` line per entry (tab separated)."""
        coo = self.matrix.tocoo()
        lines = ["# researcher\tjournal\tcount"]
        for i, j, c in sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())):
            lines.append(f"{self.researcher_ids[i]}\t{self.journals[j]}\t{int(c)}")
        return atomic_write(path, "\n".join(lines) + "\n")


def build_coauthor_graph(corpus: Corpus) -> CoauthorGraph:
    """Every unordered author pair of every publication gains +1."""
    index = corpus.index
    rows: list[int] = []
    cols: list[int] = []
    for p in corpus.publications:
        members = sorted(index[a] for a in p.authors)
        for i, j in combinations(members, 2):
            rows += (i, j)
            cols += (j, i)
    n = len(index)
    matrix = sp.coo_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n)
    ).tocsr()
    graph = CoauthorGraph(corpus.researcher_ids, matrix)
    logger.info("Co-authorship graph: %d researchers, %d edges", graph.n, graph.n_edges)
    return graph


def build_incidence_graph(corpus: Corpus) -> IncidenceGraph:
    """Count publications per (researcher, journal); empty-journal outputs are skipped."""
    index = corpus.index
    journals = tuple(sorted(corpus.journals))
    jindex = {name: j for j, name in enumerate(journals)}
    rows: list[int] = []
    cols: list[int] = []
    for p in corpus.publications:
        if not p.journal:
            continue
        for a in p.authors:
            rows.append(index[a])
            cols.append(jindex[p.journal])
    matrix = sp.coo_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)),
        shape=(len(index), len(journals)),
    ).tocsr()
    graph = IncidenceGraph(corpus.researcher_ids, journals, matrix)
    logger.info(
        "Incidence graph: %d researchers, %d journals, %d entries",
        graph.n, graph.n_journals, graph.matrix.nnz,
    )
    return graph


def neighbors(g: CoauthorGraph, i: int) -> set[int]:
    return g.neighbors(i)


def geodesic(g: CoauthorGraph, i: int, j: int) -> Distance:
    return g.geodesic(i, j)


def all_distance2_pairs(g: CoauthorGraph) -> set[Pair]:
    """Unordered pairs (i < j) that are non-adjacent but share a neighbour."""
    mask = sp.triu(g.distance2_mask(), k=1).tocoo()
    return {(int(i), int(j)) for i, j in zip(mask.row, mask.col)}
