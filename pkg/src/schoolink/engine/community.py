"""
Community-detection baseline.

The weighted School network (joint-publication counts, intra-School
collaboration kept as self-loops) is merged greedily by modularity gain,
CNM style, down to a single community. Cutting the merge history at N
communities and linking every pair of Schools inside a community gives
the baseline's predicted links.

Modularity follows the weighted Newman definition with a self-loop of
weight s adding 2s to its node's degree and s to the total weight m.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Optional

import numpy as np

from schoolink.engine.errors import ValidationError
from schoolink.engine.templating import render
from schoolink.ingest.corpus import Corpus
from schoolink.network.core import CoauthorGraph
from schoolink.network.school import SchoolEdgeSet, aggregate_matrix

logger = logging.getLogger(__name__)

_TIE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class SchoolGraph:
    """
    Weighted School network.

    ``weights[k, l]`` (k != l) is the number of joint publications between
    researchers of k and l; ``weights[k, k]`` is the intra-School self-weight.
    """

    schools: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (len(self.schools), len(self.schools)):
            raise ValidationError(f"weights shape {w.shape} does not match {len(self.schools)} schools")
        if (w < 0).any() or not np.allclose(w, w.T):
            raise ValidationError("school graph weights must be nonnegative and symmetric")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.schools)

    @property
    def total_weight(self) -> float:
        """m: every edge once, self-loops included."""
        return float(np.triu(self.weights).sum())

    def adjacency(self) -> np.ndarray:
        """Adjacency with self-loops doubled on the diagonal (row sums are degrees)."""
        a = self.weights.copy()
        np.fill_diagonal(a, 2.0 * np.diag(self.weights))
        return a

    def weight(self, k: str, l: str) -> float:
        a, b = self.schools.index(k), self.schools.index(l)
        return float(self.weights[a, b])

    def edges(self) -> Iterator[tuple[str, str, float]]:
        rows, cols = np.nonzero(np.triu(self.weights) > 0)
        for a, b in zip(rows.tolist(), cols.tolist()):
            yield self.schools[a], self.schools[b], float(self.weights[a, b])


@dataclass(frozen=True)
class Merge:
    """One agglomeration step: communities ``left`` and ``right`` become ``merged``."""

    step: int
    left: int
    right: int
    merged: int
    delta_q: float
    q: float
    n_communities: int


class Partition(Mapping[str, int]):
    """School -> community id, ids contiguous from 0 in order of each community's first school."""

    def __init__(self, assignment: Mapping[str, object]):
        groups: dict[object, list[str]] = {}
        for school in sorted(assignment):
            groups.setdefault(assignment[school], []).append(school)
        self._ids: dict[str, int] = {}
        for cid, members in enumerate(sorted(groups.values(), key=lambda m: m[0])):
            for school in members:
                self._ids[school] = cid

    def __getitem__(self, school: str) -> int:
        return self._ids[school]

    def __iter__(self) -> Iterator[str]:
        return iter(self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Partition):
            return self._ids == other._ids
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._ids.items())))

    @property
    def n_communities(self) -> int:
        return len(set(self._ids.values()))

    def communities(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.n_communities)]
        for school in sorted(self._ids):
            out[self._ids[school]].append(school)
        return out

    def refines(self, coarser: Partition) -> bool:
        """Every community of this partition lies inside one community of ``coarser``."""
        return all(len({coarser[s] for s in members}) == 1 for members in self.communities())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["school", "community"])
        for school in sorted(self._ids):
            writer.writerow([school, self._ids[school]])
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """
    Merge history over ``leaves``.

    Leaf k is community k; the community formed at step t gets id
    ``len(leaves) + t - 1``.
    """

    leaves: tuple[str, ...]
    initial_q: float
    merges: tuple[Merge, ...] = field(default_factory=tuple)

    @property
    def q_values(self) -> list[float]:
        """Q with 0, 1, ... merges applied."""
        return [self.initial_q] + [m.q for m in self.merges]

    def optimal_cut(self) -> tuple[int, float]:
        """(N, Q) at the modularity peak; the earliest step wins ties."""
        qs = self.q_values
        t = int(np.argmax(qs))
        return len(self.leaves) - t, qs[t]

    def to_text(self) -> str:
        n, q = self.optimal_cut()
        return render(
            "dendrogram.txt.j2",
            {
                "leaves": list(self.leaves),
                "initial_q": self.initial_q,
                "optimal_n": n,
                "optimal_q": q,
                "merges": list(self.merges),
            },
        )


def build_school_graph(g: CoauthorGraph, corpus: Corpus) -> SchoolGraph:
    """Sum joint-publication counts over School pairs; intra-School sums become self-weights."""
    if g.researcher_ids != corpus.researcher_ids:
        raise ValidationError("graph and corpus have different researcher cohorts")
    schools, U = aggregate_matrix(g.matrix, corpus)
    U[np.abs(U) < 1e-12] = 0.0
    sg = SchoolGraph(schools, U)
    logger.info("School graph: %d schools, total weight %g", sg.n, sg.total_weight)
    return sg


def modularity(sg: SchoolGraph, partition: Mapping[str, object]) -> float:
    """Weighted Newman modularity of ``partition`` on ``sg``."""
    m = sg.total_weight
    if m <= 0:
        raise ValidationError("modularity is undefined on an edgeless graph")
    a = sg.adjacency()
    degrees = a.sum(axis=1)
    labels = [partition[s] for s in sg.schools]
    q = 0.0
    for c in set(labels):
        idx = [k for k, label in enumerate(labels) if label == c]
        internal = a[np.ix_(idx, idx)].sum()
        q += internal / (2.0 * m) - (degrees[idx].sum() / (2.0 * m)) ** 2
    return float(q)


def greedy_modularity(sg: SchoolGraph) -> Dendrogram:
    """
    Agglomerate singletons into one community, always taking the largest
    modularity gain.

    Only pairs joined by an edge are considered while any exist; ties go to
    the lexicographically smallest (id, id) pair.
    """
    m = sg.total_weight
    if m <= 0:
        raise ValidationError("greedy_modularity needs a school graph with at least one edge")
    n = sg.n
    a = sg.adjacency()
    degree = {k: float(a[k].sum()) for k in range(n)}
    # links[c][d]: total edge weight between communities c != d
    links: dict[int, dict[int, float]] = {k: {} for k in range(n)}
    for k, l in combinations(range(n), 2):
        if a[k, l] > 0:
            links[k][l] = links[l][k] = float(a[k, l])

    q = sum(a[k, k] / (2.0 * m) - (degree[k] / (2.0 * m)) ** 2 for k in range(n))
    initial_q = float(q)
    alive = set(range(n))
    merges: list[Merge] = []

    for step in range(1, n):
        best: Optional[tuple[float, int, int]] = None
        pairs = [(c, d) for c in sorted(alive) for d in sorted(links[c]) if c < d]
        if not pairs:
            pairs = list(combinations(sorted(alive), 2))
        for c, d in pairs:
            gain = links[c].get(d, 0.0) / m - degree[c] * degree[d] / (2.0 * m * m)
            if best is None or gain > best[0] + _TIE_EPS:
                best = (gain, c, d)
        assert best is not None
        gain, c, d = best

        new = n + step - 1
        merged_links: dict[int, float] = {}
        for x in (c, d):
            for y, w in links.pop(x).items():
                if y in (c, d):
                    continue
                merged_links[y] = merged_links.get(y, 0.0) + w
                del links[y][x]
        links[new] = merged_links
        for y, w in merged_links.items():
            links[y][new] = w
        degree[new] = degree.pop(c) + degree.pop(d)
        alive -= {c, d}
        alive.add(new)

        q += gain
        merges.append(Merge(step, c, d, new, float(gain), float(q), n - step))
        logger.debug("merge %d: %d + %d -> %d, dQ=%.6g, Q=%.6g", step, c, d, new, gain, q)

    dendrogram = Dendrogram(sg.schools, initial_q, tuple(merges))
    best_n, best_q = dendrogram.optimal_cut()
    logger.info("Modularity peak Q=%.6f at %d communities", best_q, best_n)
    return dendrogram


def cut(d: Dendrogram, n: int) -> Partition:
    """Replay merges until exactly ``n`` communities remain."""
    leaves = len(d.leaves)
    if isinstance(n, bool) or not 1 <= n <= leaves:
        raise ValidationError(f"cannot cut {leaves} leaves into {n} communities", f"choose 1..{leaves}")
    owner = list(range(leaves))
    members: dict[int, list[int]] = {k: [k] for k in range(leaves)}
    for merge in d.merges[: leaves - n]:
        joined = members.pop(merge.left) + members.pop(merge.right)
        members[merge.merged] = joined
        for k in joined:
            owner[k] = merge.merged
    return Partition({school: owner[k] for k, school in enumerate(d.leaves)})


def predict_from_partition(part: Mapping[str, int], train: SchoolEdgeSet) -> SchoolEdgeSet:
    """All same-community School pairs outside E^train."""
    groups: dict[int, list[str]] = {}
    for school in sorted(part):
        groups.setdefault(part[school], []).append(school)
    pairs = {
        pair
        for members in groups.values()
        for pair in combinations(members, 2)
        if pair not in train.pairs
    }
    return SchoolEdgeSet(frozenset(pairs))
