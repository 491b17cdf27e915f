"""Unit tests for the co-authorship and incidence graphs."""

import math

import networkx as nx
import numpy as np
import pytest

from schoolink.network import (
    UNREACHABLE,
    all_distance2_pairs,
    build_coauthor_graph,
    build_incidence_graph,
    geodesic,
    neighbors,
)

from tests.conftest import random_corpus

R1, R2, R3, R4, R5, R6 = range(6)


class TestCoauthorGraph:

    def test_counts_and_symmetry(self, train_graph):
        dense = train_graph.matrix.toarray()
        assert (dense == dense.T).all()
        assert (np.diag(dense) == 0).all()
        assert train_graph.count(R1, R2) == 1
        assert train_graph.count(R5, R6) == 1
        assert train_graph.n_edges == 4

    def test_repeat_coauthorship_accumulates(self, corpus_factory):
        corpus = corpus_factory({"a": ["S"], "b": ["S"]}, [({"a", "b"}, "J"), ({"a", "b"}, "J")])
        g = build_coauthor_graph(corpus)
        assert g.count(0, 1) == 2

    def test_solo_paper_adds_no_edge(self, corpus_factory):
        corpus = corpus_factory({"a": ["S"], "b": ["T"]}, [({"a"}, "J")])
        assert build_coauthor_graph(corpus).n_edges == 0

    def test_neighbors(self, train_graph):
        assert neighbors(train_graph, R2) == {R1, R3}
        assert neighbors(train_graph, R5) == {R6}

    def test_index_out_of_range(self, train_graph):
        with pytest.raises(IndexError):
            train_graph.neighbors(6)

    def test_geodesic(self, train_graph):
        assert geodesic(train_graph, R1, R1) == 0
        assert geodesic(train_graph, R1, R4) == 3
        assert geodesic(train_graph, R1, R5) == UNREACHABLE
        assert math.isinf(geodesic(train_graph, R4, R6))

    def test_unreachable_compares_above_everything(self):
        assert UNREACHABLE > 10 ** 9

    def test_distance2_pairs(self, train_graph):
        assert all_distance2_pairs(train_graph) == {(R1, R3), (R2, R4)}

    def test_edges_iterate_upper_triangle(self, train_graph):
        assert list(train_graph.edges()) == [(R1, R2, 1), (R2, R3, 1), (R3, R4, 1), (R5, R6, 1)]

    def test_export_coo(self, train_graph, tmp_path):
        text = train_graph.export_coo(tmp_path / "g.txt").read_text()
        assert text.splitlines()[1] == "r1 r2 1"

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_geodesics_match_networkx(self, seed):
        corpus = random_corpus(np.random.default_rng(seed))
        g = build_coauthor_graph(corpus)
        ref = nx.Graph()
        ref.add_nodes_from(range(g.n))
        ref.add_edges_from((i, j) for i, j, _ in g.edges())
        lengths = dict(nx.all_pairs_shortest_path_length(ref))
        dist = g.distance_matrix(max_workers=2)
        for i in range(g.n):
            for j in range(g.n):
                expected = lengths[i].get(j, math.inf)
                assert dist[i, j] == expected
                assert g.geodesic(i, j) == expected

    @pytest.mark.parametrize("seed", [3, 4])
    def test_distance2_matches_geodesic(self, seed):
        g = build_coauthor_graph(random_corpus(np.random.default_rng(seed)))
        dist = g.distance_matrix()
        expected = {(i, j) for i in range(g.n) for j in range(i + 1, g.n) if dist[i, j] == 2}
        assert all_distance2_pairs(g) == expected


class TestIncidenceGraph:

    def test_counts(self, incidence):
        ja, jb, jc = (incidence.journal_index[name] for name in ("J-A", "J-B", "J-C"))
        assert incidence.count(R1, ja) == 1
        assert incidence.count(R2, ja) == 2
        assert incidence.count(R3, ja) == 1 and incidence.count(R3, jb) == 1
        assert incidence.count(R4, jb) == 2
        assert incidence.count(R5, jc) == 2
        assert incidence.count(R6, jc) == 1

    def test_journal_totals(self, incidence):
        assert incidence.journal_totals().tolist() == [4, 3, 3]

    def test_empty_journal_skipped(self, incidence):
        assert incidence.journals == ("J-A", "J-B", "J-C")
        assert int(incidence.researcher_totals()[R1]) == 1

    def test_neighbourhoods(self, incidence):
        assert incidence.journals_of(R3) == {0, 1}
        assert incidence.researchers_of(0) == {R1, R2, R3}
        with pytest.raises(IndexError):
            incidence.researchers_of(3)

    def test_export_coo(self, incidence, tmp_path):
        lines = incidence.export_coo(tmp_path / "inc.tsv").read_text().splitlines()
        assert lines == [
            "# researcher\tjournal\tcount",
            "r1\tJ-A\t1",
            "r2\tJ-A\t2",
            "r3\tJ-A\t1",
            "r3\tJ-B\t1",
            "r4\tJ-B\t2",
            "r5\tJ-C\t2",
            "r6\tJ-C\t1",
        ]

    def test_train_and_test_graphs_line_up(self, split):
        train = build_coauthor_graph(split.train)
        test = build_coauthor_graph(split.test)
        assert train.researcher_ids == test.researcher_ids
        assert test.count(R1, R3) == 1
        assert build_incidence_graph(split.test).journals == ("J-A", "J-B", "J-C")
