"""Unit tests for School edge sets, the distance gate and School aggregation."""

import math
from itertools import combinations

import numpy as np
import pytest

from schoolink.engine.errors import ValidationError
from schoolink.network import (
    DistanceGate,
    SchoolEdgeSet,
    ScoreKind,
    aggregate_bipartite,
    aggregate_coauthor,
    build_coauthor_graph,
    build_incidence_graph,
    candidate_pairs,
    new_edges,
    school_edges,
    school_weights,
    score_matrix,
)
from schoolink.network.school import aggregate_matrix, school_pair

from tests.conftest import random_corpus

TRAIN_EDGES = {("MATH", "PHYS"), ("GEOG", "PHYS"), ("PHYS", "SSCM")}
TEST_EDGES = {("MATH", "PHYS"), ("GEOG", "MATH"), ("GEOG", "SSCM")}


def brute_force_weights(values, corpus):
    """Every unordered researcher pair adds its score once to each School pair it spans."""
    ids = corpus.researcher_ids
    out = {}
    for i, j in combinations(range(len(ids)), 2):
        spanned = {
            school_pair(a, b)
            for a in corpus.researchers[ids[i]].schools
            for b in corpus.researchers[ids[j]].schools
            if a != b
        }
        for pair in spanned:
            out[pair] = out.get(pair, 0.0) + values[i, j]
    return out


class TestSchoolEdgeSet:

    def test_pairs_are_canonical(self):
        edges = SchoolEdgeSet.of([("PHYS", "MATH"), ("MATH", "PHYS")])
        assert len(edges) == 1
        assert ("PHYS", "MATH") in edges
        assert list(edges) == [("MATH", "PHYS")]

    def test_self_pair_rejected(self):
        with pytest.raises(ValidationError):
            school_pair("MATH", "MATH")
        assert ("MATH", "MATH") not in SchoolEdgeSet()

    def test_set_algebra(self):
        a = SchoolEdgeSet.of([("A", "B"), ("B", "C")])
        b = SchoolEdgeSet.of([("B", "C"), ("C", "D")])
        assert list(a & b) == [("B", "C")]
        assert list(a - b) == [("A", "B")]
        assert len(a | b) == 3
        assert (a & b).issubset(a.pairs)
        assert a.schools == {"A", "B", "C"}


class TestSchoolEdges:

    def test_fixture_train_and_test(self, split, train_graph):
        assert school_edges(train_graph, split.train).pairs == TRAIN_EDGES
        assert school_edges(build_coauthor_graph(split.test), split.test).pairs == TEST_EDGES

    def test_new_edges(self, ctx):
        assert new_edges(ctx.train_edges, ctx.test_edges).pairs == {("GEOG", "MATH"), ("GEOG", "SSCM")}

    def test_candidates(self, ctx):
        assert candidate_pairs(ctx.train_edges, ctx.train_edges.schools | {"GEOG", "MATH", "PHYS", "SSCM"}) == {
            ("GEOG", "MATH"),
            ("GEOG", "SSCM"),
            ("MATH", "SSCM"),
        }

    def test_candidates_four_schools_one_edge(self):
        train = SchoolEdgeSet.of([("A", "B")])
        assert len(candidate_pairs(train, ["A", "B", "C", "D"])) == 5

    def test_intra_school_paper_adds_no_edge(self, corpus_factory):
        corpus = corpus_factory({"a": ["S"], "b": ["S"]}, [({"a", "b"}, "J")])
        assert len(school_edges(build_coauthor_graph(corpus), corpus)) == 0

    def test_dual_affiliation_alone_is_not_an_edge(self, corpus_factory):
        corpus = corpus_factory({"a": ["S", "T"], "b": ["U"]}, [({"a"}, "J")])
        assert len(school_edges(build_coauthor_graph(corpus), corpus)) == 0

    def test_shared_dual_affiliation_counts_once(self, corpus_factory):
        corpus = corpus_factory({"a": ["S", "T"], "b": ["S", "T"]}, [({"a", "b"}, "J")])
        g = build_coauthor_graph(corpus)
        assert school_edges(g, corpus).pairs == {("S", "T")}
        schools, U = aggregate_matrix(g.matrix, corpus)
        assert schools == ("S", "T")
        assert U[0, 1] == 1.0
        assert U[0, 0] == 1.0 and U[1, 1] == 1.0

    def test_cohort_mismatch(self, split, corpus_factory):
        other = corpus_factory({"x": ["S"]}, [])
        with pytest.raises(ValidationError, match="cohorts"):
            school_edges(build_coauthor_graph(other), split.train)


class TestDistanceGate:

    @pytest.mark.parametrize(
        "text,limit",
        [("NA", None), (None, None), ("inf", math.inf), ("∞", math.inf), ("4", 4), (10, 10)],
    )
    def test_parse(self, text, limit):
        assert DistanceGate.parse(text).limit == limit

    @pytest.mark.parametrize("bad", ["0", "-2", "2.5", "far", True])
    def test_invalid(self, bad):
        with pytest.raises(ValidationError):
            DistanceGate.parse(bad)

    def test_masks(self):
        distances = np.array([1.0, 3.0, 4.0, math.inf])
        assert DistanceGate(None).mask(distances).tolist() == [1, 1, 1, 1]
        assert DistanceGate(math.inf).mask(distances).tolist() == [1, 1, 1, 0]
        assert DistanceGate(4).mask(distances).tolist() == [1, 1, 0, 0]

    def test_str_and_equality(self):
        assert [str(DistanceGate.parse(v)) for v in ("NA", "inf", "10")] == ["NA", "inf", "10"]
        assert DistanceGate.parse("4") == DistanceGate(4)
        assert len({DistanceGate(4), DistanceGate.parse(4.0)}) == 1


class TestAggregation:

    def test_common_neighbor_weights(self, split, train_graph, incidence):
        weights = school_weights(ScoreKind.COMMON_NEIGHBORS, train_graph, incidence, split.train)
        assert dict(weights.items()) == {("GEOG", "MATH"): 1.0, ("MATH", "PHYS"): 1.0}
        assert weights["MATH", "GEOG"] == 1.0
        assert weights.get("MATH", "ZOOL") == 0.0

    def test_weights_csv(self, split, train_graph, incidence):
        weights = school_weights("b", train_graph, incidence, split.train)
        assert weights.to_csv().splitlines() == [
            "school_k,school_l,weight",
            "GEOG,MATH,1.0",
            "MATH,PHYS,1.0",
        ]

    def test_jaccard_zero_on_candidates(self, ctx, split, train_graph, incidence):
        weights = school_weights(ScoreKind.JACCARD1, train_graph, incidence, split.train, "NA")
        assert all(weights[pair] == 0.0 for pair in ctx.candidates)

    @pytest.mark.parametrize(
        "gate,expected",
        [("NA", 0.5), ("inf", 0.5), ("4", 0.5), ("3", 0.25), ("2", 0.0), ("1", 0.0)],
    )
    def test_gate_on_cooc(self, split, train_graph, incidence, gate, expected):
        # r1-r4 are three hops apart, r2-r4 two; both pairs score 0.25
        weights = school_weights(ScoreKind.COOC1, train_graph, incidence, split.train, gate)
        assert weights["GEOG", "MATH"] == pytest.approx(expected)

    def test_unreachable_pair_passes_only_without_gate(self, corpus_factory):
        corpus = corpus_factory({"a": ["S"], "b": ["T"]}, [({"a"}, "J"), ({"b"}, "J")])
        g, inc = build_coauthor_graph(corpus), build_incidence_graph(corpus)
        assert school_weights(ScoreKind.JACCARD1, g, inc, corpus, "NA")["S", "T"] == 1.0
        assert school_weights(ScoreKind.JACCARD1, g, inc, corpus, "inf")["S", "T"] == 0.0

    def test_adjacent_pair_passes_every_gate(self, corpus_factory):
        corpus = corpus_factory({"a": ["S"], "b": ["T"]}, [({"a", "b"}, "J")])
        g, inc = build_coauthor_graph(corpus), build_incidence_graph(corpus)
        for gate in ("NA", "inf", "2"):
            assert school_weights(ScoreKind.JACCARD1, g, inc, corpus, gate)["S", "T"] == 1.0

    def test_coauthor_score_ignores_gate(self, split, train_graph, incidence):
        ungated = school_weights(ScoreKind.PATH2, train_graph, incidence, split.train)
        gated = school_weights(ScoreKind.PATH2, train_graph, incidence, split.train, "2")
        assert np.array_equal(ungated.values, gated.values)

    def test_callable_sigma(self, split, train_graph):
        weights = aggregate_bipartite(lambda i, j: 1.0, train_graph, split.train, None)
        # MATH has two researchers, PHYS two: four cross pairs
        assert weights["MATH", "PHYS"] == 4.0

    def test_pair_score_iterable(self, split, train_graph, incidence):
        scores = score_matrix(ScoreKind.COMMON_NEIGHBORS, train_graph, incidence)
        from_matrix = aggregate_coauthor(scores, split.train)
        from_pairs = aggregate_coauthor(list(scores.pairs()), split.train)
        assert np.array_equal(from_matrix.values, from_pairs.values)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_matches_brute_force(self, seed):
        corpus = random_corpus(np.random.default_rng(seed), multi_share=0.4)
        g, inc = build_coauthor_graph(corpus), build_incidence_graph(corpus)
        scores = score_matrix(ScoreKind.JACCARD2, g, inc)
        weights = aggregate_bipartite(scores, g, corpus, "NA")
        expected = brute_force_weights(scores.values, corpus)
        for k, l in combinations(weights.schools, 2):
            assert weights[k, l] == pytest.approx(expected.get((k, l), 0.0), abs=1e-12)

    @pytest.mark.parametrize("seed", [5, 6])
    def test_monotone_in_gate(self, seed):
        corpus = random_corpus(np.random.default_rng(seed), n_papers=25)
        g, inc = build_coauthor_graph(corpus), build_incidence_graph(corpus)
        scores = score_matrix(ScoreKind.COOC2, g, inc)
        gates = ["1", "2", "3", "4", "10", "inf", "NA"]
        layers = [aggregate_bipartite(scores, g, corpus, gate).values for gate in gates]
        for tighter, looser in zip(layers, layers[1:]):
            assert (tighter <= looser + 1e-12).all()
