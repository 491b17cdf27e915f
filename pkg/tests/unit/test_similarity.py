"""Unit tests for researcher-pair similarity scores."""

import math

import numpy as np
import pytest

from schoolink.engine.errors import ValidationError
from schoolink.network import (
    BIPARTITE_KINDS,
    COAUTHOR_KINDS,
    ScoreFamily,
    ScoreKind,
    all_distance2_pairs,
    build_coauthor_graph,
    build_incidence_graph,
    score_matrix,
    score_pair,
)
from schoolink.network.similarity import (
    adamic_adar,
    cooc,
    jaccard1,
    jaccard2,
    journal_jaccard,
    journal_similarity_matrix,
)

from tests.conftest import random_corpus

R1, R2, R3, R4, R5, R6 = range(6)


class TestScoreKind:

    @pytest.mark.parametrize(
        "text,kind",
        [
            ("cooc1", ScoreKind.COOC1),
            ("COOC2", ScoreKind.COOC2),
            ("b", ScoreKind.COMMON_NEIGHBORS),
            ("AA", ScoreKind.ADAMIC_ADAR),
            ("path-weight-sum", ScoreKind.PATH_WEIGHT_SUM),
        ],
    )
    def test_parse(self, text, kind):
        assert ScoreKind.parse(text) is kind

    def test_unknown_kind(self):
        with pytest.raises(ValidationError, match="Unknown score kind"):
            ScoreKind.parse("katz")

    def test_families(self):
        assert all(k.family is ScoreFamily.COAUTHOR for k in COAUTHOR_KINDS)
        assert all(k.family is ScoreFamily.BIPARTITE for k in BIPARTITE_KINDS)
        assert len(COAUTHOR_KINDS) + len(BIPARTITE_KINDS) == len(ScoreKind)


class TestCoauthorScores:

    def test_fixture_values(self, train_graph, incidence):
        def value(kind, i, j):
            return score_pair(kind, train_graph, incidence, i, j).value

        assert value(ScoreKind.PATH2, R1, R3) == 1.0
        assert value(ScoreKind.COMMON_NEIGHBORS, R1, R3) == 1.0
        assert value(ScoreKind.ORDER2_OVERLAP, R1, R3) == 3.0
        assert value(ScoreKind.PATH_WEIGHT_SUM, R1, R3) == 2.0

    @pytest.mark.parametrize("kind", COAUTHOR_KINDS)
    def test_zero_off_distance_two(self, kind, train_graph, incidence):
        # adjacent, three hops and unreachable
        for i, j in [(R1, R2), (R1, R4), (R1, R5)]:
            assert score_pair(kind, train_graph, incidence, i, j).value == 0.0

    @pytest.mark.parametrize("kind", COAUTHOR_KINDS)
    def test_support_is_distance_two(self, kind, train_graph, incidence):
        assert score_matrix(kind, train_graph, incidence).support() == all_distance2_pairs(train_graph)

    def test_same_researcher_rejected(self, train_graph, incidence):
        with pytest.raises(ValidationError, match="two distinct researchers"):
            score_pair(ScoreKind.PATH2, train_graph, incidence, R2, R2)

    def test_pair_is_normalised(self, train_graph, incidence):
        score = score_pair(ScoreKind.PATH2, train_graph, incidence, R3, R1)
        assert (score.i, score.j) == (R1, R3)


class TestBipartiteScores:

    def test_jaccard(self, incidence):
        assert jaccard1(incidence, R1, R3) == pytest.approx(0.5)
        assert jaccard2(incidence, R1, R3) == pytest.approx(2 / 3)
        assert jaccard1(incidence, R1, R5) == 0.0

    def test_adamic_adar(self, incidence):
        assert adamic_adar(incidence, R1, R3) == pytest.approx(1 / math.log(4))
        assert adamic_adar(incidence, R3, R4) == pytest.approx(1 / math.log(3))

    def test_journal_jaccard(self, incidence):
        assert journal_jaccard(incidence, 0, 1) == pytest.approx(0.25)
        assert journal_jaccard(incidence, 0, 2) == 0.0
        assert journal_jaccard(incidence, 1, 1) == 1.0

    def test_journal_similarity_diagonal(self, incidence):
        sim = journal_similarity_matrix(incidence, 2)
        assert np.allclose(np.diag(sim), 1.0)
        assert np.allclose(sim, sim.T)

    def test_cooc(self, incidence):
        assert cooc(incidence, R1, R3, 1) == pytest.approx(0.625)
        assert cooc(incidence, R1, R5, 1) == 0.0

    def test_variant_checked(self, incidence):
        with pytest.raises(ValidationError, match="variant"):
            cooc(incidence, R1, R3, 3)

    def test_researcher_without_journals_scores_zero(self, corpus_factory):
        corpus = corpus_factory({"a": ["S"], "b": ["T"]}, [({"a"}, "J"), ({"b"}, "")])
        inc = build_incidence_graph(corpus)
        assert jaccard1(inc, 0, 1) == 0.0
        assert cooc(inc, 0, 1, 2) == 0.0

    @pytest.mark.parametrize("kind", [ScoreKind.COOC1, ScoreKind.COOC2])
    def test_not_gated_by_distance(self, kind, train_graph, incidence):
        # three hops apart, linked through the overlap of J-A and J-B
        assert score_pair(kind, train_graph, incidence, R1, R4).value > 0


class TestMatrixMatchesPairwise:

    @pytest.mark.parametrize("kind", list(ScoreKind))
    @pytest.mark.parametrize("seed", [0, 7])
    def test_random_corpus(self, kind, seed):
        corpus = random_corpus(np.random.default_rng(seed), n_researchers=18, n_papers=30)
        g = build_coauthor_graph(corpus)
        inc = build_incidence_graph(corpus)
        matrix = score_matrix(kind, g, inc)
        assert np.allclose(matrix.values, matrix.values.T, atol=1e-12)
        assert (np.diag(matrix.values) == 0).all()
        for i in range(g.n):
            for j in range(i + 1, g.n):
                expected = score_pair(kind, g, inc, i, j).value
                assert matrix[i, j] == pytest.approx(expected, abs=1e-12)


class TestWorkedExamples:

    @pytest.fixture
    def profiles(self, corpus_factory):
        papers = [({"x"}, "a"), ({"x"}, "a"), ({"x"}, "b")] + [({"y"}, "b")] * 3 + [({"y"}, "c")]
        return build_incidence_graph(corpus_factory({"x": ["S"], "y": ["T"]}, papers))

    @pytest.fixture
    def diamond(self, corpus_factory):
        edges = [("n1", "n2"), ("n1", "n3"), ("n2", "n3"), ("n3", "n4"), ("n3", "n4"), ("n3", "n4")]
        corpus = corpus_factory({n: ["S"] for n in ("n1", "n2", "n3", "n4")}, [(set(e), "J") for e in edges])
        return build_coauthor_graph(corpus)

    def test_journal_profiles(self, profiles):
        assert jaccard1(profiles, 0, 1) == pytest.approx(1 / 3)
        assert jaccard2(profiles, 0, 1) == pytest.approx(4 / 7)
        assert cooc(profiles, 0, 1, 1) == pytest.approx(13 / 24)

    def test_neighbourhood_scores(self, diamond, profiles):
        def value(kind):
            return score_pair(kind, diamond, profiles, 0, 3).value

        assert value(ScoreKind.COMMON_NEIGHBORS) == 1.0
        assert value(ScoreKind.ORDER2_OVERLAP) == 4.0
        # A[n1, n3] = 1 and A[n3, n4] = 3
        assert value(ScoreKind.PATH_WEIGHT_SUM) == 4.0
