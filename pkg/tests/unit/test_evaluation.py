"""Unit tests for evaluation, report formatting and the parameter sweep."""

import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from schoolink.engine.errors import ValidationError
from schoolink.engine.evaluation import evaluate, sweep
from schoolink.engine.predictor import ThresholdRule
from schoolink.engine.results import EvalReport, MethodFamily
from schoolink.network import SchoolEdgeSet

SCHOOLS = [f"S{k:02d}" for k in range(24)]
ALL_PAIRS = list(combinations(SCHOOLS, 2))


class TestEvaluate:

    def test_random_guess_accuracy(self):
        candidates = ALL_PAIRS[:260]
        new = SchoolEdgeSet.of(candidates[:37])
        report = evaluate(SchoolEdgeSet(), new, candidates)
        assert report.random_guess_accuracy == pytest.approx(0.1423, abs=1e-4)
        assert report.n_candidates == 260

    def test_random_guess_matches_uniform_sampling(self):
        candidates = ALL_PAIRS[:9]
        new = SchoolEdgeSet.of(candidates[2:5])
        report = evaluate(SchoolEdgeSet(), new, candidates)

        rng = np.random.default_rng(11)
        is_new = np.array([pair in new for pair in candidates])
        draws = rng.random((100_000, len(candidates))).argsort(axis=1)[:, : report.m_new]
        accuracies = is_new[draws].sum(axis=1) / report.m_new
        assert accuracies.mean() == pytest.approx(report.random_guess_accuracy, abs=0.01)

    def test_counts(self):
        candidates = ALL_PAIRS[:10]
        pred = SchoolEdgeSet.of(candidates[:4])
        new = SchoolEdgeSet.of(candidates[2:5])
        report = evaluate(pred, new, candidates)
        assert (report.n_predicted, report.n_correct, report.m_new) == (4, 2, 3)
        assert report.accuracy == 0.5
        assert report.recall == pytest.approx(2 / 3)

    def test_empty_prediction(self):
        candidates = ALL_PAIRS[:5]
        report = evaluate(SchoolEdgeSet(), SchoolEdgeSet.of(candidates[:2]), candidates)
        assert report.accuracy == 0.0 and report.recall == 0.0
        assert report.exact_accuracy == 0

    def test_no_new_links(self):
        report = evaluate(SchoolEdgeSet.of(ALL_PAIRS[:2]), SchoolEdgeSet(), ALL_PAIRS[:5])
        assert report.recall == 0.0
        assert report.random_guess_accuracy == 0.0
        assert not report.beats_random

    def test_prediction_outside_candidates(self):
        with pytest.raises(ValidationError, match="not candidates"):
            evaluate(SchoolEdgeSet.of(ALL_PAIRS[5:7]), SchoolEdgeSet(), ALL_PAIRS[:5])

    def test_new_edges_outside_candidates_warn(self, caplog):
        evaluate(SchoolEdgeSet(), SchoolEdgeSet.of(ALL_PAIRS[8:9]), ALL_PAIRS[:5])
        assert "outside the candidate pairs" in caplog.text

    def test_exact_fractions(self):
        rng = np.random.default_rng(11)
        candidates = ALL_PAIRS[:60]
        for _ in range(200):
            pred = [p for p in candidates if rng.random() < 0.3]
            new = [p for p in candidates if rng.random() < 0.2]
            report = evaluate(SchoolEdgeSet.of(pred), SchoolEdgeSet.of(new), candidates)
            correct = len(set(pred) & set(new))
            if pred:
                assert report.exact_accuracy == Fraction(correct, len(pred))
                assert report.accuracy == float(report.exact_accuracy)
            if new:
                assert report.exact_recall == Fraction(correct, len(new))
            assert report.n_correct <= min(report.n_predicted, report.m_new)

    def test_fixture_prediction(self, ctx):
        pred = ctx.predict("common_neighbors", ThresholdRule.percentile(1.0))
        report = evaluate(pred, ctx.new_edges, ctx.candidates)
        assert report.accuracy == 1.0
        assert report.recall == 0.5
        assert report.random_guess_accuracy == pytest.approx(2 / 3)
        assert report.beats_random


class TestEvalReport:

    REPORT = EvalReport(4, 2, 3, 10, 0.5, 2 / 3, 0.3)

    def test_json(self):
        assert json.loads(self.REPORT.to_json())["n_correct"] == 2

    def test_csv(self):
        header, row = self.REPORT.to_csv().splitlines()
        assert header.split(",")[:3] == ["n_predicted", "n_correct", "m_new"]
        assert row.startswith("4,2,3,10,0.5,")


class TestSweep:

    def test_row_counts(self, ctx):
        table = sweep(ctx, communities=(1, 2, 3, 4), max_workers=1)
        assert len(table.by_family(MethodFamily.COAUTHOR)) == 16
        assert len(table.by_family(MethodFamily.BIPARTITE)) == 20
        assert len(table.by_family(MethodFamily.COMMUNITY)) == 4
        assert [row.family for row in table.rows] == sorted(
            (row.family for row in table.rows), key=list(MethodFamily).index
        )

    def test_out_of_range_n_skipped(self, ctx, caplog):
        table = sweep(ctx, scores=["b"], communities=(2, 9))
        assert [row.parameter for row in table.by_family(MethodFamily.COMMUNITY)] == ["N=2"]
        assert "Skipping N=9" in caplog.text

    def test_parameter_labels(self, ctx):
        table = sweep(ctx, scores=["cooc1", "path2"], percentiles=(1.0, 0.4), gates=("NA", "inf", 4), communities=())
        assert [(row.method, row.parameter) for row in table.rows] == [
            ("path2", "p=1"),
            ("path2", "p=0.4"),
            ("cooc1", "d=NA"),
            ("cooc1", "d=inf"),
            ("cooc1", "d=4"),
        ]

    def test_coauthor_scores_agree_at_p_one(self, ctx):
        table = sweep(ctx, percentiles=(1.0,), gates=(), communities=())
        outcomes = {(r.report.n_predicted, r.report.n_correct) for r in table.by_family(MethodFamily.COAUTHOR)}
        assert outcomes == {(1, 1)}

    def test_threads_match_inline(self, split):
        inline = sweep(split, communities=(2, 3), max_workers=1)
        threaded = sweep(split, communities=(2, 3), max_workers=4)
        assert [r.to_dict() for r in inline.rows] == [r.to_dict() for r in threaded.rows]

    def test_text_table(self, ctx):
        text = sweep(ctx, scores=["b"], percentiles=(1.0,), communities=(2,)).to_text()
        lines = text.splitlines()
        assert lines[0] == "new links: 2 of 3 candidate pairs; random guess accuracy: 0.667"
        assert "[coauthor]" in lines
        assert "[community]" in lines
        assert "[bipartite]" not in lines

    def test_csv_header(self, ctx):
        csv_text = sweep(ctx, scores=["b"], percentiles=(1.0,), communities=()).to_csv()
        header, row = csv_text.splitlines()
        assert header.startswith("family,method,parameter,threshold")
        assert row.startswith("coauthor,common_neighbors,p=1,0.0,1,1,2,3,1.0,0.5,")
