"""
Schoolink Pipeline Runner

High-level runner that coordinates corpus loading, the year split, the
link predictor, the community baseline, evaluation and file output.
"""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import yaml

from schoolink.engine.community import cut
from schoolink.engine.config import RunConfig
from schoolink.engine.context import SplitContext
from schoolink.engine.errors import ParseError
from schoolink.engine.evaluation import evaluate, sweep
from schoolink.engine.predictor import Prediction, RuleKind, ThresholdRule
from schoolink.engine.results import EvalReport, MethodFamily, SweepRow, SweepTable
from schoolink.export import comparison_graph, school_faculties
from schoolink.ingest.corpus import Corpus, YearSplit, load_corpus, split_by_year
from schoolink.ingest.organisations import OrganisationTable, load_organisations
from schoolink.network.school import SchoolEdgeSet, school_pair
from schoolink.platform.fs import atomic_write, makedirs, read_file

logger = logging.getLogger(__name__)


class PipelineRunner:
    """
    Runs the pipeline stages for one RunConfig.

    The corpus, the split and every derived graph are loaded once and
    shared between stages.
    """

    def __init__(self, config: RunConfig):
        config.validate()
        self.config = config
        self._organisations: Optional[OrganisationTable] = None
        self._corpus: Optional[Corpus] = None
        self._split: Optional[YearSplit] = None
        self._context: Optional[SplitContext] = None

    # ------------------------------------------------------------------
    # Inputs
    # ------------------------------------------------------------------

    @property
    def organisations(self) -> Optional[OrganisationTable]:
        source = self.config.organisations_source
        if source is None:
            logger.info("No organisation table; skipping the School-to-Faculty check")
            return None
        if self._organisations is None:
            self._organisations = load_organisations(None if source == "default" else source)
        return self._organisations

    @property
    def corpus(self) -> Corpus:
        if self._corpus is None:
            self._corpus = load_corpus(
                self.config.researchers_path,
                self.config.publications_path,
                self.organisations,
            )
        return self._corpus

    @property
    def split(self) -> YearSplit:
        if self._split is None:
            self._split = split_by_year(self.corpus, self.config.train_years, self.config.test_years)
        return self._split

    @property
    def context(self) -> SplitContext:
        if self._context is None:
            self._context = SplitContext(self.split, self.config.max_workers)
        return self._context

    @property
    def out_dir(self) -> Path:
        return makedirs(self.config.out)

    def _write(self, name: str, content: str) -> Path:
        path = atomic_write(self.out_dir / name, content)
        logger.info("Wrote %s", path)
        return path

    # ------------------------------------------------------------------
    # Stages
    # ------------------------------------------------------------------

    def run_ingest(self) -> Dict[str, Dict[str, int]]:
        """Validate the corpus and write per-School staff and publication counts."""
        summary = self.corpus.summary()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["school", "staff", "publications"])
        for school, counts in summary.items():
            writer.writerow([school, counts["staff"], counts["publications"]])
        self._write("schools.csv", buf.getvalue())
        return summary

    def run_split(self) -> Tuple[Path, Path]:
        """Write the train and test halves as JSONL directories."""
        split = self.split
        split.train.to_jsonl(self.out_dir / "train")
        split.test.to_jsonl(self.out_dir / "test")
        return self.out_dir / "train", self.out_dir / "test"

    def rule(self) -> ThresholdRule:
        if self.config.rule_kind is RuleKind.MEDIAN:
            return ThresholdRule.median()
        return ThresholdRule.percentile(self.config.p, self.config.population)

    def predict(self) -> Prediction:
        cfg = self.config
        return self.context.predict(cfg.score, self.rule(), cfg.d)

    def run_predict(self) -> Tuple[Prediction, EvalReport]:
        """Steps 1-3 end to end, then evaluation; writes prediction, weights, report and run log."""
        cfg = self.config
        ctx = self.context
        prediction = self.predict()
        report = evaluate(prediction, ctx.new_edges, ctx.candidates)

        self._write("prediction.csv", prediction.to_csv())
        self._write("weights.csv", ctx.weights(cfg.score, cfg.d).to_csv())
        self._write("report.csv", report.to_csv())
        self._write("run.yml", self._run_log(prediction, report))
        logger.info(
            "%s %s: %d predicted, %d correct of %d new (accuracy %.3f, random %.3f)",
            cfg.score.value, prediction.rule.label, report.n_predicted, report.n_correct,
            report.m_new, report.accuracy, report.random_guess_accuracy,
        )
        return prediction, report

    def run_baseline(self) -> SweepTable:
        """Community baseline for every configured N; writes dendrogram, partitions and report."""
        ctx = self.context
        dendrogram = ctx.dendrogram
        self._write("dendrogram.txt", dendrogram.to_text())

        table = SweepTable()
        for n in self.config.communities:
            partition = cut(dendrogram, n)
            edges = ctx.baseline(n)
            self._write(f"partition_N{n}.csv", partition.to_csv())
            self._write(f"baseline_N{n}.csv", _edges_csv(edges))
            table.add(
                SweepRow(
                    MethodFamily.COMMUNITY,
                    "community",
                    f"N={n}",
                    evaluate(edges, ctx.new_edges, ctx.candidates),
                )
            )
        self._write("baseline.csv", table.to_csv())
        return table

    def run_evaluate(self, prediction_path: str) -> EvalReport:
        """Score an existing prediction CSV (school_k, school_l columns) against the split."""
        edges = read_edges_csv(prediction_path)
        ctx = self.context
        report = evaluate(edges, ctx.new_edges, ctx.candidates)
        self._write("report.csv", report.to_csv())
        return report

    def run_sweep(self) -> SweepTable:
        table = sweep(
            self.context,
            communities=self.config.communities,
            population=self.config.population,
            max_workers=self.config.max_workers,
        )
        self._write("sweep.csv", table.to_csv())
        self._write("sweep.txt", table.to_text())
        return table

    def run_export(self) -> Path:
        """Graph of E^pred and E^new for the configured score and rule."""
        cfg = self.config
        ctx = self.context
        prediction = self.predict()
        faculties = school_faculties(self.split.train, self.organisations)
        graph = comparison_graph(
            prediction,
            ctx.new_edges,
            ctx.test_weights(cfg.score, cfg.d),
            faculties,
            name=f"{cfg.score.value}_{prediction.rule.label}",
        )
        return graph.write(self.out_dir / f"comparison{cfg.format.suffix}", cfg.format)

    # ------------------------------------------------------------------

    def _run_log(self, prediction: Prediction, report: EvalReport) -> str:
        ctx = self.context
        log = {
            "config": self.config.to_dict(),
            "threshold": prediction.threshold_value,
            "rule": prediction.rule.label,
            "edges": {
                "train": len(ctx.train_edges),
                "test": len(ctx.test_edges),
                "new": len(ctx.new_edges),
                "candidates": len(ctx.candidates),
            },
            "report": report.to_dict(),
        }
        return yaml.safe_dump(log, sort_keys=False)


def read_edges_csv(path: str) -> SchoolEdgeSet:
    """Read ``school_k,school_l`` rows (extra columns ignored)."""
    reader = csv.DictReader(io.StringIO(read_file(path)))
    if not reader.fieldnames or not {"school_k", "school_l"} <= set(reader.fieldnames):
        raise ParseError("expected columns school_k and school_l", file_path=path, line=1)
    pairs: List[Tuple[str, str]] = []
    for row in reader:
        k, l = (row["school_k"] or "").strip(), (row["school_l"] or "").strip()
        if not k or not l or k == l:
            raise ParseError("school_k and school_l must be two distinct codes", file_path=path, line=reader.line_num)
        pairs.append(school_pair(k, l))
    return SchoolEdgeSet(frozenset(pairs))


def _edges_csv(edges: SchoolEdgeSet) -> str:
    return "school_k,school_l\n" + "".join(f"{k},{l}\n" for k, l in edges)

