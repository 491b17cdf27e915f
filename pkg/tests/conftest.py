"""Shared fixtures: the shipped fixture corpus and random corpus factories."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
import pytest

from schoolink.engine.context import SplitContext
from schoolink.ingest import (
    Corpus,
    PublicationRecord,
    Researcher,
    YearInterval,
    load_corpus,
    load_organisations,
    split_by_year,
)
from schoolink.network import build_coauthor_graph, build_incidence_graph

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "corpus"
TRAIN = YearInterval(2008, 2010)
TEST = YearInterval(2011, 2013)


@pytest.fixture(autouse=True)
def _reset_cli_logging():
    """The CLI detaches the package logger from the root; undo that between tests."""
    yield
    root = logging.getLogger("schoolink")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.setLevel(logging.NOTSET)
    root.propagate = True


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture
def corpus() -> Corpus:
    return load_corpus(
        CORPUS_DIR / "researchers.jsonl",
        CORPUS_DIR / "publications.jsonl",
        load_organisations(CORPUS_DIR / "organisations.csv"),
    )


@pytest.fixture
def split(corpus):
    return split_by_year(corpus, TRAIN, TEST)


@pytest.fixture
def train_graph(split):
    return build_coauthor_graph(split.train)


@pytest.fixture
def incidence(split):
    return build_incidence_graph(split.train)


@pytest.fixture
def ctx(split) -> SplitContext:
    return SplitContext(split, max_workers=1)


def make_corpus(
    affiliations: dict[str, Iterable[str]],
    papers: Iterable[tuple],
) -> Corpus:
    """
    Build a corpus from ``{researcher: schools}`` and ``(authors, journal[, year])`` tuples.

    Every School sits in faculty ``F``; publication ids are assigned in order.
    """
    researchers = [
        Researcher(rid, frozenset(schools), frozenset({"F"})) for rid, schools in affiliations.items()
    ]
    pubs = []
    for n, paper in enumerate(papers, 1):
        authors, journal = paper[0], paper[1]
        year = paper[2] if len(paper) > 2 else 2009
        pubs.append(PublicationRecord(f"p{n:03d}", year, journal, frozenset(authors)))
    return Corpus.from_records(researchers, pubs)


@pytest.fixture
def corpus_factory() -> Callable[..., Corpus]:
    return make_corpus


def random_corpus(
    rng: np.random.Generator,
    n_researchers: int = 30,
    n_schools: int = 5,
    n_journals: int = 10,
    n_papers: int = 40,
    multi_share: float = 0.15,
) -> Corpus:
    """Random corpus; some researchers hold two affiliations and some papers have no journal."""
    schools = [f"S{k}" for k in range(n_schools)]
    affiliations: dict[str, set[str]] = {}
    for i in range(n_researchers):
        home = {schools[int(rng.integers(n_schools))]}
        if rng.random() < multi_share:
            home.add(schools[int(rng.integers(n_schools))])
        affiliations[f"r{i:02d}"] = home
    ids = sorted(affiliations)
    papers = []
    for _ in range(n_papers):
        size = int(rng.integers(1, 4))
        authors = {ids[int(a)] for a in rng.choice(n_researchers, size=size, replace=False)}
        journal = "" if rng.random() < 0.1 else f"J{int(rng.integers(n_journals))}"
        papers.append((authors, journal))
    return make_corpus(affiliations, papers)


@pytest.fixture
def random_corpus_factory() -> Callable[..., Corpus]:
    return random_corpus


def set_partitions(items: list) -> Iterable[list[list]]:
    """Every partition of ``items`` into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller
