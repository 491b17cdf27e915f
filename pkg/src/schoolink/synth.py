"""
Synthetic corpus generator.

Builds a seeded, byte-reproducible corpus with the shape the predictor is
meant for:

- Schools of very uneven size, each with its own home journals;
- training-period collaborations inside every School and across a random
  connected set of School pairs (E^train);
- planted School pairs that never collaborate in training but whose
  researchers are two hops apart through a bridge School and share a
  journal; each planted pair publishes together in the test period, so
  E^new is exactly the planted set.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Optional, Union

import numpy as np

from schoolink.engine.errors import ValidationError
from schoolink.ingest.corpus import Corpus
from schoolink.ingest.records import PublicationRecord, Researcher, YearInterval
from schoolink.platform.fs import atomic_write, makedirs

logger = logging.getLogger(__name__)

TRAIN_YEARS = YearInterval(2008, 2010)
TEST_YEARS = YearInterval(2011, 2013)
MIN_SCHOOL_SIZE = 3
SIZE_SKEW = 0.8
SCHOOLS_PER_FACULTY = 4
EXTRA_TRAIN_SHARE = 0.5
REPEAT_SHARE = 0.6
SIGNAL_AUTHORS = 3
SIGNAL_PAPERS = 4

Pair = tuple[int, int]


@dataclass(frozen=True)
class SynthParams:
    seed: int = 0
    n_schools: int = 20
    n_researchers: int = 300
    n_journals: int = 40
    planted_new_links: int = 12

    def validate(self) -> None:
        for name in ("n_schools", "n_researchers", "n_journals"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if self.seed < 0:
            raise ValidationError(f"seed must be nonnegative, got {self.seed}")
        if self.planted_new_links < 0:
            raise ValidationError(f"planted_new_links must be nonnegative, got {self.planted_new_links}")
        if self.n_schools < 2:
            raise ValidationError("at least two schools are needed")
        if self.n_researchers < MIN_SCHOOL_SIZE * self.n_schools:
            raise ValidationError(
                f"{self.n_researchers} researchers cannot fill {self.n_schools} schools",
                f"need at least {MIN_SCHOOL_SIZE} per school",
            )
        n_pairs = self.n_schools * (self.n_schools - 1) // 2
        # a spanning tree plus one bridge pair per planted link must avoid the planted pairs
        if self.planted_new_links and (
            self.n_schools < 3 or self.planted_new_links > n_pairs - self.n_schools - self.planted_new_links
        ):
            raise ValidationError(
                f"cannot plant {self.planted_new_links} new links among {self.n_schools} schools"
            )


@dataclass(frozen=True)
class SynthResult:
    corpus: Corpus
    planted: tuple[tuple[str, str], ...]
    train_pairs: tuple[tuple[str, str], ...]
    files: tuple[Path, ...] = ()


class CorpusGenerator:
    """Draws one synthetic corpus from ``SynthParams``."""

    def __init__(self, params: SynthParams):
        params.validate()
        self.params = params
        self.rng = np.random.default_rng(params.seed)
        n = params.n_schools
        self.schools = [f"S{k + 1:02d}" for k in range(n)]
        self.faculties = [f"F{k // SCHOOLS_PER_FACULTY + 1}" for k in range(n)]
        self.journals = [f"J{j + 1:02d}" for j in range(params.n_journals)]
        self.home = [
            sorted({j for j in range(params.n_journals) if j % n == k} | {k % params.n_journals})
            for k in range(n)
        ]
        self.members: list[list[str]] = []
        self.publications: list[PublicationRecord] = []

    # ------------------------------------------------------------------

    def generate(self) -> SynthResult:
        researchers = self._researchers()
        planted = self._planted_pairs()
        train = self._train_pairs(planted)
        bridges = self._bridges(planted, train)

        self._intra_papers(TRAIN_YEARS, per_member=2, chain=True)
        for a, b in sorted(train):
            for _ in range(int(self.rng.integers(1, 3))):
                self._cross_paper(a, b, TRAIN_YEARS)
        for (k, l), (i, h, j) in sorted(bridges.items()):
            self._paper(TRAIN_YEARS, [i, h], self._home_journal(k))
            self._paper(TRAIN_YEARS, [h, j], self._home_journal(l))
        for k, l in sorted(planted):
            self._planted_signal(k, l)

        self._intra_papers(TEST_YEARS, per_member=1, chain=False)
        for a, b in sorted(train):
            if self.rng.random() < REPEAT_SHARE:
                self._cross_paper(a, b, TEST_YEARS)
        for (k, l), (i, _, j) in sorted(bridges.items()):
            self._paper(TEST_YEARS, [i, j], self._shared_journal(k, l))

        corpus = Corpus.from_records(researchers, self.publications)
        logger.info(
            "Synthesised %d researchers, %d publications, %d training pairs, %d planted links",
            len(researchers), len(self.publications), len(train), len(planted),
        )
        return SynthResult(
            corpus,
            tuple((self.schools[k], self.schools[l]) for k, l in sorted(planted)),
            tuple((self.schools[a], self.schools[b]) for a, b in sorted(train)),
        )

    # ------------------------------------------------------------------
    # Cohort
    # ------------------------------------------------------------------

    def _researchers(self) -> list[Researcher]:
        p = self.params
        weights = 1.0 / np.arange(1, p.n_schools + 1) ** SIZE_SKEW
        weights = self.rng.permutation(weights)
        extra = self.rng.multinomial(p.n_researchers - MIN_SCHOOL_SIZE * p.n_schools, weights / weights.sum())
        sizes = MIN_SCHOOL_SIZE + extra
        out: list[Researcher] = []
        rid = 0
        for k, size in enumerate(sizes.tolist()):
            staff = []
            for _ in range(size):
                rid += 1
                staff.append(f"R{rid:04d}")
                out.append(Researcher(staff[-1], frozenset({self.schools[k]}), frozenset({self.faculties[k]})))
            self.members.append(staff)
        return out

    # ------------------------------------------------------------------
    # School pairs
    # ------------------------------------------------------------------

    def _planted_pairs(self) -> set[Pair]:
        pairs = list(combinations(range(self.params.n_schools), 2))
        chosen = self.rng.choice(len(pairs), size=self.params.planted_new_links, replace=False)
        return {pairs[c] for c in sorted(chosen.tolist())}

    def _train_pairs(self, planted: set[Pair]) -> set[Pair]:
        """Random spanning tree plus extra pairs, none of them planted."""
        n = self.params.n_schools
        order = self.rng.permutation(n).tolist()
        train: set[Pair] = set()
        for t in range(1, n):
            node = order[t]
            options = [o for o in order[:t] if _pair(node, o) not in planted]
            if not options:
                options = [o for o in order[t + 1:] + order[:t] if _pair(node, o) not in planted]
            if not options:
                raise ValidationError(f"school {self.schools[node]} cannot join the training network")
            train.add(_pair(node, options[int(self.rng.integers(len(options)))]))
        free = [pair for pair in combinations(range(n), 2) if pair not in planted and pair not in train]
        n_extra = min(len(free), int(EXTRA_TRAIN_SHARE * n))
        for c in sorted(self.rng.choice(len(free), size=n_extra, replace=False).tolist()):
            train.add(free[c])
        return train

    def _bridges(self, planted: set[Pair], train: set[Pair]) -> dict[Pair, tuple[str, str, str]]:
        """Pick a bridge School m for every planted (k, l) and the researchers i, h, j."""
        n = self.params.n_schools
        out: dict[Pair, tuple[str, str, str]] = {}
        for k, l in sorted(planted):
            common = [m for m in range(n) if _pair(k, m) in train and _pair(m, l) in train]
            if not common:
                usable = [
                    m for m in range(n)
                    if m not in (k, l) and _pair(k, m) not in planted and _pair(m, l) not in planted
                ]
                if not usable:
                    raise ValidationError(
                        f"no bridge school for planted pair {self.schools[k]}-{self.schools[l]}"
                    )
                m = usable[int(self.rng.integers(len(usable)))]
                train.update({_pair(k, m), _pair(m, l)})
            else:
                m = common[int(self.rng.integers(len(common)))]
            out[(k, l)] = (self._pick(k), self._pick(m), self._pick(l))
        return out

    # ------------------------------------------------------------------
    # Publications
    # ------------------------------------------------------------------

    def _intra_papers(self, years: YearInterval, per_member: int, chain: bool) -> None:
        for k, staff in enumerate(self.members):
            if chain:
                for a, b in zip(staff, staff[1:]):
                    self._paper(years, [a, b], self._home_journal(k))
            for _ in range(per_member * len(staff)):
                size = int(self.rng.integers(1, min(3, len(staff)) + 1))
                authors = self.rng.choice(len(staff), size=size, replace=False).tolist()
                self._paper(years, [staff[a] for a in authors], self._home_journal(k))

    def _cross_paper(self, a: int, b: int, years: YearInterval) -> None:
        journal = self._home_journal(a if self.rng.random() < 0.5 else b)
        self._paper(years, [self._pick(a), self._pick(b)], journal)

    def _planted_signal(self, k: int, l: int) -> None:
        """Researchers of the smaller School publish alone in the larger School's journal."""
        small, _ = sorted((k, l), key=lambda s: (len(self.members[s]), s))
        journal = self._shared_journal(k, l)
        staff = self.members[small]
        chosen = self.rng.choice(len(staff), size=min(SIGNAL_AUTHORS, len(staff)), replace=False)
        for a in sorted(chosen.tolist()):
            for _ in range(SIGNAL_PAPERS):
                self._paper(TRAIN_YEARS, [staff[a]], journal)

    def _shared_journal(self, k: int, l: int) -> str:
        _, large = sorted((k, l), key=lambda s: (len(self.members[s]), s))
        return self.journals[self.home[large][0]]

    def _home_journal(self, k: int) -> str:
        return self.journals[self.home[k][int(self.rng.integers(len(self.home[k])))]]

    def _pick(self, k: int) -> str:
        staff = self.members[k]
        return staff[int(self.rng.integers(len(staff)))]

    def _paper(self, years: YearInterval, authors: list[str], journal: str) -> None:
        year = int(self.rng.integers(years.start, years.end + 1))
        pub_id = f"P{len(self.publications) + 1:06d}"
        self.publications.append(PublicationRecord(pub_id, year, journal, frozenset(authors)))

    # ------------------------------------------------------------------

    def organisations_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["school", "faculty", "name"])
        for school, faculty in zip(self.schools, self.faculties):
            writer.writerow([school, faculty, f"School {school[1:]}"])
        return buf.getvalue()


def generate_corpus(
    seed: int = 0,
    n_schools: int = 20,
    n_researchers: int = 300,
    n_journals: int = 40,
    planted_new_links: int = 12,
    out: Optional[Union[str, Path]] = None,
) -> SynthResult:
    """
    Generate a synthetic corpus and optionally write it to ``out``.

    Files written: researchers.jsonl, publications.jsonl, organisations.csv
    and planted.csv (the planted School pairs).
    """
    params = SynthParams(seed, n_schools, n_researchers, n_journals, planted_new_links)
    generator = CorpusGenerator(params)
    result = generator.generate()
    if out is None:
        return result

    directory = makedirs(out)
    researchers, publications = result.corpus.to_jsonl(directory)
    planted = "school_k,school_l\n" + "".join(f"{k},{l}\n" for k, l in result.planted)
    files = (
        researchers,
        publications,
        atomic_write(directory / "organisations.csv", generator.organisations_csv()),
        atomic_write(directory / "planted.csv", planted),
    )
    logger.info("Wrote synthetic corpus to %s", directory)
    return SynthResult(result.corpus, result.planted, result.train_pairs, files)


def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)
