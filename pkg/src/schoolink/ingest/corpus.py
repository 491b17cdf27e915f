"""
Corpus: the validated researcher cohort and its publications.

A Corpus is built once and never mutated. Train and test halves produced by
``split_by_year`` share the researcher cohort (and therefore the dense
researcher index used by every graph).
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional, Union

from schoolink.engine.errors import DanglingReferenceError, ValidationError
from schoolink.ingest.organisations import OrganisationTable, load_organisations
from schoolink.ingest.parser import CorpusParser
from schoolink.ingest.records import PublicationRecord, Researcher, YearInterval
from schoolink.platform.fs import atomic_write, makedirs

logger = logging.getLogger(__name__)

DEFAULT_YEAR_RANGE = YearInterval(1900, 2100)
RESEARCHERS_FILE = "researchers.jsonl"
PUBLICATIONS_FILE = "publications.jsonl"


@dataclass(frozen=True, eq=False)
class Corpus:
    """Researchers (I), their publications, schools (O) and journals (J)."""

    researchers: Mapping[str, Researcher]
    publications: tuple[PublicationRecord, ...]
    schools: frozenset[str] = field(init=False)
    journals: frozenset[str] = field(init=False)
    researcher_ids: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "researchers", MappingProxyType(dict(self.researchers)))
        object.__setattr__(
            self,
            "schools",
            frozenset(s for r in self.researchers.values() for s in r.schools),
        )
        object.__setattr__(
            self,
            "journals",
            frozenset(p.journal for p in self.publications if p.journal),
        )
        # Dense researcher index shared by every graph built from this cohort.
        object.__setattr__(self, "researcher_ids", tuple(sorted(self.researchers)))

    @classmethod
    def from_records(
        cls,
        researchers: Iterable[Researcher] | Mapping[str, Researcher],
        publications: Iterable[PublicationRecord],
        organisations: Optional[OrganisationTable] = None,
        year_range: YearInterval = DEFAULT_YEAR_RANGE,
    ) -> Corpus:
        """Validate records and build a Corpus."""
        if isinstance(researchers, Mapping):
            by_id = dict(researchers)
        else:
            by_id = {}
            for r in researchers:
                if r.researcher_id in by_id:
                    raise ValidationError(f"duplicate researcher_id {r.researcher_id!r}")
                by_id[r.researcher_id] = r
        pubs = tuple(publications)

        for r in by_id.values():
            if not r.schools or not r.faculties:
                raise ValidationError(
                    f"researcher {r.researcher_id!r} needs at least one school and one faculty"
                )
            if organisations is not None:
                _check_affiliations(r, organisations)

        seen: set[str] = set()
        dangling: dict[str, set[str]] = {}
        for p in pubs:
            if not p.pub_id:
                raise ValidationError("publication with empty pub_id")
            if p.pub_id in seen:
                raise ValidationError(f"duplicate pub_id {p.pub_id!r}")
            seen.add(p.pub_id)
            if not p.authors:
                raise ValidationError(f"publication {p.pub_id!r} has no authors")
            if p.year not in year_range:
                raise ValidationError(
                    f"publication {p.pub_id!r} year {p.year} outside {year_range}"
                )
            unknown = {a for a in p.authors if a not in by_id}
            if unknown:
                dangling[p.pub_id] = unknown
        if dangling:
            raise DanglingReferenceError(dangling)

        return cls(by_id, pubs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return dict(self.researchers) == dict(other.researchers) and sorted(
            self.publications, key=_pub_key
        ) == sorted(other.publications, key=_pub_key)

    def __hash__(self) -> int:
        return hash((self.researcher_ids, len(self.publications)))

    @property
    def index(self) -> dict[str, int]:
        """researcher_id -> dense index."""
        return {rid: i for i, rid in enumerate(self.researcher_ids)}

    def with_publications(self, publications: Iterable[PublicationRecord]) -> Corpus:
        """Same cohort, different publications."""
        return Corpus(self.researchers, tuple(publications))

    def summary(self) -> dict[str, dict[str, int]]:
        """Per-school staff and publication counts (multi-affiliations count in each school)."""
        staff: Counter[str] = Counter()
        for r in self.researchers.values():
            staff.update(r.schools)
        outputs: Counter[str] = Counter()
        for p in self.publications:
            schools = {s for a in p.authors for s in self.researchers[a].schools}
            outputs.update(schools)
        return {
            school: {"staff": staff[school], "publications": outputs[school]}
            for school in sorted(self.schools)
        }

    def to_jsonl(self, directory: Union[str, Path]) -> tuple[Path, Path]:
        """Write ``researchers.jsonl`` and ``publications.jsonl`` into ``directory``."""
        out = makedirs(directory)
        researchers = "".join(
            json.dumps(self.researchers[rid].to_dict(), sort_keys=True) + "\n"
            for rid in self.researcher_ids
        )
        publications = "".join(
            json.dumps(p.to_dict(), sort_keys=True) + "\n"
            for p in sorted(self.publications, key=_pub_key)
        )
        return (
            atomic_write(out / RESEARCHERS_FILE, researchers),
            atomic_write(out / PUBLICATIONS_FILE, publications),
        )


class YearSplit(NamedTuple):
    """Train and test halves of a corpus plus the number of dropped outputs."""

    train: Corpus
    test: Corpus
    dropped: int


def load_corpus(
    researchers_path: Union[str, Path],
    publications_path: Union[str, Path],
    organisations: Optional[Union[str, Path, OrganisationTable]] = None,
    year_range: YearInterval = DEFAULT_YEAR_RANGE,
) -> Corpus:
    """
    Load and validate a corpus from JSONL files.

    Args:
        researchers_path: ``researchers.jsonl``
        publications_path: ``publications.jsonl``
        organisations: table (or CSV path) to check school -> faculty affiliations against;
            ``None`` skips the check
        year_range: accepted publication years
    """
    parser = CorpusParser()
    researchers, publications = parser.parse(researchers_path, publications_path)
    table = (
        organisations
        if organisations is None or isinstance(organisations, OrganisationTable)
        else load_organisations(organisations)
    )
    corpus = Corpus.from_records(researchers, publications, table, year_range)
    logger.info(
        "Loaded %d researchers, %d publications, %d schools, %d journals",
        len(corpus.researchers),
        len(corpus.publications),
        len(corpus.schools),
        len(corpus.journals),
    )
    return corpus


def split_by_year(corpus: Corpus, train_years: YearInterval, test_years: YearInterval) -> YearSplit:
    """Partition publications by year; both halves keep the full researcher cohort."""
    if train_years.overlaps(test_years):
        raise ValidationError(f"train years {train_years} overlap test years {test_years}")

    train: list[PublicationRecord] = []
    test: list[PublicationRecord] = []
    dropped = 0
    for p in corpus.publications:
        if p.year in train_years:
            train.append(p)
        elif p.year in test_years:
            test.append(p)
        else:
            dropped += 1

    if dropped:
        logger.info("Dropped %d publication(s) outside %s and %s", dropped, train_years, test_years)
    logger.info("Split: %d train / %d test publications", len(train), len(test))
    return YearSplit(corpus.with_publications(train), corpus.with_publications(test), dropped)


def _check_affiliations(r: Researcher, organisations: OrganisationTable) -> None:
    for school in sorted(r.schools):
        faculty = organisations.faculty_of(school)
        if faculty is None:
            raise ValidationError(
                f"researcher {r.researcher_id!r}: school {school!r} not in organisation table"
            )
        if faculty not in r.faculties:
            raise ValidationError(
                f"researcher {r.researcher_id!r}: school {school!r} belongs to faculty "
                f"{faculty!r}, not listed in {sorted(r.faculties)}"
            )


def _pub_key(p: PublicationRecord) -> str:
    return p.pub_id
