"""
Organisation table: School code -> Faculty code -> full name.

The package ships the hierarchy of the university the method was first
applied to as ``schoolink/data/organisations.csv``; any CSV with the
columns ``school,faculty,name`` can replace it.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Optional, Union

from schoolink.engine.errors import ParseError
from schoolink.platform.fs import read_file

REQUIRED_COLUMNS = ("school", "faculty", "name")


@dataclass(frozen=True)
class Organisation:
    """One School-level organisation."""

    school: str
    faculty: str
    name: str


class OrganisationTable(Mapping[str, Organisation]):
    """Read-only mapping of school code to its Organisation."""

    def __init__(self, organisations: Mapping[str, Organisation]):
        self._orgs = dict(organisations)

    def __getitem__(self, school: str) -> Organisation:
        return self._orgs[school]

    def __iter__(self) -> Iterator[str]:
        return iter(self._orgs)

    def __len__(self) -> int:
        return len(self._orgs)

    def faculty_of(self, school: str) -> Optional[str]:
        org = self._orgs.get(school)
        return org.faculty if org else None

    @property
    def faculties(self) -> list[str]:
        return sorted({o.faculty for o in self._orgs.values()})

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REQUIRED_COLUMNS)
        for code in sorted(self._orgs):
            org = self._orgs[code]
            writer.writerow([org.school, org.faculty, org.name])
        return buf.getvalue()


def parse_organisations(content: str, source: str = "<string>") -> OrganisationTable:
    """Parse organisation CSV text."""
    reader = csv.DictReader(io.StringIO(content))
    missing = [c for c in REQUIRED_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise ParseError(f"missing column(s): {', '.join(missing)}", file_path=source, line=1)

    orgs: dict[str, Organisation] = {}
    for row in reader:
        line = reader.line_num
        school = (row.get("school") or "").strip()
        faculty = (row.get("faculty") or "").strip()
        if not school or not faculty:
            raise ParseError("school and faculty must be nonempty", file_path=source, line=line)
        if school in orgs and orgs[school].faculty != faculty:
            raise ParseError(
                f"school {school!r} mapped to faculties {orgs[school].faculty!r} and {faculty!r}",
                file_path=source,
                line=line,
            )
        orgs[school] = Organisation(school, faculty, (row.get("name") or "").strip())
    return OrganisationTable(orgs)


def load_organisations(path: Optional[Union[str, Path]] = None) -> OrganisationTable:
    """Load an organisation table; ``None`` loads the packaged default."""
    if path is None:
        content = resources.files("schoolink").joinpath("data/organisations.csv").read_text(
            encoding="utf-8"
        )
        return parse_organisations(content, source="schoolink/data/organisations.csv")
    return parse_organisations(read_file(path), source=str(path))
