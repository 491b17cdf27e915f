"""
Corpus Parser

Parses newline-delimited JSON researcher and publication files into
Researcher and PublicationRecord objects. Every malformed record is
reported with its file and line number.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterator, List, Tuple, Union

from schoolink.engine.errors import ParseError
from schoolink.ingest.records import PublicationRecord, Researcher
from schoolink.platform.fs import read_file


def iter_jsonl(content: str, source: str) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """Yield ``(line_number, record)`` for every nonblank line."""
    for line_num, line in enumerate(content.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON ({e.msg})", file_path=source, line=line_num) from None
        if not isinstance(record, dict):
            raise ParseError("record must be a JSON object", file_path=source, line=line_num)
        yield line_num, record


class CorpusParser:
    """
    Parse researchers and publications files.

    Field rules:
    - researcher_id: nonempty string
    - schools, faculties: nonempty arrays of nonempty strings
    - pub_id: nonempty string, unique within the file
    - year: integer
    - journal: string, may be empty
    - authors: nonempty array of strings
    """

    def __init__(self) -> None:
        self.researchers: Dict[str, Researcher] = {}
        self.publications: List[PublicationRecord] = []

    def parse(
        self,
        researchers_path: Union[str, Path],
        publications_path: Union[str, Path],
    ) -> Tuple[Dict[str, Researcher], List[PublicationRecord]]:
        self.parse_researchers(read_file(researchers_path), str(researchers_path))
        self.parse_publications(read_file(publications_path), str(publications_path))
        return self.researchers, self.publications

    def parse_researchers(self, content: str, source: str = "<researchers>") -> None:
        for line_num, rec in iter_jsonl(content, source):
            rid = self._string(rec, "researcher_id", source, line_num)
            if rid in self.researchers:
                raise ParseError(f"duplicate researcher_id {rid!r}", file_path=source, line=line_num)
            schools = self._string_set(rec, "schools", source, line_num)
            faculties = self._string_set(rec, "faculties", source, line_num)
            self.researchers[rid] = Researcher(rid, schools, faculties)

    def parse_publications(self, content: str, source: str = "<publications>") -> None:
        seen = {p.pub_id for p in self.publications}
        for line_num, rec in iter_jsonl(content, source):
            pub_id = self._string(rec, "pub_id", source, line_num)
            if pub_id in seen:
                raise ParseError(f"duplicate pub_id {pub_id!r}", file_path=source, line=line_num)
            seen.add(pub_id)

            year = rec.get("year")
            if isinstance(year, bool) or not isinstance(year, int):
                raise ParseError("'year' must be an integer", file_path=source, line=line_num)

            journal = rec.get("journal", "")
            if journal is None:
                journal = ""
            if not isinstance(journal, str):
                raise ParseError("'journal' must be a string", file_path=source, line=line_num)

            authors = self._string_set(rec, "authors", source, line_num)
            self.publications.append(
                PublicationRecord(pub_id, year, journal.strip(), authors)
            )

    @staticmethod
    def _string(rec: Dict[str, Any], key: str, source: str, line: int) -> str:
        value = rec.get(key)
        if not isinstance(value, str) or not value.strip():
            raise ParseError(f"'{key}' must be a nonempty string", file_path=source, line=line)
        return value.strip()

    @staticmethod
    def _string_set(rec: Dict[str, Any], key: str, source: str, line: int) -> frozenset:
        value = rec.get(key)
        if not isinstance(value, list) or not value:
            raise ParseError(f"'{key}' must be a nonempty array", file_path=source, line=line)
        if not all(isinstance(v, str) and v.strip() for v in value):
            raise ParseError(f"'{key}' must contain nonempty strings", file_path=source, line=line)
        return frozenset(v.strip() for v in value)
