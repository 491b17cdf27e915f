"""
Corpus ingest: researchers, publications, organisation table, year split.
"""

from schoolink.ingest.corpus import Corpus, YearSplit, load_corpus, split_by_year
from schoolink.ingest.organisations import Organisation, OrganisationTable, load_organisations
from schoolink.ingest.records import PublicationRecord, Researcher, YearInterval

__all__ = [
    'Corpus',
    'Organisation',
    'OrganisationTable',
    'PublicationRecord',
    'Researcher',
    'YearInterval',
    'YearSplit',
    'load_corpus',
    'load_organisations',
    'split_by_year',
]
