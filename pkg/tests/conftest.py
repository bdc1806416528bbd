import pytest

from crossindex.model import CustomerType, RawRecord
from crossindex.normalize import AbbreviationTable


def corporate(fid, cid, name, country="US", **kw):
    return RawRecord(fid=fid, cid=cid, customer_type=CustomerType.CORPORATE,
                     company_name=name, country=country, **kw)


def individual(fid, cid, first, last, country="US", **kw):
    return RawRecord(fid=fid, cid=cid, customer_type=CustomerType.INDIVIDUAL,
                     first_name=first, last_name=last, country=country, **kw)


@pytest.fixture
def table():
    return AbbreviationTable.default()


# The eight-name corporate reference corpus.  One name is shared by two
# customers, so its terminal postings list has two keys.
REFERENCE_COMPANY_ROWS = [
    ("FIRST COMMERCIAL BANK LTD", ("Tarra", "900")),
    ("FIRST BANK LTD OBB ACCOUNT", ("Tarra", "901")),
    ("FIRST AMERICA BANK LTD TRUST ACCOUNT TA 101010", ("Merlu", "1024")),
    ("FIRST AMERICA BANK LTD TRUST ACCOUNT TA 101010", ("Abba", "392")),
    ("FIRST AMERICA BANK LTD TRUST ACCOUNT TA 505055", ("Tarra", "903")),
    ("ABC CAPITAL GROUP", ("Skada", "B123")),
    ("ABC CAPITAL NEW YORK BRANCH", ("Abba", "566")),
    ("BANK OF UBUBA", ("Tarra", "905")),
    ("INTERNATIONAL DDD INVEST CORP", ("Tarra", "906")),
]


@pytest.fixture
def company_corpus():
    return [corporate(fid, cid, name) for name, (fid, cid) in REFERENCE_COMPANY_ROWS]


@pytest.fixture
def individual_corpus():
    """Three individuals reproducing the reference name/address index rows."""
    return [
        individual("Abba", "1234", "John", "Smith", street="123, Sunset"),
        individual("Merlu", "112", "Murphy", "John", street="Avenue"),
        individual("Skada", "347", "Peter", "Chang", street="123 Hill"),
    ]
