"""Core value types: record keys, raw and normalized records, partitions.

All types here are immutable and safe to share across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

UNKNOWN_COUNTRY = "UNKNOWN"


class CustomerType(enum.Enum):
    CORPORATE = "C"
    INDIVIDUAL = "I"
    JOINT = "J"

    @classmethod
    def from_code(cls, code: str) -> "CustomerType":
        return cls(code.strip().upper())

    def index_type(self) -> "CustomerType":
        """Joint accounts carry person names; they index through the individual path."""
        if self is CustomerType.JOINT:
            return CustomerType.INDIVIDUAL
        return self


@dataclass(frozen=True, order=True, slots=True)
class RecordKey:
    """Globally unique identity of one customer row: (fund id, customer id).

    The cid alone is unique only within one fid.  Both parts are opaque text
    and compared exactly, case-sensitively.  Dataclass ordering gives the
    lexicographic (fid, cid) total order used for all postings lists.
    """

    fid: str
    cid: str

    def __post_init__(self):
        if not self.fid or not self.cid:
            raise ValueError("RecordKey parts must be non-empty")


@dataclass(frozen=True, slots=True)
class RawRecord:
    """One customer row as exported from a logical database.

    Only fid, cid and customer_type are guaranteed present; every other
    field may be empty.
    """

    fid: str
    cid: str
    customer_type: CustomerType
    first_name: str = ""
    last_name: str = ""
    company_name: str = ""
    street: str = ""
    town: str = ""
    zip: str = ""
    country_code: str = ""
    country: str = ""

    @property
    def key(self) -> RecordKey:
        return RecordKey(self.fid, self.cid)


@dataclass(frozen=True, slots=True)
class PartitionKey:
    """One (country, customer-type) bucket of the global index."""

    country: str
    customer_type: CustomerType

    def __post_init__(self):
        if self.customer_type is CustomerType.JOINT:
            raise ValueError("partitions use the index type (corporate/individual)")


@dataclass(frozen=True, slots=True)
class NormalizedRecord:
    """A cleaned record ready for indexing.

    name_tokens is order-significant for corporate customers (company-name
    groups share prefixes) and treated as a set for individuals.  The raw
    record is retained so extraction returns the source row unchanged.
    """

    key: RecordKey
    customer_type: CustomerType
    name_tokens: tuple[str, ...]
    address_tokens: frozenset[str]
    country: str
    raw: RawRecord = field(compare=False)

    @property
    def partition(self) -> PartitionKey:
        return PartitionKey(self.country, self.customer_type.index_type())
