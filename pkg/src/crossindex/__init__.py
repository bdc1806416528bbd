"""In-memory cross-database customer identity index and search engine."""

from .errors import (
    BenchMismatch,
    CorruptSnapshot,
    CrossIndexError,
    DuplicateKey,
    EmptyName,
    EmptyQuery,
    InvalidParams,
    IoFailure,
    MalformedRow,
    MissingIdentity,
    SourceUnreadable,
    UnknownKey,
)
from .index import GlobalIndex, IndexStats, ResultSet, SearchRequest, UpdateReport
from .ingest import SourceConfig, load_sources
from .model import (
    CustomerType,
    NormalizedRecord,
    PartitionKey,
    RawRecord,
    RecordKey,
    UNKNOWN_COUNTRY,
)
from .normalize import AbbreviationTable, normalize_record, tokenize
from .synth import GeneratorParams, generate

__all__ = [
    "AbbreviationTable",
    "BenchMismatch",
    "CorruptSnapshot",
    "CrossIndexError",
    "CustomerType",
    "DuplicateKey",
    "EmptyName",
    "EmptyQuery",
    "GeneratorParams",
    "GlobalIndex",
    "IndexStats",
    "InvalidParams",
    "IoFailure",
    "MalformedRow",
    "MissingIdentity",
    "NormalizedRecord",
    "PartitionKey",
    "RawRecord",
    "RecordKey",
    "ResultSet",
    "SearchRequest",
    "SourceConfig",
    "SourceUnreadable",
    "UnknownKey",
    "UpdateReport",
    "UNKNOWN_COUNTRY",
    "generate",
    "load_sources",
    "normalize_record",
    "tokenize",
]
