"""The global index: per-(country, customer-type) partitions over a shared
token dictionary, plus the record store and audit log.

Corporate partitions hold a company-name tree (word order matters because of
company-name groups); individual partitions hold a customer-name inverted
index (word order is noise).  Every partition has an address inverted index.
"""

from __future__ import annotations

import datetime as _dt
from collections import Counter
from dataclasses import dataclass, field

from .cntree import CompanyNameTree
from .errors import DuplicateKey, EmptyQuery, UnknownKey
from .interning import TokenInterner
from .inverted import PostingsIndex
from .model import (
    CustomerType,
    NormalizedRecord,
    PartitionKey,
    RawRecord,
    RecordKey,
    UNKNOWN_COUNTRY,
)
from .normalize import AbbreviationTable, canonicalize, normalize_record, tokenize


@dataclass(frozen=True, slots=True)
class SearchRequest:
    """One identity query.  At least one of name/address must be present."""

    name_tokens: tuple[str, ...] | None = None
    address_tokens: frozenset[str] | None = None
    country: str | None = None
    customer_type: CustomerType | None = None
    prefix: bool = False

    def is_empty(self) -> bool:
        return not self.name_tokens and not self.address_tokens


@dataclass(frozen=True, slots=True)
class ResultSet:
    keys: tuple[RecordKey, ...]
    provenance: dict[RecordKey, frozenset[str]] = field(compare=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.keys)


@dataclass(slots=True)
class AuditEvent:
    timestamp: str
    fid: str
    cid: str
    action: str

    def as_line(self) -> str:
        return f"{self.timestamp}\t{self.fid}\t{self.cid}\t{self.action}"


@dataclass(slots=True)
class UpdateReport:
    inserted: list[RecordKey] = field(default_factory=list)
    rejected: list[RecordKey] = field(default_factory=list)
    unindexable: list[RecordKey] = field(default_factory=list)


@dataclass(frozen=True, slots=True)
class PartitionStats:
    name_count: int
    tree_height: int
    name_token_count: int
    address_token_count: int
    record_count: int


@dataclass(frozen=True, slots=True)
class IndexStats:
    record_count: int
    partition_count: int
    token_count: int
    unindexable_count: int
    approx_bytes: int
    partitions: dict[tuple[str, str], PartitionStats] = field(default_factory=dict)


class Partition:
    def __init__(self, key: PartitionKey, interner: TokenInterner):
        self.key = key
        if key.customer_type is CustomerType.CORPORATE:
            self.name_tree: CompanyNameTree | None = CompanyNameTree(interner)
            self.name_index: PostingsIndex | None = None
        else:
            self.name_tree = None
            self.name_index = PostingsIndex(interner)
        self.address_index = PostingsIndex(interner)
        self.record_count = 0


class GlobalIndex:
    def __init__(self, table: AbbreviationTable | None = None):
        self.table = table if table is not None else AbbreviationTable.default()
        self.interner = TokenInterner()
        self.partitions: dict[PartitionKey, Partition] = {}
        self.record_store: dict[RecordKey, RawRecord] = {}
        self.audit_log: list[AuditEvent] = []
        self.audit_persisted = 0
        self.unindexable: list[RecordKey] = []

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, records, table: AbbreviationTable | None = None) -> "GlobalIndex":
        records = list(records)
        counts = Counter((r.fid, r.cid) for r in records)
        duplicates = [RecordKey(f, c) for (f, c), n in counts.items() if n > 1]
        if duplicates:
            raise DuplicateKey(sorted(duplicates))
        index = cls(table)
        # Insertion order does not affect query results, but sorting makes
        # the interner (and hence the snapshot bytes) input-order independent.
        for raw in sorted(records, key=lambda r: (r.fid, r.cid)):
            index._insert(raw)
        return index

    def _insert(self, raw: RawRecord) -> NormalizedRecord:
        norm = normalize_record(raw, self.table)
        self.record_store[norm.key] = raw
        partition = self.partitions.get(norm.partition)
        if partition is None:
            partition = Partition(norm.partition, self.interner)
            self.partitions[norm.partition] = partition
        partition.record_count += 1
        if norm.name_tokens:
            if partition.name_tree is not None:
                partition.name_tree.insert(norm.name_tokens, norm.key)
            else:
                partition.name_index.add(norm.name_tokens, norm.key)
        if norm.address_tokens:
            partition.address_index.add(norm.address_tokens, norm.key)
        if not norm.name_tokens and not norm.address_tokens:
            self.unindexable.append(norm.key)
        return norm

    def update(self, new_records) -> UpdateReport:
        """Add new customers.  Existing keys are rejected individually; the
        batch continues.  Every applied record lands in the audit log."""
        report = UpdateReport()
        for raw in new_records:
            key = RecordKey(raw.fid, raw.cid)
            if key in self.record_store:
                report.rejected.append(key)
                continue
            norm = self._insert(raw)
            report.inserted.append(key)
            if not norm.name_tokens and not norm.address_tokens:
                report.unindexable.append(key)
            self.audit_log.append(AuditEvent(
                timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(),
                fid=key.fid, cid=key.cid, action="add",
            ))
        return report

    # -- queries -----------------------------------------------------------

    def countries(self) -> list[str]:
        return sorted({p.country for p in self.partitions})

    def request(self, name: str = "", address: str = "", country: str = "",
                customer_type: CustomerType | None = None,
                prefix: bool = False) -> SearchRequest:
        """Build a SearchRequest from user text, applying the same
        normalization the index itself was built with."""
        name_tokens = tuple(canonicalize(tokenize(name), self.table))
        address_tokens = frozenset(canonicalize(tokenize(address), self.table))
        return SearchRequest(
            name_tokens=name_tokens or None,
            address_tokens=address_tokens or None,
            country=country.strip().upper() or None,
            customer_type=customer_type,
            prefix=prefix,
        )

    def search(self, req: SearchRequest) -> ResultSet:
        if req.is_empty():
            raise EmptyQuery("search needs a name or an address query")
        want_type = req.customer_type.index_type() if req.customer_type else None
        provenance: dict[RecordKey, set[str]] = {}
        for pkey in sorted(self.partitions, key=lambda p: (p.country, p.customer_type.value)):
            if req.country is not None and pkey.country not in (req.country, UNKNOWN_COUNTRY):
                # country-less records stay visible under any country filter
                continue
            if want_type is not None and pkey.customer_type is not want_type:
                continue
            partition = self.partitions[pkey]
            name_hits: list[RecordKey] | None = None
            if req.name_tokens:
                if partition.name_tree is not None:
                    if req.prefix:
                        name_hits = partition.name_tree.search_prefix(req.name_tokens)
                    else:
                        name_hits = partition.name_tree.search_exact(req.name_tokens)
                else:
                    name_hits = partition.name_index.query_all(set(req.name_tokens))
            addr_hits: list[RecordKey] | None = None
            if req.address_tokens:
                addr_hits = partition.address_index.query_all(req.address_tokens)
            if name_hits is not None and addr_hits is not None:
                matched = set(name_hits) & set(addr_hits)
                sources = ("name", "address")
            elif name_hits is not None:
                matched, sources = set(name_hits), ("name",)
            else:
                matched, sources = set(addr_hits or []), ("address",)
            for key in matched:
                provenance.setdefault(key, set()).update(sources)
        keys = tuple(sorted(provenance))
        return ResultSet(keys=keys,
                         provenance={k: frozenset(v) for k, v in provenance.items()})

    def extract(self, keys) -> list[RawRecord]:
        keys = list(keys)
        missing = [k for k in keys if k not in self.record_store]
        if missing:
            raise UnknownKey(missing)
        return [self.record_store[k] for k in keys]

    def stats(self) -> IndexStats:
        per_partition = {}
        approx = 0
        for token in self.interner.tokens():
            approx += 56 + len(token)
        for pkey in sorted(self.partitions, key=lambda p: (p.country, p.customer_type.value)):
            partition = self.partitions[pkey]
            if partition.name_tree is not None:
                name_count = partition.name_tree.name_count
                height = partition.name_tree.height
                name_tokens = sum(1 for _ in partition.name_tree.enumerate_names())
            else:
                name_count = partition.name_index.token_count()
                height = 0
                name_tokens = partition.name_index.token_count()
            per_partition[(pkey.country, pkey.customer_type.value)] = PartitionStats(
                name_count=name_count,
                tree_height=height,
                name_token_count=name_tokens,
                address_token_count=partition.address_index.token_count(),
                record_count=partition.record_count,
            )
        approx += 96 * len(self.record_store)
        return IndexStats(
            record_count=len(self.record_store),
            partition_count=len(self.partitions),
            token_count=len(self.interner),
            unindexable_count=len(self.unindexable),
            approx_bytes=approx,
            partitions=per_partition,
        )
