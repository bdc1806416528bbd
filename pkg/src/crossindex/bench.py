"""Search-vs-scan benchmark harness.

The baseline is a linear scan over all source records applying the same
normalization as the index, so timings compare data structures, not cleaning.
Every benchmark query is answered by both paths and the result sets must be
identical; a disagreement is a correctness failure (BenchMismatch), not a
benchmark artifact.
"""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field

from .errors import BenchMismatch
from .index import GlobalIndex, SearchRequest
from .model import CustomerType, RecordKey, UNKNOWN_COUNTRY
from .normalize import AbbreviationTable, normalize_record


class BaselineScanner:
    """Normalization-aware full scan; the independent slow path."""

    def __init__(self, records, table: AbbreviationTable):
        self.normalized = [normalize_record(r, table) for r in records]

    def search(self, req: SearchRequest) -> list[RecordKey]:
        want_type = req.customer_type.index_type() if req.customer_type else None
        hits = []
        for norm in self.normalized:
            if req.country is not None and norm.country not in (req.country, UNKNOWN_COUNTRY):
                continue
            if want_type is not None and norm.customer_type.index_type() is not want_type:
                continue
            if req.name_tokens is not None:
                if not norm.name_tokens:
                    continue
                if norm.customer_type.index_type() is CustomerType.CORPORATE:
                    if req.prefix:
                        if norm.name_tokens[:len(req.name_tokens)] != tuple(req.name_tokens):
                            continue
                    elif norm.name_tokens != tuple(req.name_tokens):
                        continue
                elif not set(req.name_tokens) <= set(norm.name_tokens):
                    continue
            if req.address_tokens is not None:
                if not req.address_tokens <= norm.address_tokens:
                    continue
            hits.append(norm.key)
        return sorted(hits)


def make_query_battery(records, table: AbbreviationTable, n: int, seed: int = 0,
                       miss_fraction: float = 0.1) -> list[SearchRequest]:
    """Random but reproducible requests drawn from the corpus itself."""
    rng = random.Random(seed)
    normalized = [normalize_record(r, table) for r in records]
    candidates = [nr for nr in normalized if nr.name_tokens or nr.address_tokens]
    battery: list[SearchRequest] = []
    while len(battery) < n:
        if not candidates or rng.random() < miss_fraction:
            battery.append(SearchRequest(
                name_tokens=("ZZGHOST", f"Q{rng.randrange(10_000)}"),
                prefix=rng.random() < 0.5,
            ))
            continue
        norm = rng.choice(candidates)
        name_tokens = None
        address_tokens = None
        prefix = False
        use_name = bool(norm.name_tokens) and rng.random() < 0.8
        use_address = bool(norm.address_tokens) and (not use_name or rng.random() < 0.4)
        if use_name:
            if norm.customer_type.index_type() is CustomerType.CORPORATE:
                if rng.random() < 0.5:
                    cut = rng.randrange(1, len(norm.name_tokens) + 1)
                    name_tokens = norm.name_tokens[:cut]
                    prefix = True
                else:
                    name_tokens = norm.name_tokens
            else:
                k = rng.randrange(1, len(norm.name_tokens) + 1)
                name_tokens = tuple(rng.sample(list(norm.name_tokens), k))
        if use_address:
            k = rng.randrange(1, min(3, len(norm.address_tokens)) + 1)
            address_tokens = frozenset(rng.sample(sorted(norm.address_tokens), k))
        if name_tokens is None and address_tokens is None:
            continue
        country = norm.country if rng.random() < 0.3 else None
        ctype = norm.customer_type.index_type() if rng.random() < 0.4 else None
        battery.append(SearchRequest(
            name_tokens=name_tokens, address_tokens=address_tokens,
            country=country, customer_type=ctype, prefix=prefix,
        ))
    return battery


@dataclass(slots=True)
class QueryTiming:
    lookup_s: float
    extract_s: float
    baseline_s: float
    result_count: int

    @property
    def indexed_s(self) -> float:
        return self.lookup_s + self.extract_s

    @property
    def speedup(self) -> float:
        return self.baseline_s / self.indexed_s if self.indexed_s else float("inf")


@dataclass(slots=True)
class BenchReport:
    timings: list[QueryTiming] = field(default_factory=list)

    @property
    def median_speedup(self) -> float:
        return statistics.median(t.speedup for t in self.timings)

    @property
    def median_lookup_ms(self) -> float:
        return statistics.median(t.lookup_s for t in self.timings) * 1000.0

    @property
    def median_indexed_ms(self) -> float:
        return statistics.median(t.indexed_s for t in self.timings) * 1000.0

    @property
    def median_baseline_ms(self) -> float:
        return statistics.median(t.baseline_s for t in self.timings) * 1000.0

    def summary(self) -> str:
        return (
            f"queries: {len(self.timings)}\n"
            f"median in-index lookup: {self.median_lookup_ms:.3f} ms\n"
            f"median indexed end-to-end: {self.median_indexed_ms:.3f} ms\n"
            f"median baseline scan: {self.median_baseline_ms:.3f} ms\n"
            f"median speedup: {self.median_speedup:.1f}x"
        )


def run_bench(index: GlobalIndex, baseline: BaselineScanner,
              battery: list[SearchRequest], repetitions: int = 1) -> BenchReport:
    report = BenchReport()
    for req in battery:
        lookup_s = extract_s = baseline_s = 0.0
        indexed_keys: list[RecordKey] = []
        baseline_keys: list[RecordKey] = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            result = index.search(req)
            t1 = time.perf_counter()
            index.extract(result.keys)
            t2 = time.perf_counter()
            baseline_keys = baseline.search(req)
            t3 = time.perf_counter()
            lookup_s += t1 - t0
            extract_s += t2 - t1
            baseline_s += t3 - t2
            indexed_keys = list(result.keys)
        if indexed_keys != baseline_keys:
            raise BenchMismatch(
                f"indexed and baseline results differ for {req}: "
                f"{len(indexed_keys)} vs {len(baseline_keys)} keys"
            )
        report.timings.append(QueryTiming(
            lookup_s=lookup_s / repetitions,
            extract_s=extract_s / repetitions,
            baseline_s=baseline_s / repetitions,
            result_count=len(indexed_keys),
        ))
    return report
