"""HTTP service exposing search, update, stats and snapshot-save.

Readers always see one immutable index snapshot; updates clone the current
index, apply the batch, then swap the reference atomically, so a search can
never observe a half-applied update.
"""

from __future__ import annotations

import copy
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import persist
from .errors import EmptyQuery
from .index import GlobalIndex
from .ingest import SourceConfig, load_sources
from .model import CustomerType, RawRecord


@dataclass
class ServiceConfig:
    snapshot_path: Path
    source_config_path: Path | None = None
    abbrev_table_path: Path | None = None
    update_scan_interval: float | None = None

    def __post_init__(self):
        if self.update_scan_interval is not None and self.update_scan_interval <= 0:
            raise ValueError("update-scan interval must be positive")


class IndexHolder:
    """Atomic snapshot-swap wrapper around the current index."""

    def __init__(self, index: GlobalIndex):
        self._index = index
        self._lock = threading.Lock()

    @property
    def current(self) -> GlobalIndex:
        return self._index

    def apply_update(self, records: list[RawRecord]):
        """Clone, update, swap.  Returns the update report."""
        with self._lock:
            new_index = copy.deepcopy(self._index)
            report = new_index.update(records)
            self._index = new_index
            return report

    def rescan_sources(self, cfg: SourceConfig):
        """Apply any records in the sources that the index has not seen yet."""
        records = load_sources(cfg)
        fresh = [r for r in records if r.key not in self._index.record_store]
        if not fresh:
            return None
        return self.apply_update(fresh)


class SearchBody(BaseModel):
    name: str = ""
    address: str = ""
    country: str = ""
    customer_type: str = ""
    prefix: bool = False


class RecordBody(BaseModel):
    fid: str
    cid: str
    customer_type: str
    first_name: str = ""
    last_name: str = ""
    company_name: str = ""
    street: str = ""
    town: str = ""
    zip: str = ""
    country_code: str = ""
    country: str = ""


class UpdateBody(BaseModel):
    records: list[RecordBody] = Field(default_factory=list)


def _record_dict(raw: RawRecord) -> dict:
    return {
        "fid": raw.fid, "cid": raw.cid, "customer_type": raw.customer_type.value,
        "first_name": raw.first_name, "last_name": raw.last_name,
        "company_name": raw.company_name, "street": raw.street, "town": raw.town,
        "zip": raw.zip, "country_code": raw.country_code, "country": raw.country,
    }


def _parse_type(code: str) -> CustomerType | None:
    code = code.strip().upper()
    if not code:
        return None
    aliases = {"C": "C", "CORPORATE": "C", "I": "I", "INDIVIDUAL": "I",
               "J": "J", "JOINT": "J"}
    if code not in aliases:
        raise HTTPException(status_code=400, detail=f"unknown customer type {code!r}")
    return CustomerType(aliases[code])


def create_app(holder: IndexHolder, config: ServiceConfig | None = None) -> FastAPI:
    app = FastAPI(title="crossindex")
    app.state.holder = holder
    app.state.config = config

    @app.post("/search")
    def search(body: SearchBody):
        index = holder.current
        req = index.request(
            name=body.name, address=body.address, country=body.country,
            customer_type=_parse_type(body.customer_type), prefix=body.prefix,
        )
        try:
            result = index.search(req)
        except EmptyQuery as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        records = index.extract(result.keys)
        return {
            "count": len(result.keys),
            "keys": [{"fid": k.fid, "cid": k.cid} for k in result.keys],
            "records": [_record_dict(r) for r in records],
            "matched": {f"{k.fid}:{k.cid}": sorted(result.provenance[k])
                        for k in result.keys},
        }

    @app.post("/update")
    def update(body: UpdateBody):
        records = []
        for item in body.records:
            try:
                ctype = CustomerType.from_code(item.customer_type)
            except ValueError:
                raise HTTPException(status_code=400,
                                    detail=f"bad customer type {item.customer_type!r}")
            if not item.fid or not item.cid:
                raise HTTPException(status_code=400, detail="records need fid and cid")
            records.append(RawRecord(
                fid=item.fid, cid=item.cid, customer_type=ctype,
                first_name=item.first_name, last_name=item.last_name,
                company_name=item.company_name, street=item.street, town=item.town,
                zip=item.zip, country_code=item.country_code, country=item.country,
            ))
        report = holder.apply_update(records)
        return {
            "inserted": [{"fid": k.fid, "cid": k.cid} for k in report.inserted],
            "rejected": [{"fid": k.fid, "cid": k.cid} for k in report.rejected],
            "unindexable": [{"fid": k.fid, "cid": k.cid} for k in report.unindexable],
        }

    @app.get("/stats")
    def stats():
        s = holder.current.stats()
        return {
            "record_count": s.record_count,
            "partition_count": s.partition_count,
            "token_count": s.token_count,
            "unindexable_count": s.unindexable_count,
            "approx_bytes": s.approx_bytes,
            "partitions": {
                f"{country}/{ctype}": {
                    "name_count": p.name_count,
                    "tree_height": p.tree_height,
                    "address_token_count": p.address_token_count,
                    "record_count": p.record_count,
                }
                for (country, ctype), p in s.partitions.items()
            },
        }

    @app.post("/snapshot")
    def snapshot():
        if config is None:
            raise HTTPException(status_code=400, detail="no snapshot path configured")
        index = holder.current
        persist.save(index, config.snapshot_path)
        persist.append_audit(index, Path(str(config.snapshot_path) + ".audit.log"))
        return {"path": str(config.snapshot_path)}

    return app


def start_rescan_timer(holder: IndexHolder, config: ServiceConfig) -> threading.Timer:
    """Kick off the periodic source rescan; returns the first timer."""
    if config.update_scan_interval is None or config.source_config_path is None:
        raise ValueError("rescan needs an interval and a source config")

    def tick():
        cfg = SourceConfig.load(config.source_config_path)
        holder.rescan_sources(cfg)
        timer = threading.Timer(config.update_scan_interval, tick)
        timer.daemon = True
        timer.start()

    timer = threading.Timer(config.update_scan_interval, tick)
    timer.daemon = True
    timer.start()
    return timer
