"""Loading customer exports from the independent logical databases.

One pipe-delimited file per logical database; the fund id (fid) comes from
the source config, not from the file, so per-file customer ids may collide
across files — that is exactly the global-uniqueness problem the index
exists to solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedRow, SourceUnreadable
from .model import CustomerType, RawRecord

COLUMNS = ["CID", "TYPE", "FIRST_NAME", "LAST_NAME", "COMPANY_NAME",
           "STREET", "TOWN", "ZIP", "COUNTRY_CODE", "COUNTRY"]
HEADER = "|".join(COLUMNS)


@dataclass(frozen=True, slots=True)
class SourceConfig:
    """(fid, file path) pairs, one per logical database."""

    sources: tuple[tuple[str, Path], ...]

    def __post_init__(self):
        fids = [fid for fid, _ in self.sources]
        if len(set(fids)) != len(fids):
            raise ValueError("duplicate fid in source config")

    @classmethod
    def load(cls, path: str | Path) -> "SourceConfig":
        """Config file: one "FID<TAB>path" line per source; '#' comments.
        Relative paths resolve against the config file's directory."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SourceUnreadable(path, exc) from exc
        sources = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fid, _, file_part = line.partition("\t")
            if not file_part:
                raise MalformedRow(path, lineno, "need FID<TAB>path")
            file_path = Path(file_part.strip())
            if not file_path.is_absolute():
                file_path = path.parent / file_path
            sources.append((fid.strip(), file_path))
        return cls(tuple(sources))

    def save(self, path: str | Path) -> None:
        lines = [f"{fid}\t{file_path}" for fid, file_path in self.sources]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_row(fid: str, path, lineno: int, line: str) -> RawRecord:
    fields = line.split("|")
    if len(fields) != len(COLUMNS):
        raise MalformedRow(path, lineno, f"expected {len(COLUMNS)} fields, got {len(fields)}")
    cid, type_code = fields[0], fields[1]
    if not cid:
        raise MalformedRow(path, lineno, "empty CID")
    try:
        ctype = CustomerType.from_code(type_code)
    except ValueError:
        raise MalformedRow(path, lineno, f"bad customer type {type_code!r}") from None
    return RawRecord(
        fid=fid, cid=cid, customer_type=ctype,
        first_name=fields[2], last_name=fields[3], company_name=fields[4],
        street=fields[5], town=fields[6], zip=fields[7],
        country_code=fields[8], country=fields[9],
    )


def load_source_file(fid: str, path: str | Path) -> list[RawRecord]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SourceUnreadable(path, exc) from exc
    lines = text.splitlines()
    if not lines:
        return []
    if lines[0] != HEADER:
        raise MalformedRow(path, 1, f"bad header; expected {HEADER!r}")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        records.append(_parse_row(fid, path, lineno, line))
    return records


def load_sources(cfg: SourceConfig) -> list[RawRecord]:
    records: list[RawRecord] = []
    for fid, path in cfg.sources:
        records.extend(load_source_file(fid, path))
    return records


def record_row(raw: RawRecord) -> str:
    fields = [raw.cid, raw.customer_type.value, raw.first_name, raw.last_name,
              raw.company_name, raw.street, raw.town, raw.zip,
              raw.country_code, raw.country]
    for value in fields:
        if "|" in value:
            raise ValueError(f"'|' is forbidden in record data: {value!r}")
    return "|".join(fields)


def write_source_file(path: str | Path, records: list[RawRecord]) -> None:
    lines = [HEADER] + [record_row(r) for r in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
