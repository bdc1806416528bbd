"""Cleaning pipeline: field merging, tokenization, abbreviation canonicalization.

Everything here is a pure function; the only state is the abbreviation
table, which is immutable once loaded.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import MissingIdentity
from .model import CustomerType, NormalizedRecord, RawRecord, RecordKey, UNKNOWN_COUNTRY

# Split on whitespace, commas and semicolons; hyphens and slashes stay inside
# tokens so "A/C" and "11-1101" survive whole.
_SPLIT_RE = re.compile(r"[\s,;]+")
_EDGE_PUNCT = ".,;:'\""

# Variant -> canonical.  The A/C family is the documented abbreviation case;
# the rest are common corporate-suffix variants.
DEFAULT_ABBREVIATIONS = {
    "A.C": "A/C",
    "AC": "A/C",
    "AC.": "A/C",
    "ACCOUNT": "A/C",
    "LIMITED": "LTD",
    "LTD.": "LTD",
    "CORP.": "CORP",
    "INC.": "INC",
    "INCORPORATED": "INC",
    "CO.": "CO",
}


class AbbreviationTable:
    """Maps variant tokens to their canonical spelling.

    The mapping must be idempotent on its own range: a canonical token either
    maps to itself or is absent.
    """

    def __init__(self, mapping: dict[str, str] | None = None):
        self._map = {k.upper(): v.upper() for k, v in (mapping or {}).items()}
        for canonical in self._map.values():
            if self._map.get(canonical, canonical) != canonical:
                raise ValueError(f"abbreviation table not idempotent at {canonical!r}")

    @classmethod
    def default(cls) -> "AbbreviationTable":
        return cls(DEFAULT_ABBREVIATIONS)

    @classmethod
    def load(cls, path: str | Path) -> "AbbreviationTable":
        """Read a VARIANT<TAB>CANONICAL file; '#' starts a comment line."""
        mapping = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            variant, _, canonical = line.partition("\t")
            if not canonical:
                raise ValueError(f"bad abbreviation line (need VARIANT<TAB>CANONICAL): {line!r}")
            mapping[variant.strip()] = canonical.strip()
        return cls(mapping)

    def save(self, path: str | Path) -> None:
        lines = [f"{v}\t{c}" for v, c in sorted(self._map.items())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def canonical(self, token: str) -> str:
        return self._map.get(token, token)

    def variants_of(self, canonical: str) -> list[str]:
        """All variant spellings for a canonical token (used by the corpus generator)."""
        return sorted(v for v, c in self._map.items() if c == canonical and v != canonical)

    def canonical_tokens(self) -> list[str]:
        return sorted(set(self._map.values()))

    def as_dict(self) -> dict[str, str]:
        return dict(self._map)


def tokenize(text: str) -> list[str]:
    """Uppercase word tokens of ``text``; empty input yields an empty list."""
    tokens = []
    for piece in _SPLIT_RE.split(text or ""):
        token = piece.strip(_EDGE_PUNCT).upper()
        if token:
            tokens.append(token)
    return tokens


def canonicalize(tokens: list[str], table: AbbreviationTable) -> list[str]:
    return [table.canonical(t) for t in tokens]


def merge_name(first: str | None, last: str | None) -> str:
    """Join first/last name, tolerating either part holding the whole name."""
    parts = [p.strip() for p in (first or "", last or "") if p and p.strip()]
    return " ".join(parts)


def merge_address(street: str | None, town: str | None, zip_: str | None,
                  country_code: str | None) -> str:
    """Collapse the address fields into one text; the country itself stays out
    because it is the partition key."""
    parts = [p.strip() for p in (street or "", town or "", zip_ or "", country_code or "")
             if p and p.strip()]
    return " ".join(parts)


def resolve_country(raw: RawRecord) -> str:
    """Country field first (most reliable), then country code, else UNKNOWN."""
    for value in (raw.country, raw.country_code):
        if value and value.strip():
            return value.strip().upper()
    return UNKNOWN_COUNTRY


def normalize_record(raw: RawRecord, table: AbbreviationTable) -> NormalizedRecord:
    if not raw.fid or not raw.cid:
        raise MissingIdentity(f"record missing fid/cid: fid={raw.fid!r} cid={raw.cid!r}")
    if raw.customer_type is CustomerType.CORPORATE:
        name_text = raw.company_name or ""
    else:
        name_text = merge_name(raw.first_name, raw.last_name)
    name_tokens = tuple(canonicalize(tokenize(name_text), table))
    address_text = merge_address(raw.street, raw.town, raw.zip, raw.country_code)
    address_tokens = frozenset(canonicalize(tokenize(address_text), table))
    return NormalizedRecord(
        key=RecordKey(raw.fid, raw.cid),
        customer_type=raw.customer_type,
        name_tokens=name_tokens,
        address_tokens=address_tokens,
        country=resolve_country(raw),
        raw=raw,
    )
