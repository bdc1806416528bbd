"""Synthetic dirty-corpus generator.

Produces per-database export files plus a clean-truth companion file, so
search recall against the injected defects can be scored.  Injected defect
classes: blanked fields, single-character typos, abbreviation variants,
word transpositions, near-duplicate rows, and address text shuffled into the
wrong field (zip holding street text).

Output is byte-deterministic for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidParams
from .ingest import HEADER, SourceConfig, record_row
from .model import CustomerType, RawRecord
from .normalize import AbbreviationTable

_FIRST = ["John", "Mary", "Peter", "Anna", "Liam", "Sofia", "Noah", "Emma", "Oliver",
          "Ava", "Elijah", "Mia", "James", "Lucia", "Henry", "Amelia", "Lucas", "Clara",
          "Mason", "Nora", "Ethan", "Ruth", "Daniel", "Grace", "Victor", "Elena",
          "Samuel", "Iris", "Oscar", "Jane", "Felix", "Rosa", "Hugo", "Nina", "Marco",
          "Lena", "Adam", "Vera", "Paul", "Maya"]
_LAST = ["Smith", "Murphy", "Chang", "Keller", "Novak", "Silva", "Brown", "Walsh",
         "Meyer", "Rossi", "Dubois", "Larsen", "Kovacs", "Tanaka", "Weber", "Moreau",
         "Olsen", "Costa", "Fischer", "Byrne", "Martin", "Petrov", "Svensson", "Ricci",
         "Fournier", "Johansson", "Nakamura", "Schneider", "Doyle", "Marino", "Lefevre",
         "Andersen", "Varga", "Sato", "Kaufman", "Blanc", "Nilsen", "Greco", "Huber",
         "Quinn"]
_CORP_ADJ = ["FIRST", "GLOBAL", "UNITED", "PACIFIC", "NORTHERN", "ROYAL", "CENTRAL",
             "ATLANTIC", "EASTERN", "WESTERN", "NATIONAL", "INTERNATIONAL", "PRIME",
             "STERLING", "ALPINE", "MERIDIAN"]
_CORP_NOUN = ["COMMERCIAL", "CAPITAL", "INVESTMENT", "TRUST", "MERCANTILE",
              "INDUSTRIAL", "MARITIME", "AGRICULTURAL", "DEVELOPMENT", "SECURITIES"]
_CORP_KIND = ["BANK", "HOLDINGS", "PARTNERS", "FINANCE", "MANAGEMENT"]
_CORP_SUFFIX = ["LTD", "CORP", "INC", "CO", "GROUP"]
_STREET_NAME = ["MAIN", "SUNSET", "HIGH", "CHURCH", "STATION", "PARK", "MILL",
                "BRIDGE", "GARDEN", "RIVER"]
_STREET_KIND = ["STREET", "AVENUE", "ROAD", "LANE", "DRIVE"]
_TOWNS = ["Springfield", "Riverton", "Lakewood", "Fairview", "Georgetown", "Clayton",
          "Ashford", "Milton", "Dunmore", "Kingsport"]

DEFAULT_COUNTRIES = (("US", 25), ("GB", 18), ("FR", 13), ("DE", 11), ("IE", 10),
                     ("LU", 8), ("CH", 6), ("JP", 4), ("SG", 3), ("HK", 2))

DEFECTS = ("missing_field", "typo", "abbreviation_variant", "transposition",
           "duplicate", "incoherent_address")


@dataclass(frozen=True, slots=True)
class GeneratorParams:
    count: int
    seed: int = 0
    fids: int = 16
    corporate_fraction: float = 0.4
    countries: tuple[tuple[str, float], ...] = DEFAULT_COUNTRIES
    missing_country_rate: float = 0.005
    missing_field_rate: float = 0.10
    typo_rate: float = 0.05
    abbreviation_variant_rate: float = 0.10
    transposition_rate: float = 0.05
    duplicate_rate: float = 0.03
    incoherent_address_rate: float = 0.03
    group_expansion: float = 0.3

    def validate(self) -> None:
        if self.count <= 0:
            raise InvalidParams("count must be positive")
        if self.fids <= 0:
            raise InvalidParams("fids must be positive")
        rates = {
            "corporate_fraction": self.corporate_fraction,
            "missing_country_rate": self.missing_country_rate,
            "missing_field_rate": self.missing_field_rate,
            "typo_rate": self.typo_rate,
            "abbreviation_variant_rate": self.abbreviation_variant_rate,
            "transposition_rate": self.transposition_rate,
            "duplicate_rate": self.duplicate_rate,
            "incoherent_address_rate": self.incoherent_address_rate,
            "group_expansion": self.group_expansion,
        }
        for name, value in rates.items():
            if not 0.0 <= value <= 1.0:
                raise InvalidParams(f"{name} must be in [0, 1], got {value}")
        if not self.countries:
            raise InvalidParams("need at least one country")


@dataclass(slots=True)
class GenerationReport:
    count: int
    files: list[Path]
    truth_file: Path
    config_file: Path
    applied: dict[str, int] = field(default_factory=dict)
    applicable: dict[str, int] = field(default_factory=dict)

    def rate(self, defect: str) -> float:
        applicable = self.applicable.get(defect, 0)
        return self.applied.get(defect, 0) / applicable if applicable else 0.0


def _typo(rng: random.Random, text: str) -> str:
    if not text:
        return text
    op = rng.choice(["substitute", "delete", "insert", "swap_sep"])
    i = rng.randrange(len(text))
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if op == "swap_sep":
        # "11-1101" <-> "11 1101" style separator noise
        for j, ch in enumerate(text):
            if ch in "- ":
                return text[:j] + (" " if ch == "-" else "-") + text[j + 1:]
        op = "substitute"
    if op == "substitute":
        ch = rng.choice("0123456789") if text[i].isdigit() else rng.choice(letters)
        return text[:i] + ch + text[i + 1:]
    if op == "delete" and len(text) > 1:
        return text[:i] + text[i + 1:]
    return text[:i] + rng.choice(letters) + text[i:]


@dataclass(slots=True)
class _Identity:
    record: RawRecord            # clean values, key assigned
    duplicate_of: RawRecord | None = None


def _weighted_choice(rng: random.Random, pairs) -> str:
    total = sum(w for _, w in pairs)
    x = rng.uniform(0, total)
    acc = 0.0
    for value, weight in pairs:
        acc += weight
        if x <= acc:
            return value
    return pairs[-1][0]


def _clean_identity(rng: random.Random, params: GeneratorParams,
                    groups: list[str]) -> dict:
    corporate = rng.random() < params.corporate_fraction
    if rng.random() < params.missing_country_rate:
        country = ""
    else:
        country = _weighted_choice(rng, params.countries)
    street = f"{rng.randrange(1, 999)} {rng.choice(_STREET_NAME)} {rng.choice(_STREET_KIND)}"
    town = rng.choice(_TOWNS)
    zip_ = str(rng.randrange(10000, 99999))
    base = {
        "street": street, "town": town, "zip": zip_,
        "country_code": country, "country": country,
        "first": "", "last": "", "company": "",
    }
    if corporate:
        if groups and rng.random() < params.group_expansion:
            root = rng.choice(groups)
            suffix = rng.choice([
                "OBB A/C",
                f"TRUST A/C TA {rng.randrange(100000, 999999)}",
                f"{rng.choice(_TOWNS).upper()} BRANCH",
                "PENSION FUND A/C",
            ])
            base["company"] = f"{root} {suffix}"
        else:
            name = (f"{rng.choice(_CORP_ADJ)} {rng.choice(_CORP_NOUN)} "
                    f"{rng.choice(_CORP_KIND)} {rng.choice(_CORP_SUFFIX)}")
            groups.append(name)
            base["company"] = name
        base["type"] = CustomerType.CORPORATE
    else:
        base["first"] = rng.choice(_FIRST)
        base["last"] = rng.choice(_LAST)
        base["type"] = rng.choice([CustomerType.INDIVIDUAL] * 9 + [CustomerType.JOINT])
    return base


def _corrupt(rng: random.Random, raw: RawRecord, params: GeneratorParams,
             table: AbbreviationTable, applied: dict, applicable: dict) -> RawRecord:
    corporate = raw.customer_type is CustomerType.CORPORATE

    # blanked optional field
    candidates = []
    if corporate:
        if raw.company_name:
            candidates.append("company_name")
    else:
        if raw.first_name and raw.last_name:
            candidates.extend(["merge_name", "last_name"])
    for f in ("street", "town", "zip"):
        if getattr(raw, f):
            candidates.append(f)
    if candidates:
        applicable["missing_field"] += 1
        if rng.random() < params.missing_field_rate:
            applied["missing_field"] += 1
            target = rng.choice(candidates)
            if target == "merge_name":
                # the whole name migrates into First Name
                raw = replace(raw, first_name=f"{raw.first_name} {raw.last_name}",
                              last_name="")
            else:
                raw = replace(raw, **{target: ""})

    # abbreviation variant spelling
    spots = []
    for fname in ("company_name", "street"):
        words = getattr(raw, fname).split()
        for i, word in enumerate(words):
            variants = table.variants_of(word.upper())
            if variants:
                spots.append((fname, i, variants))
    if spots:
        applicable["abbreviation_variant"] += 1
        if rng.random() < params.abbreviation_variant_rate:
            applied["abbreviation_variant"] += 1
            fname, i, variants = rng.choice(spots)
            words = getattr(raw, fname).split()
            words[i] = rng.choice(variants)
            raw = replace(raw, **{fname: " ".join(words)})

    # word transposition
    if corporate or not (raw.first_name and raw.last_name):
        words = raw.street.split()
        if len(words) >= 2:
            applicable["transposition"] += 1
            if rng.random() < params.transposition_rate:
                applied["transposition"] += 1
                i = rng.randrange(len(words) - 1)
                words[i], words[i + 1] = words[i + 1], words[i]
                raw = replace(raw, street=" ".join(words))
    else:
        applicable["transposition"] += 1
        if rng.random() < params.transposition_rate:
            applied["transposition"] += 1
            raw = replace(raw, first_name=raw.last_name, last_name=raw.first_name)

    # incoherent address: zip holds street text
    if raw.street:
        applicable["incoherent_address"] += 1
        if rng.random() < params.incoherent_address_rate:
            applied["incoherent_address"] += 1
            raw = replace(raw, zip=f"{raw.street} {raw.town}".strip(), street="", town="")

    # single-character typo
    typo_fields = [f for f in ("first_name", "last_name", "company_name",
                               "street", "town", "zip") if getattr(raw, f)]
    if typo_fields:
        applicable["typo"] += 1
        if rng.random() < params.typo_rate:
            applied["typo"] += 1
            fname = rng.choice(typo_fields)
            raw = replace(raw, **{fname: _typo(rng, getattr(raw, fname))})

    return raw


def generate(params: GeneratorParams, out_dir: str | Path,
             table: AbbreviationTable | None = None) -> GenerationReport:
    params.validate()
    table = table if table is not None else AbbreviationTable.default()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(params.seed)

    applied = {d: 0 for d in DEFECTS}
    applicable = {d: 0 for d in DEFECTS}

    dup_count = min(int(round(params.count * params.duplicate_rate)), params.count - 1)
    base_count = params.count - dup_count
    applicable["duplicate"] = params.count
    applied["duplicate"] = dup_count

    groups: list[str] = []
    identities = [_clean_identity(rng, params, groups) for _ in range(base_count)]

    fid_names = [f"FUND{i + 1:02d}" for i in range(params.fids)]
    cid_counters = {fid: 1000 for fid in fid_names}

    def assign_key(identity: dict) -> RawRecord:
        fid = rng.choice(fid_names)
        cid = str(cid_counters[fid])
        cid_counters[fid] += 1
        return RawRecord(
            fid=fid, cid=cid, customer_type=identity["type"],
            first_name=identity["first"], last_name=identity["last"],
            company_name=identity["company"], street=identity["street"],
            town=identity["town"], zip=identity["zip"],
            country_code=identity["country_code"], country=identity["country"],
        )

    clean: list[_Identity] = [_Identity(assign_key(identity)) for identity in identities]
    for _ in range(dup_count):
        original = rng.choice(clean[:base_count]).record
        twin = assign_key({
            "type": original.customer_type,
            "first": original.first_name, "last": original.last_name,
            "company": original.company_name, "street": original.street,
            "town": original.town, "zip": original.zip,
            "country_code": original.country_code, "country": original.country,
        })
        if twin.customer_type is not CustomerType.CORPORATE and twin.first_name:
            # "John Smith" vs "J. Smith" style near-duplicate
            twin = replace(twin, first_name=twin.first_name[0] + ".")
        clean.append(_Identity(twin, duplicate_of=original))

    dirty = [_corrupt(rng, identity.record, params, table, applied, applicable)
             for identity in clean]

    per_fid: dict[str, list[RawRecord]] = {fid: [] for fid in fid_names}
    for raw in dirty:
        per_fid[raw.fid].append(raw)

    files = []
    config_lines = []
    for fid in fid_names:
        file_path = out_dir / f"{fid.lower()}.txt"
        rows = [HEADER] + [record_row(r) for r in sorted(per_fid[fid], key=lambda r: r.cid)]
        file_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        files.append(file_path)
        config_lines.append(f"{fid}\t{file_path.name}")

    truth_file = out_dir / "truth.txt"
    truth_rows = ["FID|" + HEADER + "|DUPLICATE_OF"]
    for identity in sorted(clean, key=lambda c: (c.record.fid, c.record.cid)):
        original = identity.duplicate_of
        dup_ref = f"{original.fid}:{original.cid}" if original else ""
        truth_rows.append(f"{identity.record.fid}|{record_row(identity.record)}|{dup_ref}")
    truth_file.write_text("\n".join(truth_rows) + "\n", encoding="utf-8")

    config_file = out_dir / "sources.cfg"
    config_file.write_text("\n".join(config_lines) + "\n", encoding="utf-8")

    return GenerationReport(
        count=params.count, files=files, truth_file=truth_file,
        config_file=config_file, applied=applied, applicable=applicable,
    )


def load_truth(path: str | Path) -> list[tuple[RawRecord, str]]:
    """Truth rows as (clean record, duplicate_of) pairs; duplicate_of is
    "fid:cid" or empty."""
    from .ingest import _parse_row

    lines = Path(path).read_text(encoding="utf-8").splitlines()
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fid, rest = line.split("|", 1)
        rest, _, dup_ref = rest.rpartition("|")
        out.append((_parse_row(fid, path, lineno, rest), dup_ref))
    return out


def source_config_for(report: GenerationReport) -> SourceConfig:
    return SourceConfig.load(report.config_file)
