"""Binary snapshot of the whole index.

Layout: magic "CNIX", one version byte, then length-prefixed sections DICT,
PART, RECS, and a trailing CSUM section holding a CRC-32 of everything before
it.  Integers are unsigned LEB128 varints, strings UTF-8 with a varint length,
fixed-width integers little-endian.  Postings lists are stored as deltas over
record ordinals (records sorted by key), exploiting the mandated sort order.

Saves are atomic (temp file + rename) and byte-deterministic for a given
index state.  The audit log lives in a separate append-only text file so it
survives snapshot rewrites.
"""

from __future__ import annotations

import os
import struct
import tempfile
import zlib
from pathlib import Path

from .cntree import CompanyNameTree, Element, Node
from .errors import CorruptSnapshot, IoFailure
from .index import GlobalIndex, Partition
from .interning import TokenInterner
from .inverted import PostingsIndex
from .model import CustomerType, PartitionKey, RawRecord, RecordKey
from .normalize import AbbreviationTable

MAGIC = b"CNIX"
VERSION = 1


class _Writer:
    def __init__(self):
        self.buf = bytearray()

    def uvarint(self, value: int) -> None:
        while True:
            byte = value & 0x7F
            value >>= 7
            if value:
                self.buf.append(byte | 0x80)
            else:
                self.buf.append(byte)
                return

    def string(self, text: str) -> None:
        data = text.encode("utf-8")
        self.uvarint(len(data))
        self.buf += data

    def byte(self, value: int) -> None:
        self.buf.append(value)

    def deltas(self, ordinals: list[int]) -> None:
        self.uvarint(len(ordinals))
        previous = 0
        for ordinal in ordinals:
            self.uvarint(ordinal - previous)
            previous = ordinal


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def uvarint(self) -> int:
        shift = 0
        value = 0
        while True:
            if self.pos >= len(self.data):
                raise CorruptSnapshot("truncated varint")
            byte = self.data[self.pos]
            self.pos += 1
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7

    def string(self) -> str:
        length = self.uvarint()
        if self.pos + length > len(self.data):
            raise CorruptSnapshot("truncated string")
        raw = self.data[self.pos:self.pos + length]
        self.pos += length
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptSnapshot(f"bad string payload: {exc}") from exc

    def byte(self) -> int:
        if self.pos >= len(self.data):
            raise CorruptSnapshot("truncated byte")
        value = self.data[self.pos]
        self.pos += 1
        return value

    def deltas(self) -> list[int]:
        count = self.uvarint()
        out = []
        current = 0
        for _ in range(count):
            current += self.uvarint()
            out.append(current)
        return out

    def done(self) -> bool:
        return self.pos >= len(self.data)


def _encode_postings(w: _Writer, postings: list[RecordKey], ordinals: dict[RecordKey, int]) -> None:
    w.deltas([ordinals[k] for k in postings])


def _encode_node(w: _Writer, node: Node, ordinals: dict[RecordKey, int]) -> None:
    w.uvarint(len(node.elements))
    for element in node.elements:
        w.uvarint(element.token_id)
        flags = (1 if element.child is not None else 0) | (2 if element.postings is not None else 0)
        w.byte(flags)
        if element.postings is not None:
            _encode_postings(w, element.postings, ordinals)
        if element.child is not None:
            _encode_node(w, element.child, ordinals)


def _decode_node(r: _Reader, keys: list[RecordKey], tree: CompanyNameTree, depth: int) -> Node:
    node = Node()
    count = r.uvarint()
    for _ in range(count):
        token_id = r.uvarint()
        flags = r.byte()
        element = Element(token_id=token_id)
        if flags & 2:
            element.postings = [keys[i] for i in r.deltas()]
            tree.name_count += 1
            tree.height = max(tree.height, depth)
        if flags & 1:
            element.child = _decode_node(r, keys, tree, depth + 1)
        node.elements.append(element)
    return node


def _encode_postings_index(w: _Writer, index: PostingsIndex, ordinals: dict[RecordKey, int]) -> None:
    entries = sorted(index._entries.items(), key=lambda kv: index.interner.token(kv[0]))
    w.uvarint(len(entries))
    for token_id, postings in entries:
        w.uvarint(token_id)
        _encode_postings(w, postings, ordinals)


def _decode_postings_index(r: _Reader, index: PostingsIndex, keys: list[RecordKey]) -> None:
    count = r.uvarint()
    for _ in range(count):
        token_id = r.uvarint()
        index._entries[token_id] = [keys[i] for i in r.deltas()]


def _section(tag: bytes, payload: bytes) -> bytes:
    return tag + struct.pack("<I", len(payload)) + payload


def snapshot_bytes(index: GlobalIndex) -> bytes:
    """Serialize the index; identical states yield identical bytes."""
    keys = sorted(index.record_store)
    ordinals = {key: i for i, key in enumerate(keys)}

    dict_w = _Writer()
    tokens = index.interner.tokens()
    dict_w.uvarint(len(tokens))
    for token in tokens:
        dict_w.string(token)
    abbrev = sorted(index.table.as_dict().items())
    dict_w.uvarint(len(abbrev))
    for variant, canonical in abbrev:
        dict_w.string(variant)
        dict_w.string(canonical)

    part_w = _Writer()
    pkeys = sorted(index.partitions, key=lambda p: (p.country, p.customer_type.value))
    part_w.uvarint(len(pkeys))
    for pkey in pkeys:
        partition = index.partitions[pkey]
        part_w.string(pkey.country)
        part_w.byte(ord(pkey.customer_type.value))
        part_w.uvarint(partition.record_count)
        if partition.name_tree is not None:
            part_w.byte(1 if partition.name_tree.root is not None else 0)
            if partition.name_tree.root is not None:
                _encode_node(part_w, partition.name_tree.root, ordinals)
        else:
            _encode_postings_index(part_w, partition.name_index, ordinals)
        _encode_postings_index(part_w, partition.address_index, ordinals)

    recs_w = _Writer()
    recs_w.uvarint(len(keys))
    for key in keys:
        raw = index.record_store[key]
        recs_w.string(raw.fid)
        recs_w.string(raw.cid)
        recs_w.byte(ord(raw.customer_type.value))
        for value in (raw.first_name, raw.last_name, raw.company_name, raw.street,
                      raw.town, raw.zip, raw.country_code, raw.country):
            recs_w.string(value)
    recs_w.deltas(sorted(ordinals[k] for k in index.unindexable))
    recs_w.uvarint(len(index.audit_log))

    body = MAGIC + bytes([VERSION])
    body += _section(b"DICT", bytes(dict_w.buf))
    body += _section(b"PART", bytes(part_w.buf))
    body += _section(b"RECS", bytes(recs_w.buf))
    crc = zlib.crc32(body) & 0xFFFFFFFF
    return body + b"CSUM" + struct.pack("<I", crc)


def save(index: GlobalIndex, path: str | Path) -> None:
    path = Path(path)
    data = snapshot_bytes(index)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
    except OSError as exc:
        raise IoFailure(path, exc) from exc


def _read_sections(data: bytes) -> dict[bytes, bytes]:
    if len(data) < len(MAGIC) + 1 + 8:
        raise CorruptSnapshot("file too short to be a snapshot")
    if data[:4] != MAGIC:
        raise CorruptSnapshot("bad magic bytes: not a snapshot file")
    version = data[4]
    if version != VERSION:
        raise CorruptSnapshot(f"unsupported snapshot version: expected {VERSION}, found {version}")
    if data[-8:-4] != b"CSUM":
        raise CorruptSnapshot("missing checksum section")
    (stored_crc,) = struct.unpack("<I", data[-4:])
    actual_crc = zlib.crc32(data[:-8]) & 0xFFFFFFFF
    if stored_crc != actual_crc:
        raise CorruptSnapshot("checksum mismatch: snapshot is corrupt or truncated")
    sections = {}
    pos = 5
    end = len(data) - 8
    while pos < end:
        if pos + 8 > end:
            raise CorruptSnapshot("truncated section header")
        tag = data[pos:pos + 4]
        (length,) = struct.unpack("<I", data[pos + 4:pos + 8])
        pos += 8
        if pos + length > end:
            raise CorruptSnapshot(f"truncated section {tag!r}")
        sections[tag] = data[pos:pos + length]
        pos += length
    for tag in (b"DICT", b"PART", b"RECS"):
        if tag not in sections:
            raise CorruptSnapshot(f"missing section {tag!r}")
    return sections


def load(path: str | Path) -> GlobalIndex:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IoFailure(path, exc) from exc
    sections = _read_sections(data)

    dict_r = _Reader(sections[b"DICT"])
    tokens = [dict_r.string() for _ in range(dict_r.uvarint())]
    abbrev = {}
    for _ in range(dict_r.uvarint()):
        variant = dict_r.string()
        abbrev[variant] = dict_r.string()

    recs_r = _Reader(sections[b"RECS"])
    record_count = recs_r.uvarint()
    keys: list[RecordKey] = []
    records: list[RawRecord] = []
    for _ in range(record_count):
        fid = recs_r.string()
        cid = recs_r.string()
        ctype = CustomerType(chr(recs_r.byte()))
        fields = [recs_r.string() for _ in range(8)]
        raw = RawRecord(fid, cid, ctype, *fields)
        keys.append(RecordKey(fid, cid))
        records.append(raw)
    unindexable_ordinals = recs_r.deltas()
    recs_r.uvarint()  # audit position at save time; the live log restarts empty

    index = GlobalIndex(AbbreviationTable(abbrev))
    index.interner = TokenInterner(tokens)
    index.record_store = {k: r for k, r in zip(keys, records)}
    index.unindexable = [keys[i] for i in unindexable_ordinals]

    part_r = _Reader(sections[b"PART"])
    for _ in range(part_r.uvarint()):
        country = part_r.string()
        ctype = CustomerType(chr(part_r.byte()))
        pkey = PartitionKey(country, ctype)
        partition = Partition(pkey, index.interner)
        partition.record_count = part_r.uvarint()
        if partition.name_tree is not None:
            if part_r.byte():
                partition.name_tree.root = _decode_node(part_r, keys, partition.name_tree, 1)
        else:
            _decode_postings_index(part_r, partition.name_index, keys)
        _decode_postings_index(part_r, partition.address_index, keys)
        index.partitions[pkey] = partition
    return index


def append_audit(index: GlobalIndex, path: str | Path) -> int:
    """Append not-yet-persisted audit events to the audit text file.

    Returns the number of events written.  One tab-separated line per event:
    timestamp, fid, cid, action.
    """
    pending = index.audit_log[index.audit_persisted:]
    if pending:
        try:
            with open(path, "a", encoding="utf-8") as fh:
                for event in pending:
                    fh.write(event.as_line() + "\n")
        except OSError as exc:
            raise IoFailure(path, exc) from exc
        index.audit_persisted = len(index.audit_log)
    return len(pending)
