"""Exception hierarchy shared across the package."""

from __future__ import annotations


class CrossIndexError(Exception):
    """Base class for all errors raised by this package."""


class MissingIdentity(CrossIndexError):
    """A source row lacks its fund id or customer id."""


class EmptyName(CrossIndexError):
    """A name with zero tokens cannot be inserted into the company-name tree."""


class EmptyQuery(CrossIndexError):
    """A search was issued with no name and no address terms."""


class DuplicateKey(CrossIndexError):
    """The same (fid, cid) pair appeared more than once in a source export."""

    def __init__(self, keys):
        self.keys = list(keys)
        shown = ", ".join(f"({k.fid!r}, {k.cid!r})" for k in self.keys[:5])
        extra = "" if len(self.keys) <= 5 else f" and {len(self.keys) - 5} more"
        super().__init__(f"duplicate record keys: {shown}{extra}")


class UnknownKey(CrossIndexError):
    """Extraction was asked for keys absent from the record store."""

    def __init__(self, keys):
        self.keys = list(keys)
        shown = ", ".join(f"({k.fid!r}, {k.cid!r})" for k in self.keys[:5])
        super().__init__(f"unknown record keys: {shown}")


class InvalidParams(CrossIndexError):
    """Generator parameters out of range."""


class SourceUnreadable(CrossIndexError):
    """A source export file could not be opened or read."""

    def __init__(self, path, cause=None):
        self.path = str(path)
        self.cause = cause
        detail = f": {cause}" if cause else ""
        super().__init__(f"cannot read source file {self.path}{detail}")


class MalformedRow(CrossIndexError):
    """A source export row failed to parse."""

    def __init__(self, path, line, reason):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class CorruptSnapshot(CrossIndexError):
    """Snapshot failed its magic, version, or checksum validation."""


class IoFailure(CrossIndexError):
    """Snapshot read/write failed at the OS level."""

    def __init__(self, path, cause):
        self.path = str(path)
        self.cause = cause
        super().__init__(f"I/O failure on {self.path}: {cause}")


class BenchMismatch(CrossIndexError):
    """Indexed search and baseline scan disagreed on a benchmark query."""
