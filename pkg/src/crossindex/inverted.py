"""Inverted lists for customer names and addresses: token -> sorted postings.

Multi-token queries intersect postings lists smallest-first.  A token that was
never indexed simply yields an empty list; misses are routine in dirty data.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, Iterator

from .errors import EmptyQuery
from .interning import TokenInterner
from .model import RecordKey


class PostingsIndex:
    def __init__(self, interner: TokenInterner | None = None):
        self.interner = interner if interner is not None else TokenInterner()
        self._entries: dict[int, list[RecordKey]] = {}

    def add(self, tokens: Iterable[str], key: RecordKey) -> None:
        for token in set(tokens):
            token_id = self.interner.intern(token)
            postings = self._entries.setdefault(token_id, [])
            i = bisect_left(postings, key)
            if i == len(postings) or postings[i] != key:
                postings.insert(i, key)

    def postings(self, token: str) -> list[RecordKey]:
        token_id = self.interner.id_of(token)
        if token_id is None:
            return []
        return list(self._entries.get(token_id, []))

    def query_all(self, tokens: Iterable[str]) -> list[RecordKey]:
        """Keys present in the postings of every query token (conjunction)."""
        tokens = set(tokens)
        if not tokens:
            raise EmptyQuery("query_all needs at least one token")
        lists = []
        for token in tokens:
            token_id = self.interner.id_of(token)
            postings = self._entries.get(token_id) if token_id is not None else None
            if not postings:
                return []
            lists.append(postings)
        lists.sort(key=len)
        result = set(lists[0])
        for postings in lists[1:]:
            result.intersection_update(postings)
            if not result:
                return []
        return sorted(result)

    def items(self) -> Iterator[tuple[str, list[RecordKey]]]:
        """(token, postings) pairs in token lexical order."""
        for token_id in sorted(self._entries, key=self.interner.token):
            yield self.interner.token(token_id), list(self._entries[token_id])

    def token_count(self) -> int:
        return len(self._entries)

    def __len__(self) -> int:
        return len(self._entries)
