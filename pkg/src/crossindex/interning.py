"""Token dictionary: each distinct token string is stored once and referenced
by a small integer id inside the index structures.

Ids are dense and assigned in first-seen order, so they are deterministic for
a given insertion sequence and collision-free (unlike raw hashing).
"""

from __future__ import annotations


class TokenInterner:
    def __init__(self, tokens: list[str] | None = None):
        self._tokens: list[str] = []
        self._ids: dict[str, int] = {}
        for token in tokens or []:
            self.intern(token)

    def intern(self, token: str) -> int:
        token_id = self._ids.get(token)
        if token_id is None:
            token_id = len(self._tokens)
            self._tokens.append(token)
            self._ids[token] = token_id
        return token_id

    def id_of(self, token: str) -> int | None:
        """Id of an already-interned token, or None if never seen."""
        return self._ids.get(token)

    def token(self, token_id: int) -> str:
        return self._tokens[token_id]

    def tokens(self) -> list[str]:
        """All tokens in id order (id i is tokens()[i])."""
        return list(self._tokens)

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids
