"""Word-level company-name tree.

Each root-to-leaf path spells one company name; the element terminating a
name carries a sorted postings list of record keys.  An element may hold both
a child link and postings, because one company name can be a strict prefix of
another in the same name group ("FIRST COMMERCIAL BANK LTD" vs
"FIRST COMMERCIAL BANK LTD OBB A/C").

Elements inside a node are kept sorted by token text, so lookup is a binary
search.  Tokens are stored as interned integer ids.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterator

from .errors import EmptyName
from .interning import TokenInterner
from .model import RecordKey


@dataclass(slots=True)
class Element:
    token_id: int
    child: "Node | None" = None
    postings: list[RecordKey] | None = None


@dataclass(slots=True)
class Node:
    elements: list[Element] = field(default_factory=list)


class CompanyNameTree:
    def __init__(self, interner: TokenInterner | None = None):
        self.interner = interner if interner is not None else TokenInterner()
        self.root: Node | None = None
        self.height = 0
        self.name_count = 0

    def _find(self, node: Node, token: str) -> Element | None:
        i = bisect_left(node.elements, token, key=lambda e: self.interner.token(e.token_id))
        if i < len(node.elements) and self.interner.token(node.elements[i].token_id) == token:
            return node.elements[i]
        return None

    def _find_or_create(self, node: Node, token: str) -> Element:
        i = bisect_left(node.elements, token, key=lambda e: self.interner.token(e.token_id))
        if i < len(node.elements) and self.interner.token(node.elements[i].token_id) == token:
            return node.elements[i]
        element = Element(token_id=self.interner.intern(token))
        node.elements.insert(i, element)
        return element

    def insert(self, name_tokens: list[str] | tuple[str, ...], key: RecordKey) -> None:
        if not name_tokens:
            raise EmptyName("cannot index an empty company name")
        if self.root is None:
            self.root = Node()
        node = self.root
        last = len(name_tokens) - 1
        element = None
        for i, token in enumerate(name_tokens):
            element = self._find_or_create(node, token)
            if i < last:
                if element.child is None:
                    element.child = Node()
                node = element.child
        assert element is not None
        if element.postings is None:
            element.postings = []
            self.name_count += 1
        j = bisect_left(element.postings, key)
        if j == len(element.postings) or element.postings[j] != key:
            element.postings.insert(j, key)
        self.height = max(self.height, len(name_tokens))

    def search_exact(self, name_tokens) -> list[RecordKey]:
        element = self._walk(name_tokens)
        if element is None or element.postings is None:
            return []
        return list(element.postings)

    def _walk(self, tokens) -> Element | None:
        if self.root is None or not tokens:
            return None
        node = self.root
        element = None
        for token in tokens:
            if node is None:
                return None
            element = self._find(node, token)
            if element is None:
                return None
            node = element.child
        return element

    def search_prefix(self, prefix_tokens) -> list[RecordKey]:
        element = self._walk(prefix_tokens)
        if element is None:
            return []
        seen: set[RecordKey] = set()
        stack = [element]
        while stack:
            current = stack.pop()
            if current.postings:
                seen.update(current.postings)
            if current.child is not None:
                stack.extend(current.child.elements)
        return sorted(seen)

    def enumerate_names(self) -> Iterator[tuple[tuple[str, ...], list[RecordKey]]]:
        """All inserted names with their postings, depth-first in lexical order."""
        if self.root is None:
            return
        path: list[str] = []

        def visit(node: Node) -> Iterator[tuple[tuple[str, ...], list[RecordKey]]]:
            for element in node.elements:
                path.append(self.interner.token(element.token_id))
                if element.postings is not None:
                    yield tuple(path), list(element.postings)
                if element.child is not None:
                    yield from visit(element.child)
                path.pop()

        yield from visit(self.root)
