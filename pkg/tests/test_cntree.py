import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossindex.cntree import CompanyNameTree
from crossindex.errors import EmptyName
from crossindex.model import RecordKey
from crossindex.normalize import canonicalize, tokenize

from conftest import REFERENCE_COMPANY_ROWS


def build_reference_tree(table):
    tree = CompanyNameTree()
    for name, (fid, cid) in REFERENCE_COMPANY_ROWS:
        tree.insert(canonicalize(tokenize(name), table), RecordKey(fid, cid))
    return tree


def root_tokens(tree):
    return [tree.interner.token(e.token_id) for e in tree.root.elements]


class TestInsert:
    def test_single_name(self):
        tree = CompanyNameTree()
        tree.insert(["ABC", "CAPITAL", "GROUP"], RecordKey("Skada", "B123"))
        assert root_tokens(tree) == ["ABC"]
        assert tree.search_exact(["ABC", "CAPITAL", "GROUP"]) == [RecordKey("Skada", "B123")]

    def test_same_name_two_keys(self):
        tree = CompanyNameTree()
        name = ["TRUST", "A/C", "TA", "101010"]
        tree.insert(name, RecordKey("Merlu", "1024"))
        tree.insert(name, RecordKey("Abba", "392"))
        assert tree.search_exact(name) == [RecordKey("Abba", "392"),
                                           RecordKey("Merlu", "1024")]
        assert tree.name_count == 1

    def test_reference_root_has_four_sorted_elements(self, table):
        tree = build_reference_tree(table)
        assert root_tokens(tree) == ["ABC", "BANK", "FIRST", "INTERNATIONAL"]

    def test_empty_name_rejected(self):
        with pytest.raises(EmptyName):
            CompanyNameTree().insert([], RecordKey("f", "c"))

    def test_duplicate_insert_is_idempotent(self):
        tree = CompanyNameTree()
        tree.insert(["A", "B"], RecordKey("f", "c"))
        tree.insert(["A", "B"], RecordKey("f", "c"))
        assert tree.search_exact(["A", "B"]) == [RecordKey("f", "c")]


class TestSearchExact:
    def test_hit(self, table):
        tree = build_reference_tree(table)
        assert tree.search_exact(["ABC", "CAPITAL", "GROUP"]) == [RecordKey("Skada", "B123")]

    def test_interior_element_without_postings(self, table):
        tree = build_reference_tree(table)
        assert tree.search_exact(["ABC", "CAPITAL"]) == []

    def test_absent_root_token(self, table):
        tree = build_reference_tree(table)
        assert tree.search_exact(["ZZZ"]) == []

    def test_name_that_is_prefix_of_another(self):
        # "FIRST BANK LTD" terminal postings coexist with a longer name below it
        tree = CompanyNameTree()
        tree.insert(["FIRST", "BANK", "LTD"], RecordKey("a", "1"))
        tree.insert(["FIRST", "BANK", "LTD", "OBB", "A/C"], RecordKey("a", "2"))
        assert tree.search_exact(["FIRST", "BANK", "LTD"]) == [RecordKey("a", "1")]
        assert tree.search_exact(["FIRST", "BANK", "LTD", "OBB", "A/C"]) == [RecordKey("a", "2")]


class TestSearchPrefix:
    def test_two_branch_subtree(self, table):
        tree = build_reference_tree(table)
        assert tree.search_prefix(["ABC", "CAPITAL"]) == [RecordKey("Abba", "566"),
                                                          RecordKey("Skada", "B123")]

    def test_shared_leaf_subtree(self, table):
        tree = build_reference_tree(table)
        result = tree.search_prefix(["FIRST", "AMERICA", "BANK", "LTD", "TRUST", "A/C", "TA"])
        assert result == sorted([RecordKey("Merlu", "1024"), RecordKey("Abba", "392"),
                                 RecordKey("Tarra", "903")])

    def test_single_path_subtree(self, table):
        tree = build_reference_tree(table)
        assert tree.search_prefix(["INTERNATIONAL"]) == [RecordKey("Tarra", "906")]

    def test_miss(self, table):
        tree = build_reference_tree(table)
        assert tree.search_prefix(["ABC", "ZZZ"]) == []

    def test_prefix_includes_terminal_element_own_postings(self):
        tree = CompanyNameTree()
        tree.insert(["A", "B"], RecordKey("f", "1"))
        tree.insert(["A", "B", "C"], RecordKey("f", "2"))
        assert tree.search_prefix(["A", "B"]) == [RecordKey("f", "1"), RecordKey("f", "2")]


class TestEnumerate:
    def test_empty_tree(self):
        assert list(CompanyNameTree().enumerate_names()) == []

    def test_single_name(self):
        tree = CompanyNameTree()
        tree.insert(["X", "Y"], RecordKey("f", "c"))
        assert list(tree.enumerate_names()) == [(("X", "Y"), [RecordKey("f", "c")])]

    def test_reference_tree_has_eight_names(self, table):
        tree = build_reference_tree(table)
        assert len(list(tree.enumerate_names())) == 8

    def test_round_trips_through_insert(self, table):
        tree = build_reference_tree(table)
        rebuilt = CompanyNameTree()
        for name, postings in tree.enumerate_names():
            for key in postings:
                rebuilt.insert(name, key)
        assert list(rebuilt.enumerate_names()) == list(tree.enumerate_names())


names_strategy = st.lists(
    st.tuples(
        st.lists(st.sampled_from(["ALPHA", "BANK", "CO", "DELTA", "EAST", "FUND"]),
                 min_size=1, max_size=5),
        st.tuples(st.sampled_from(["f1", "f2"]), st.sampled_from(["1", "2", "3", "4"])),
    ),
    max_size=20,
)


@settings(max_examples=200)
@given(names_strategy, st.lists(st.sampled_from(["ALPHA", "BANK", "CO", "DELTA",
                                                 "EAST", "FUND", "ZZZ"]),
                                min_size=1, max_size=4))
def test_prefix_search_matches_linear_scan(rows, query):
    tree = CompanyNameTree()
    corpus = []
    for tokens, (fid, cid) in rows:
        key = RecordKey(fid, cid)
        tree.insert(tokens, key)
        corpus.append((tuple(tokens), key))
    expected = sorted({key for tokens, key in corpus
                       if tokens[:len(query)] == tuple(query)})
    assert tree.search_prefix(query) == expected
    exact = sorted({key for tokens, key in corpus if tokens == tuple(query)})
    assert tree.search_exact(query) == exact
    assert set(tree.search_exact(query)) <= set(tree.search_prefix(query))


@given(names_strategy)
def test_structural_invariants(rows):
    tree = CompanyNameTree()
    for tokens, (fid, cid) in rows:
        tree.insert(tokens, RecordKey(fid, cid))
    if tree.root is None:
        assert tree.height == 0
        return
    # every node: sorted unique element tokens, no empty nodes, postings sorted
    stack = [tree.root]
    while stack:
        node = stack.pop()
        tokens = [tree.interner.token(e.token_id) for e in node.elements]
        assert tokens == sorted(tokens)
        assert len(set(tokens)) == len(tokens)
        assert tokens  # Card{em} > 0
        for element in node.elements:
            assert element.child is not None or element.postings is not None
            if element.postings is not None:
                assert element.postings == sorted(set(element.postings))
                assert element.postings
            if element.child is not None:
                stack.append(element.child)
    enumerated = list(tree.enumerate_names())
    assert tree.height == max(len(name) for name, _ in enumerated)
    assert tree.name_count == len(enumerated)
    for name, postings in enumerated:
        assert tree.search_exact(name) == postings
