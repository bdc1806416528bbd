import pytest
from hypothesis import given
from hypothesis import strategies as st

from crossindex.errors import EmptyQuery
from crossindex.inverted import PostingsIndex
from crossindex.model import RecordKey


@pytest.fixture
def name_index():
    """The two-customer reference name index."""
    index = PostingsIndex()
    index.add({"JOHN", "SMITH"}, RecordKey("Abba", "1234"))
    index.add({"MURPHY", "JOHN"}, RecordKey("Merlu", "112"))
    return index


@pytest.fixture
def address_index():
    index = PostingsIndex()
    index.add({"123", "SUNSET"}, RecordKey("Abba", "1234"))
    index.add({"AVENUE"}, RecordKey("Merlu", "112"))
    index.add({"123"}, RecordKey("Skada", "347"))
    return index


class TestAdd:
    def test_reference_name_rows(self, name_index):
        assert name_index.postings("JOHN") == [RecordKey("Abba", "1234"),
                                               RecordKey("Merlu", "112")]
        assert name_index.postings("MURPHY") == [RecordKey("Merlu", "112")]
        assert name_index.postings("SMITH") == [RecordKey("Abba", "1234")]

    def test_empty_token_set_is_noop(self, name_index):
        before = list(name_index.items())
        name_index.add(set(), RecordKey("x", "1"))
        assert list(name_index.items()) == before

    def test_readd_is_idempotent(self, name_index):
        name_index.add({"JOHN"}, RecordKey("Abba", "1234"))
        assert name_index.postings("JOHN") == [RecordKey("Abba", "1234"),
                                               RecordKey("Merlu", "112")]


class TestPostings:
    def test_address_123(self, address_index):
        assert address_index.postings("123") == [RecordKey("Abba", "1234"),
                                                 RecordKey("Skada", "347")]

    def test_address_avenue(self, address_index):
        assert address_index.postings("AVENUE") == [RecordKey("Merlu", "112")]

    def test_absent_token(self, address_index):
        assert address_index.postings("NOSUCH") == []


class TestQueryAll:
    def test_conjunction(self, name_index):
        assert name_index.query_all({"JOHN", "SMITH"}) == [RecordKey("Abba", "1234")]

    def test_order_insensitive(self, name_index):
        assert name_index.query_all({"SMITH", "JOHN"}) == \
            name_index.query_all({"JOHN", "SMITH"})

    def test_intersection_with_missing_token(self, name_index):
        assert name_index.query_all({"JOHN", "NOSUCH"}) == []

    def test_empty_query_rejected(self, name_index):
        with pytest.raises(EmptyQuery):
            name_index.query_all(set())

    def test_single_token_equals_postings(self, name_index):
        for token in ("JOHN", "MURPHY", "SMITH", "NOSUCH"):
            assert name_index.query_all({token}) == name_index.postings(token)


class TestInvariants:
    def test_items_in_lexical_order(self, address_index):
        tokens = [t for t, _ in address_index.items()]
        assert tokens == sorted(tokens)

    def test_no_empty_postings(self, address_index):
        for _, postings in address_index.items():
            assert postings


rows_strategy = st.lists(
    st.tuples(
        st.sets(st.sampled_from(["JOHN", "SMITH", "MURPHY", "MAIN", "123"]),
                min_size=0, max_size=4),
        st.tuples(st.sampled_from(["f1", "f2", "f3"]),
                  st.sampled_from(["1", "2", "3", "4", "5"])),
    ),
    max_size=20,
)


@given(rows_strategy, st.sets(st.sampled_from(["JOHN", "SMITH", "MURPHY", "MAIN",
                                               "123", "NOSUCH"]),
                              min_size=1, max_size=3))
def test_query_all_matches_linear_scan(rows, query):
    index = PostingsIndex()
    corpus: dict[RecordKey, set] = {}
    for tokens, (fid, cid) in rows:
        key = RecordKey(fid, cid)
        index.add(tokens, key)
        corpus.setdefault(key, set()).update(tokens)
    expected = sorted(k for k, tokens in corpus.items() if query <= tokens)
    assert index.query_all(query) == expected
    # monotone: adding a token never enlarges the result
    wider = set(query) | {"EXTRA"}
    assert set(index.query_all(wider)) <= set(index.query_all(query))
