import pytest
from hypothesis import given
from hypothesis import strategies as st

from crossindex.model import CustomerType, PartitionKey, RawRecord, RecordKey

keys = st.builds(RecordKey,
                 st.text(min_size=1, max_size=8),
                 st.text(min_size=1, max_size=8))


def test_key_order_lexicographic_on_fid():
    assert RecordKey("Abba", "1234") < RecordKey("Merlu", "112")


def test_key_order_reflexive():
    assert RecordKey("Abba", "1234") == RecordKey("Abba", "1234")


def test_sorting_a_leaf_postings_list():
    postings = [RecordKey("Merlu", "1024"), RecordKey("Abba", "392")]
    assert sorted(postings) == [RecordKey("Abba", "392"), RecordKey("Merlu", "1024")]


def test_key_parts_must_be_nonempty():
    with pytest.raises(ValueError):
        RecordKey("", "1")
    with pytest.raises(ValueError):
        RecordKey("f", "")


@given(keys, keys)
def test_key_order_antisymmetric(a, b):
    if a < b:
        assert not b < a


@given(keys, keys, keys)
def test_key_order_transitive(a, b, c):
    if a < b and b < c:
        assert a < c


@given(keys, keys)
def test_key_order_total(a, b):
    assert a < b or b < a or a == b


def test_joint_indexes_as_individual():
    assert CustomerType.JOINT.index_type() is CustomerType.INDIVIDUAL
    assert CustomerType.CORPORATE.index_type() is CustomerType.CORPORATE


def test_partition_key_rejects_joint():
    with pytest.raises(ValueError):
        PartitionKey("US", CustomerType.JOINT)


def test_raw_record_key_property():
    raw = RawRecord("f1", "c1", CustomerType.INDIVIDUAL)
    assert raw.key == RecordKey("f1", "c1")


def test_cid_comparison_is_case_sensitive():
    assert RecordKey("f", "abc") != RecordKey("f", "ABC")
