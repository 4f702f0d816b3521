import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from witt.errors import NotDivisorClosed, NotPrime, ParseError
from witt.truncation import TruncationSet, parse_truncation_set


def test_validate_sorts_and_dedupes():
    assert TruncationSet.validate([6, 3, 1, 2, 2]).elements == (1, 2, 3, 6)


def test_validate_names_missing_divisor():
    with pytest.raises(NotDivisorClosed) as e:
        TruncationSet.validate([1, 4])
    assert e.value.witness == 4
    assert e.value.missing == 2


def test_empty_set_is_valid():
    S = TruncationSet.validate([])
    assert len(S) == 0
    assert not S


def test_quotient():
    S = TruncationSet.validate([1, 2, 3, 6])
    assert S.quotient(2).elements == (1, 3)
    assert S.quotient(6).elements == (1,)
    assert S.quotient(4).elements == ()


def test_p_part_and_typicality():
    S = TruncationSet.up_to(8)
    assert S.p_part(2).elements == (1, 2, 4, 8)
    assert S.p_part(2).is_p_typical(2)
    assert not S.is_p_typical(2)
    with pytest.raises(NotPrime):
        S.p_part(4)


def test_complement_of_multiples():
    assert TruncationSet.up_to(6).complement_of_multiples(2).elements == (1, 3, 5)


def test_subsets_smallest_first():
    subsets = TruncationSet.validate([1, 2, 3]).subsets()
    assert [t.elements for t in subsets] == [(1,), (1, 2), (1, 3), (1, 2, 3)]


def test_subsets_respect_divisibility():
    subsets = TruncationSet.validate([1, 2, 4]).subsets()
    assert [t.elements for t in subsets] == [(1,), (1, 2), (1, 2, 4)]


def test_parse():
    assert parse_truncation_set("1,2,3").elements == (1, 2, 3)
    assert parse_truncation_set("{1,2}").elements == (1, 2)
    assert parse_truncation_set("").elements == ()
    with pytest.raises(ParseError):
        parse_truncation_set("1,x")
    with pytest.raises(ParseError):
        parse_truncation_set("0,1")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=40), min_size=1, max_size=5))
def test_divisor_closure_is_closed(seed):
    S = TruncationSet.divisor_closure(seed)
    assert TruncationSet.validate(S.elements) == S
    for n in seed:
        assert n in S
        assert TruncationSet.validate(S.quotient(n).elements) == S.quotient(n)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=12), min_size=1, max_size=3))
def test_every_subset_is_a_truncation_set(seed):
    S = TruncationSet.divisor_closure(seed)
    for T in S.subsets():
        assert T.is_subset(S)
        assert TruncationSet.validate(T.elements) == T


def test_validate_rejects_non_integers():
    with pytest.raises(ParseError):
        TruncationSet.validate(["one", 2])
    with pytest.raises(ParseError):
        TruncationSet.validate([None])
