import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from witt.core import WittVector, mul, scale_int
from witt.errors import IndexOutsideS, WrongRing
from witt.rings import Integers, IntegersModM
from witt.truncation import TruncationSet
from witt.zbasis import VBasisExpansion, from_vbasis, to_vbasis, vbasis_element, vbasis_multiply, vbasis_product

S = TruncationSet.up_to(12)
S1236 = TruncationSet.validate([1, 2, 3, 6])


def test_expansion_of_basis_element():
    assert to_vbasis(vbasis_element(6, S1236)).coeffs == (0, 0, 0, 1)
    assert to_vbasis(WittVector.of(S1236, Integers(), [1, 0, 0, 0])).coeffs == (1, 0, 0, 0)


def test_structure_constants():
    assert vbasis_product(4, 6, S) == (2, 12)
    assert vbasis_product(2, 3, S) == (1, 6)
    with pytest.raises(IndexOutsideS):
        vbasis_product(4, 6, TruncationSet.up_to(8))


@pytest.mark.parametrize("m, n", [(2, 3), (2, 2), (4, 6), (3, 4), (1, 5)])
def test_structure_constants_match_multiplication(m, n):
    c, index = vbasis_product(m, n, S)
    assert mul(vbasis_element(m, S), vbasis_element(n, S)) == scale_int(vbasis_element(index, S), c)


def test_basis_needs_integers():
    with pytest.raises(WrongRing):
        to_vbasis(WittVector.of(TruncationSet.up_to(2), IntegersModM(4), [1, 1]))
    with pytest.raises(IndexOutsideS):
        vbasis_element(5, S1236)


coefficients = st.lists(st.integers(min_value=-4, max_value=4), min_size=len(S), max_size=len(S))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=len(S), max_size=len(S)))
def test_round_trip(coords):
    w = WittVector.of(S, Integers(), coords)
    assert from_vbasis(to_vbasis(w)) == w


@settings(max_examples=30, deadline=None)
@given(coefficients, coefficients)
def test_basis_multiplication_matches_witt_product(a, b):
    e1, e2 = VBasisExpansion(S, tuple(a)), VBasisExpansion(S, tuple(b))
    assert from_vbasis(vbasis_multiply(e1, e2)) == mul(from_vbasis(e1), from_vbasis(e2))
