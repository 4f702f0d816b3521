from fractions import Fraction

import pytest

from phimod.matrices import WittMatrix, column, tangent_matrix, witt_from_fractions
from witt.core import WittVector, one, verschiebung
from witt.errors import InvalidRing, NotGhostIntegral, NotSubset, ShapeMismatch
from witt.rings import Integers, IntegersModM, Rationals
from witt.truncation import TruncationSet

Z = Integers()
S12 = TruncationSet.up_to(2)
S1236 = TruncationSet.validate([1, 2, 3, 6])


def test_needs_torsion_free_ring():
    with pytest.raises(InvalidRing):
        WittMatrix.identity(1, S12, IntegersModM(4))


def test_integer_entries_round_trip():
    m = WittMatrix.from_ints(S12, Z, [[1, 2], [3, 4]])
    assert m.entry(0, 1) == WittVector.of(S12, Z, [2, -1])
    assert WittMatrix.from_entries(S12, Z, m.entries()) == m


def test_vec_is_column_major():
    m = WittMatrix.from_ints(S12, Z, [[1, 2], [3, 4]])
    assert m.vec() == WittMatrix.from_ints(S12, Z, [[1], [3], [2], [4]])


def test_product_and_transpose():
    a = WittMatrix.from_ints(S12, Z, [[1, 2], [0, 1]])
    b = WittMatrix.from_ints(S12, Z, [[1, 0], [3, 1]])
    assert a @ b == WittMatrix.from_ints(S12, Z, [[7, 2], [3, 1]])
    assert (a @ b).transpose() == b.transpose() @ a.transpose()
    with pytest.raises(ShapeMismatch):
        a @ WittMatrix.identity(3, S12, Z)


def test_divide_int():
    assert WittMatrix.from_ints(S12, Z, [[2]]).divide_int(2) == WittMatrix.identity(1, S12, Z)
    assert WittMatrix.from_ints(S12, Z, [[1]]).divide_int(2) is None
    v2 = WittMatrix.identity(1, S12.quotient(2), Z).verschiebung(2, S12)
    assert v2.divide_int(2) is None


def test_inverse_depends_on_ring():
    two = WittMatrix.from_ints(S12, Z, [[2]])
    assert two.inverse() is None
    inverse = WittMatrix.from_ints(S12, Rationals(), [[2]]).inverse()
    assert inverse is not None
    assert inverse.entry(0, 0).coord(1).payload == Fraction(1, 2)
    swap = WittMatrix.from_ints(S12, Z, [[0, 1], [1, 0]])
    assert swap.inverse() == swap


def test_frobenius_and_verschiebung_blocks():
    x = WittMatrix.from_entries(S1236, Z, [[WittVector.of(S1236, Z, [1, 2, 3, 4])]])
    assert x.frobenius(2).S == S1236.quotient(2)
    assert x.frobenius(2).frobenius(3) == x.frobenius(6)
    y = WittMatrix.identity(1, S1236.quotient(3), Z).verschiebung(3, S1236)
    assert y.entry(0, 0) == verschiebung(3, one(S1236.quotient(3), Z), S1236)
    assert y.frobenius(3) == WittMatrix.from_ints(S1236.quotient(3), Z, [[3]])
    with pytest.raises(ShapeMismatch):
        WittMatrix.identity(1, S1236, Z).verschiebung(2, S1236)


def test_restrict_and_extend():
    x = WittMatrix.from_entries(S1236, Z, [[WittVector.of(S1236, Z, [1, 2, 3, 4])]])
    T = TruncationSet.validate([1, 3])
    assert x.restrict(T).entry(0, 0).payloads() == (1, 3)
    assert x.restrict(T).extend_by_zero(S1236).entry(0, 0).payloads() == (1, 0, 3, 0)
    with pytest.raises(NotSubset):
        x.restrict(TruncationSet.up_to(4))


def test_kron_and_block_diag():
    a = WittMatrix.from_ints(S12, Z, [[1, 2]])
    b = WittMatrix.from_ints(S12, Z, [[3], [4]])
    assert a.kron(b) == WittMatrix.from_ints(S12, Z, [[3, 6], [4, 8]])
    assert a.block_diag(b) == WittMatrix.from_ints(S12, Z, [[1, 2, 0], [0, 0, 3], [0, 0, 4]])


def test_non_integral_entries_are_reported():
    half = WittMatrix.from_ints(S12, Z, [[1]]).scale_fraction(Fraction(1, 2))
    assert not half.is_integral()
    with pytest.raises(NotGhostIntegral):
        half.entries()
    with pytest.raises(NotGhostIntegral):
        witt_from_fractions(S12, Z, [Fraction(1), Fraction(0)])


def test_column_and_tangent():
    c = column([one(S12, Z), WittVector.of(S12, Z, [3, 1])])
    assert c.shape == (2, 1)
    assert tangent_matrix(c) == [[Fraction(1)], [Fraction(3)]]
    with pytest.raises(ShapeMismatch):
        tangent_matrix(WittMatrix.identity(1, TruncationSet.validate([]), Z))
