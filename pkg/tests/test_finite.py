import pytest

from witt.errors import NotFinite, ShapeMismatch, TooLarge
from witt.finite import (
    materialize,
    maximal_ideal_report,
    maximal_ideals,
    predicted_maximal_ideal_count,
    verify_maximal_ideal_lemma,
    verify_points_lemma,
)
from witt.rings import Integers, IntegersModM
from witt.truncation import TruncationSet

S12 = TruncationSet.up_to(2)


def test_materialized_ring_satisfies_axioms():
    table = materialize(IntegersModM(2), S12)
    assert len(table) == 4
    assert table.check_axioms() == []
    assert table.is_unit(table.one)
    assert not table.is_unit(table.zero)


def test_materialize_limits():
    with pytest.raises(NotFinite):
        materialize(Integers(), S12)
    with pytest.raises(TooLarge):
        materialize(IntegersModM(4), TruncationSet.up_to(7))


def test_predicted_count():
    assert predicted_maximal_ideal_count(TruncationSet.validate([1, 2, 3, 6]), 2) == 2
    assert predicted_maximal_ideal_count(TruncationSet.up_to(4), 2) == 2
    assert predicted_maximal_ideal_count(TruncationSet.up_to(4), 5) == 4


def test_two_maximal_ideals_over_f3():
    report = maximal_ideal_report(IntegersModM(3), S12)
    assert report.elements == 9
    assert len(report.maximal_ideals) == 2
    assert report.predicted_count == 2
    assert report.passed
    assert all(ideal.quotient_size == 3 for ideal in report.maximal_ideals)


def test_local_over_f2():
    table = materialize(IntegersModM(2), TruncationSet.up_to(4).p_part(2))
    assert len(maximal_ideals(table)) == 1


@pytest.mark.parametrize("p, elements, j", [(2, (1, 2), 1), (2, (1, 2), 2), (3, (1, 3), 1), (2, (1, 2, 4), 1)])
def test_maximal_ideal_lemma(p, elements, j):
    report = verify_maximal_ideal_lemma(p, TruncationSet(elements), j)
    assert report.passed, report.failures
    assert report.maximal_ideal_count == 1


def test_maximal_ideal_lemma_needs_p_typical_set():
    with pytest.raises(ShapeMismatch):
        verify_maximal_ideal_lemma(2, TruncationSet.up_to(3))


def test_points_lemma():
    report = verify_points_lemma(6, S12)
    assert report.passed, report.failures
    assert report.expected_count == 3
    assert report.elements == 36
