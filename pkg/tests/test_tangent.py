from dataclasses import replace
from fractions import Fraction

import pytest

from phimod.matrices import WittMatrix
from phimod.objects import (
    BetaData,
    PhiMorphism,
    block_morphism,
    diagonal_morphism,
    direct_sum,
    identity_morphism,
    scalar_morphism,
    tate,
    tensor,
    tensor_morphisms,
    unit,
    zero_morphism,
)
from phimod.tangent import POINT, conservativity_harness, p_typical_reduction_check, tangent, tangent_of_morphism
from phimod.validation import is_morphism
from witt.errors import WrongRing
from witt.rings import Integers, LocalIntegersAtP, Rationals
from witt.truncation import TruncationSet

Z = Integers()
Q12 = TruncationSet.up_to(2)
Q1236 = TruncationSet.validate([1, 2, 3, 6])


def test_tangent_object():
    model = tangent(tate(-1, Q12, Z))
    assert (model.rank, model.a, model.twist) == (1, 2, 0)
    assert model.ring == Z.describe()


def test_tangent_of_morphism():
    assert tangent_of_morphism(scalar_morphism(unit(Q12, Z), 3)) == [[Fraction(3)]]


def test_zero_morphism_is_faithful():
    report = conservativity_harness(zero_morphism(unit(Q12, Z), unit(Q12, Z)))
    assert report.faithful == "pass"
    assert report.conservative == "not applicable"
    assert report.passed


def test_identity_is_conservative():
    report = conservativity_harness(identity_morphism(tate(-1, Q12, Z)))
    assert report.faithful == "not applicable"
    assert report.conservative == "pass"
    assert report.tangent == [["1"]]


def test_invertibility_depends_on_the_ring():
    over_z = conservativity_harness(scalar_morphism(unit(Q12, Z), 2))
    assert over_z.conservative == "not applicable"
    over_q = conservativity_harness(scalar_morphism(unit(Q12, Rationals()), 2))
    assert over_q.conservative == "pass"


def test_harness_reports_counterexample():
    M = unit(Q12, Z)
    v2 = WittMatrix.identity(1, Q12.quotient(2), Z).verschiebung(2, Q12)
    f = PhiMorphism(M, M, {POINT: WittMatrix.zeros((1, 1), POINT, Z), Q12: v2})
    report = conservativity_harness(f)
    assert report.faithful == "fail"
    assert not report.passed
    assert report.counterexample.startswith("T(f) = 0")


@pytest.mark.parametrize("build, ring", [
    (lambda Q, R: unit(Q, R), LocalIntegersAtP(2)),
    (lambda Q, R: tate(-1, Q, R), LocalIntegersAtP(2)),
    (lambda Q, R: tate(-2, Q, R), Rationals()),
])
def test_p_typical_reduction(build, ring):
    report = p_typical_reduction_check(build(Q1236, ring), 2, samples=2)
    assert report.passed, report.failures
    assert report.checks > 0


def test_p_typical_reduction_catches_bad_beta():
    M = tate(-1, Q1236, LocalIntegersAtP(2))
    key = (TruncationSet.validate([1, 3]), 3)
    beta = dict(M.beta)
    beta[key] = BetaData(beta[key].B.scale_int(2), beta[key].C)
    report = p_typical_reduction_check(replace(M, beta=beta), 2, samples=1)
    assert not report.passed
    assert any(f.S == [1, 3] and f.n == 3 for f in report.failures)


def test_p_typical_reduction_needs_local_ring():
    with pytest.raises(WrongRing):
        p_typical_reduction_check(unit(Q12, Z), 2)
    with pytest.raises(WrongRing):
        p_typical_reduction_check(unit(Q12, LocalIntegersAtP(3)), 2)


def test_tangent_is_monoidal():
    M = direct_sum(unit(Q12, Z), tate(-1, Q12, Z))
    f, g = diagonal_morphism(M, [2, 3]), scalar_morphism(tate(-1, Q12, Z), 5)
    tf, tg = tangent_of_morphism(f), tangent_of_morphism(g)
    expected = [[a * b for a in row_f for b in row_g] for row_f in tf for row_g in tg]
    assert tangent_of_morphism(tensor_morphisms(f, g)) == expected
    assert tangent(tensor(M, tate(-1, Q12, Z))).rank == 2


def test_block_endomorphism_of_a_direct_sum():
    f = block_morphism(scalar_morphism(unit(Q12, Z), 2), scalar_morphism(tate(-1, Q12, Z), 3))
    assert f.source.rank == 2
    assert is_morphism(f)
    assert tangent_of_morphism(f) == [[2, 0], [0, 3]]
    assert conservativity_harness(f).passed
