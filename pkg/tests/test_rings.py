from fractions import Fraction

import pytest

from witt.errors import DescriptorMismatch, InvalidRing, NotDivisible, NotFinite, NotPrime, ParseError
from witt.rings import (
    Integers,
    IntegersModM,
    LocalIntegersAtP,
    PolynomialOverZ,
    QuotientPolynomial,
    Rationals,
    parse_ring,
    ring_from_json,
)


@pytest.mark.parametrize("text, expected", [
    ("z", Integers()),
    ("q", Rationals()),
    ("zmod:4", IntegersModM(4)),
    ("zp:3", LocalIntegersAtP(3)),
    ("poly:x,y", PolynomialOverZ(("x", "y"))),
])
def test_parse_ring(text, expected):
    assert parse_ring(text) == expected


def test_parse_ring_rejects_garbage():
    with pytest.raises(ParseError):
        parse_ring("zmod")
    with pytest.raises(ParseError):
        parse_ring("reals")


def test_invalid_parameters():
    with pytest.raises(InvalidRing):
        IntegersModM(1)
    with pytest.raises(NotPrime):
        LocalIntegersAtP(6)


def test_residues_are_canonical():
    ring = IntegersModM(4)
    assert ring.from_int(-1).payload == 3
    assert (ring.from_int(3) * ring.from_int(3)).payload == 1
    assert ring.is_unit(ring.from_int(3))
    assert not ring.is_unit(ring.from_int(2))


def test_from_fraction():
    assert Integers().from_fraction(Fraction(6, 3)).payload == 2
    with pytest.raises(NotDivisible):
        Integers().from_fraction(Fraction(1, 2))
    assert LocalIntegersAtP(3).from_fraction(Fraction(1, 2)).payload == Fraction(1, 2)
    with pytest.raises(NotDivisible):
        LocalIntegersAtP(2).from_fraction(Fraction(1, 2))
    assert IntegersModM(5).from_fraction(Fraction(1, 2)).payload == 3


def test_local_ring_rejects_bad_denominators_on_parse():
    with pytest.raises(NotDivisible):
        LocalIntegersAtP(2).parse("1/2")
    assert LocalIntegersAtP(2).parse("1/3").payload == Fraction(1, 3)


def test_encodings():
    assert Integers().encode(Integers().from_int(-7)) == "-7"
    assert Rationals().encode(Rationals().parse("-1/2")) == {"num": "-1", "den": "2"}
    assert IntegersModM(4).encode(IntegersModM(4).from_int(7)) == {"mod": "4", "val": "3"}


def test_decode_checks_modulus():
    with pytest.raises(DescriptorMismatch):
        IntegersModM(4).decode({"mod": "5", "val": "1"})


def test_mixing_rings_fails():
    with pytest.raises(DescriptorMismatch):
        Integers().from_int(1) + IntegersModM(4).from_int(1)


def test_polynomial_encoding_is_sorted():
    ring = PolynomialOverZ(("x",))
    value = ring.parse("x**2 + 3")
    assert ring.encode(value) == [{"coeff": "3", "exp": [0]}, {"coeff": "1", "exp": [2]}]
    assert ring.decode(ring.encode(value)) == value


def test_quotient_ring():
    finite = QuotientPolynomial(variables=("x",), relations=((1, 0, 1),), mod=2)
    assert finite.finite
    assert finite.cardinality() == 4
    assert len(list(finite.enumerate())) == 4
    x = finite.parse("x")
    assert (x * x).payload == finite.from_int(1).payload

    integral = parse_ring("quot:x:1,0,1")
    assert integral.torsion_free
    with pytest.raises(NotFinite):
        integral.cardinality()


@pytest.mark.parametrize("ring", [
    Integers(), Rationals(), IntegersModM(6), LocalIntegersAtP(5), PolynomialOverZ(("x", "y")),
    QuotientPolynomial(variables=("t",), relations=((1, 1, 1),), mod=3),
])
def test_describe_round_trips(ring):
    assert ring_from_json(ring.describe()) == ring


def test_polynomial_exact_division():
    ring = PolynomialOverZ(("x", "y"))
    assert ring.div_exact_by_int(ring.parse("2*x + 4*y"), 2) == ring.parse("x + 2*y")
    with pytest.raises(NotDivisible):
        ring.div_exact_by_int(ring.parse("2*x + 1"), 2)


@pytest.mark.parametrize("ring, data", [
    (Rationals(), {"num": "1", "den": "0"}),
    (LocalIntegersAtP(3), {"num": "x", "den": "1"}),
    (Rationals(), {"num": "1"}),
    (IntegersModM(4), {"mod": "4"}),
])
def test_malformed_json_values(ring, data):
    with pytest.raises(ParseError):
        ring.decode(data)
