# rings.py

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Dict, Iterator, Optional, Tuple

from sympy import sympify
from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from witt.errors import (
    DescriptorMismatch,
    InvalidRing,
    NotDivisible,
    NotFinite,
    ParseError,
)
from witt.truncation import require_prime

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def poly_ring(variables: Tuple[str, ...]) -> PolyRing:
    """Sparse integer polynomial ring shared by every descriptor with these variables."""
    return PolyRing(",".join(variables), ZZ)


def fraction_from_json(data: Dict[str, Any]) -> Fraction:
    """Read {"num", "den"}; a missing field, a non-integer or a zero denominator is a ParseError."""
    try:
        return Fraction(int(data["num"]), int(data["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"cannot read {data!r} as a fraction: {e}")


@dataclass(frozen=True)
class RingValue:
    """An element of an exact coefficient ring; the payload is always canonical."""

    descriptor: "RingDescriptor"
    payload: Any

    def _coerce(self, other) -> "RingValue":
        if isinstance(other, RingValue):
            if other.descriptor is not self.descriptor and other.descriptor != self.descriptor:
                raise DescriptorMismatch(
                    f"cannot combine {self.descriptor.label()} with {other.descriptor.label()}"
                )
            return other
        if isinstance(other, int):
            return self.descriptor.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.descriptor.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.descriptor.sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.descriptor.sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.descriptor.mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.descriptor.neg(self)

    def __pow__(self, k: int):
        return self.descriptor.pow(self, k)

    def is_zero(self) -> bool:
        return self.descriptor.is_zero(self)

    def __repr__(self) -> str:
        return f"{self.descriptor.format(self.payload)}"


class RingDescriptor:
    """
    Base class for the supported coefficient rings.

    Subclasses are frozen dataclasses and implement the payload-level
    primitives `_add`, `_mul`, `_neg`, `_from_int` and `_canonical`.
    """

    kind = "Ring"

    @property
    def torsion_free(self) -> bool:
        return False

    @property
    def finite(self) -> bool:
        return False

    def label(self) -> str:
        return self.kind

    def value(self, payload) -> RingValue:
        return RingValue(self, self._canonical(payload))

    def zero(self) -> RingValue:
        return self.from_int(0)

    def one(self) -> RingValue:
        return self.from_int(1)

    def from_int(self, n: int) -> RingValue:
        return RingValue(self, self._from_int(int(n)))

    def add(self, x: RingValue, y: RingValue) -> RingValue:
        return RingValue(self, self._add(x.payload, y.payload))

    def sub(self, x: RingValue, y: RingValue) -> RingValue:
        return RingValue(self, self._add(x.payload, self._neg(y.payload)))

    def mul(self, x: RingValue, y: RingValue) -> RingValue:
        return RingValue(self, self._mul(x.payload, y.payload))

    def neg(self, x: RingValue) -> RingValue:
        return RingValue(self, self._neg(x.payload))

    def pow(self, x: RingValue, k: int) -> RingValue:
        if k < 0:
            raise ValueError("negative exponents are not supported")
        return RingValue(self, self._pow(x.payload, k))

    def equals(self, x: RingValue, y: RingValue) -> bool:
        if x.descriptor != y.descriptor:
            raise DescriptorMismatch(f"cannot compare {x.descriptor.label()} with {y.descriptor.label()}")
        return x.payload == y.payload

    def is_zero(self, x: RingValue) -> bool:
        return x.payload == self._from_int(0)

    def _pow(self, a, k: int):
        result = self._from_int(1)
        base = a
        while k:
            if k & 1:
                result = self._mul(result, base)
            k >>= 1
            if k:
                base = self._mul(base, base)
        return result

    def div_exact_by_int(self, x: RingValue, n: int) -> RingValue:
        """
        Return y with n*y = x.

        Raises:
            InvalidRing: The ring is not Z-torsion-free, so y would not be unique.
            NotDivisible: x is not n times a ring element.
        """
        if not self.torsion_free:
            raise InvalidRing(f"{self.label()} is not Z-torsion-free", ring=self.label())
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return RingValue(self, self._div_exact(x.payload, n))

    def _div_exact(self, a, n: int):
        raise InvalidRing(f"{self.label()} does not support exact division")

    def enumerate(self) -> Iterator[RingValue]:
        raise NotFinite(f"{self.label()} is not finite", ring=self.label())

    def cardinality(self) -> int:
        raise NotFinite(f"{self.label()} is not finite", ring=self.label())

    def to_fraction(self, x: RingValue) -> Fraction:
        raise InvalidRing(f"{self.label()} does not embed in the rationals", ring=self.label())

    def from_fraction(self, q: Fraction) -> RingValue:
        if q.denominator == 1:
            return self.from_int(q.numerator)
        raise NotDivisible(f"{q} is not an element of {self.label()}", value=str(q))

    def is_unit(self, x: RingValue) -> bool:
        return x.payload in (self._from_int(1), self._from_int(-1))

    def parse(self, text: str) -> RingValue:
        try:
            return self.from_int(int(text))
        except ValueError:
            raise ParseError(f"cannot read '{text}' as an element of {self.label()}")

    def format(self, payload) -> str:
        return str(payload)

    def encode(self, x: RingValue) -> Any:
        return str(x.payload)

    def decode(self, data: Any) -> RingValue:
        if isinstance(data, (int, str)):
            return self.parse(str(data))
        raise ParseError(f"cannot decode {data!r} for {self.label()}")

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Integers(RingDescriptor):
    kind = "Integers"

    @property
    def torsion_free(self) -> bool:
        return True

    def label(self) -> str:
        return "Z"

    def _canonical(self, a):
        return int(a)

    def _from_int(self, n):
        return n

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _pow(self, a, k):
        return a ** k

    def _div_exact(self, a, n):
        q, r = divmod(a, n)
        if r:
            raise NotDivisible(f"{a} is not divisible by {n} in Z", value=a, divisor=n)
        return q

    def to_fraction(self, x):
        return Fraction(x.payload)


@dataclass(frozen=True)
class Rationals(RingDescriptor):
    kind = "Rationals"

    @property
    def torsion_free(self) -> bool:
        return True

    def label(self) -> str:
        return "Q"

    def _canonical(self, a):
        return Fraction(a)

    def _from_int(self, n):
        return Fraction(n)

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _pow(self, a, k):
        return a ** k

    def _div_exact(self, a, n):
        return a / n

    def to_fraction(self, x):
        return x.payload

    def from_fraction(self, q):
        return RingValue(self, Fraction(q))

    def is_unit(self, x):
        return x.payload != 0

    def parse(self, text):
        try:
            return RingValue(self, Fraction(text.strip()))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read '{text}' as a rational")

    def encode(self, x):
        return {"num": str(x.payload.numerator), "den": str(x.payload.denominator)}

    def decode(self, data):
        if isinstance(data, dict):
            return self.from_fraction(fraction_from_json(data))
        return super().decode(data)


@dataclass(frozen=True)
class LocalIntegersAtP(RingDescriptor):
    """Z_(p): reduced fractions whose denominator is prime to p."""

    p: int = 2
    kind = "LocalIntegersAtP"

    def __post_init__(self):
        require_prime(self.p)

    @property
    def torsion_free(self) -> bool:
        return True

    def label(self) -> str:
        return f"Z_({self.p})"

    def _canonical(self, a):
        q = Fraction(a)
        if q.denominator % self.p == 0:
            raise NotDivisible(f"{q} has a denominator divisible by {self.p}", value=str(q), p=self.p)
        return q

    def _from_int(self, n):
        return Fraction(n)

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _pow(self, a, k):
        return a ** k

    def _div_exact(self, a, n):
        q = a / n
        if q.denominator % self.p == 0:
            raise NotDivisible(f"{a} is not divisible by {n} in {self.label()}", value=str(a), divisor=n)
        return q

    def to_fraction(self, x):
        return x.payload

    def from_fraction(self, q):
        return self.value(q)

    def is_unit(self, x):
        return x.payload != 0 and x.payload.numerator % self.p != 0

    def parse(self, text):
        try:
            return self.value(Fraction(text.strip()))
        except NotDivisible:
            raise
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read '{text}' as an element of {self.label()}")

    def encode(self, x):
        return {"num": str(x.payload.numerator), "den": str(x.payload.denominator)}

    def decode(self, data):
        if isinstance(data, dict):
            return self.from_fraction(fraction_from_json(data))
        return super().decode(data)

    def describe(self):
        return {"kind": self.kind, "p": self.p}


@dataclass(frozen=True)
class IntegersModM(RingDescriptor):
    m: int = 2
    kind = "IntegersModM"

    def __post_init__(self):
        if self.m < 2:
            raise InvalidRing(f"IntegersModM needs m >= 2, got {self.m}", m=self.m)

    @property
    def finite(self) -> bool:
        return True

    def label(self) -> str:
        return f"Z/{self.m}"

    def _canonical(self, a):
        return int(a) % self.m

    def _from_int(self, n):
        return n % self.m

    def _add(self, a, b):
        return (a + b) % self.m

    def _mul(self, a, b):
        return (a * b) % self.m

    def _neg(self, a):
        return (-a) % self.m

    def _pow(self, a, k):
        return pow(a, k, self.m)

    def enumerate(self):
        for v in range(self.m):
            yield RingValue(self, v)

    def cardinality(self):
        return self.m

    def from_fraction(self, q):
        if gcd(q.denominator, self.m) != 1:
            raise NotDivisible(f"{q} has no image in {self.label()}", value=str(q))
        return self.from_int(q.numerator * pow(q.denominator, -1, self.m))

    def is_unit(self, x):
        return gcd(x.payload, self.m) == 1

    def encode(self, x):
        return {"mod": str(self.m), "val": str(x.payload)}

    def decode(self, data):
        if isinstance(data, dict):
            try:
                mod, val = int(data["mod"]), int(data["val"])
            except (KeyError, TypeError, ValueError) as e:
                raise ParseError(f"cannot read {data!r} as a residue: {e}")
            if mod != self.m:
                raise DescriptorMismatch(f"residue mod {data['mod']} given for {self.label()}")
            return self.from_int(val)
        return super().decode(data)

    def describe(self):
        return {"kind": self.kind, "m": self.m}


class _PolynomialPayloads(RingDescriptor):
    """Shared encoding for rings whose payloads are sparse integer polynomials."""

    @property
    def poly_ring(self) -> PolyRing:
        return poly_ring(self.variables)

    def _from_int(self, n):
        return self._canonical(self.poly_ring(n))

    def _add(self, a, b):
        return self._canonical(a + b)

    def _mul(self, a, b):
        return self._canonical(a * b)

    def _neg(self, a):
        return self._canonical(-a)

    def _pow(self, a, k):
        return self._canonical(a ** k)

    def _div_exact(self, a, n):
        try:
            return a.exquo(a.ring(n))
        except ExactQuotientFailed:
            raise NotDivisible(f"{a.as_expr()} is not divisible by {n}", value=str(a.as_expr()), divisor=n)

    def parse(self, text):
        try:
            return self.value(self.poly_ring.from_expr(sympify(text)))
        except Exception as e:
            raise ParseError(f"cannot read '{text}' as a polynomial in {','.join(self.variables)}: {e}")

    def format(self, payload):
        return str(payload.as_expr())

    def encode(self, x):
        return [
            {"coeff": str(int(c)), "exp": list(monom)}
            for monom, c in sorted(x.payload.terms(), key=lambda t: t[0])
        ]

    def decode(self, data):
        if isinstance(data, list):
            terms = {tuple(int(e) for e in t["exp"]): int(t["coeff"]) for t in data}
            return self.value(self.poly_ring.from_dict(terms) if terms else self.poly_ring(0))
        return super().decode(data)


@dataclass(frozen=True)
class PolynomialOverZ(_PolynomialPayloads):
    variables: Tuple[str, ...] = ("x",)
    kind = "PolynomialOverZ"

    @property
    def torsion_free(self) -> bool:
        return True

    def label(self) -> str:
        return f"Z[{','.join(self.variables)}]"

    def _canonical(self, a):
        return a if isinstance(a, PolyElement) and a.ring == self.poly_ring else self.poly_ring(a)

    def is_unit(self, x):
        return x.payload in (self.poly_ring(1), self.poly_ring(-1))

    def describe(self):
        return {"kind": self.kind, "variables": list(self.variables)}


@dataclass(frozen=True)
class QuotientPolynomial(_PolynomialPayloads):
    """
    A[x]/(f) for a single monic relation f, with A = Z or A = Z/m.

    The relation is given by its integer coefficients from the leading term down,
    e.g. (1, 0, 1) for x^2 + 1. Torsion-freeness over Z is declared, not proved.
    """

    variables: Tuple[str, ...] = ("x",)
    relations: Tuple[Tuple[int, ...], ...] = ((1, 0, 1),)
    mod: Optional[int] = None
    declared_torsion_free: bool = False
    kind = "QuotientPolynomial"

    def __post_init__(self):
        if len(self.variables) != 1 or len(self.relations) != 1:
            raise InvalidRing("only single-variable quotients by one relation are supported")
        relation = self.relations[0]
        if len(relation) < 2 or relation[0] != 1:
            raise InvalidRing(f"relation {list(relation)} must be monic of degree >= 1")
        if self.mod is not None and self.mod < 2:
            raise InvalidRing(f"coefficient modulus must be >= 2, got {self.mod}")
        if self.mod is not None and self.declared_torsion_free:
            raise InvalidRing("a quotient over Z/m cannot be torsion-free")

    @property
    def torsion_free(self) -> bool:
        return self.declared_torsion_free

    @property
    def finite(self) -> bool:
        return self.mod is not None

    @property
    def degree(self) -> int:
        return len(self.relations[0]) - 1

    @property
    def relation(self) -> PolyElement:
        x = self.poly_ring.gens[0]
        coeffs = self.relations[0]
        return sum((c * x ** (self.degree - i) for i, c in enumerate(coeffs)), self.poly_ring(0))

    def label(self) -> str:
        base = "Z" if self.mod is None else f"Z/{self.mod}"
        return f"{base}[{self.variables[0]}]/({self.format(self.relation)})"

    def _canonical(self, a):
        a = a if isinstance(a, PolyElement) and a.ring == self.poly_ring else self.poly_ring(a)
        a = a.rem(self.relation)
        if self.mod is not None:
            a = self.poly_ring.from_dict({k: c % self.mod for k, c in a.items() if c % self.mod})
        return a

    def enumerate(self):
        if self.mod is None:
            return super().enumerate()
        return self._enumerate_finite()

    def _enumerate_finite(self):
        x = self.poly_ring.gens[0]
        for coeffs in itertools.product(range(self.mod), repeat=self.degree):
            payload = sum((c * x ** i for i, c in enumerate(coeffs)), self.poly_ring(0))
            yield RingValue(self, self._canonical(payload))

    def cardinality(self):
        if self.mod is None:
            return super().cardinality()
        return self.mod ** self.degree

    def _div_exact(self, a, n):
        if self.mod is not None:
            return super()._div_exact(a, n)
        return self._canonical(super()._div_exact(a, n))

    def describe(self):
        return {
            "kind": self.kind,
            "variables": list(self.variables),
            "relations": [list(r) for r in self.relations],
            "mod": self.mod,
            "torsion_free": self.declared_torsion_free,
        }


def ring_from_json(data: Dict[str, Any]) -> RingDescriptor:
    """Build a descriptor from its JSON description."""
    kind = data.get("kind")
    if kind == "Integers":
        return Integers()
    if kind == "Rationals":
        return Rationals()
    if kind == "IntegersModM":
        return IntegersModM(int(data["m"]))
    if kind == "LocalIntegersAtP":
        return LocalIntegersAtP(int(data["p"]))
    if kind == "PolynomialOverZ":
        return PolynomialOverZ(tuple(data["variables"]))
    if kind == "QuotientPolynomial":
        return QuotientPolynomial(
            variables=tuple(data["variables"]),
            relations=tuple(tuple(int(c) for c in r) for r in data["relations"]),
            mod=None if data.get("mod") is None else int(data["mod"]),
            declared_torsion_free=bool(data.get("torsion_free", False)),
        )
    raise ParseError(f"unknown ring kind {kind!r}")


def parse_ring(text: str) -> RingDescriptor:
    """
    Parse the CLI ring shorthand.

    Accepted forms: z, q, zmod:M, zp:P, poly:x,y, quot:x:1,0,1 (over Z, declared
    torsion-free) and quot:x:1,0,1:M (over Z/M).
    """
    parts = text.strip().split(":")
    head = parts[0].lower()
    try:
        if head == "z" and len(parts) == 1:
            return Integers()
        if head == "q" and len(parts) == 1:
            return Rationals()
        if head == "zmod" and len(parts) == 2:
            return IntegersModM(int(parts[1]))
        if head == "zp" and len(parts) == 2:
            return LocalIntegersAtP(int(parts[1]))
        if head == "poly" and len(parts) == 2:
            return PolynomialOverZ(tuple(v.strip() for v in parts[1].split(",")))
        if head == "quot" and len(parts) in (3, 4):
            relation = tuple(int(c) for c in parts[2].split(","))
            mod = int(parts[3]) if len(parts) == 4 else None
            return QuotientPolynomial(
                variables=(parts[1].strip(),),
                relations=(relation,),
                mod=mod,
                declared_torsion_free=mod is None,
            )
    except ValueError as e:
        raise ParseError(f"cannot parse ring '{text}': {e}")
    raise ParseError(f"unknown ring '{text}'")
