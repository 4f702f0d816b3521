# finite.py

import itertools
import logging
import random
from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel
from sympy import factorint

from config import WITT_FINITE_CAP, WITT_SEED
from witt.core import WittVector, add, enumerate_vectors, mul, one, scale_int, verschiebung, zero
from witt.errors import InvalidRing, ShapeMismatch
from witt.rings import IntegersModM, RingDescriptor
from witt.truncation import TruncationSet, require_prime

logger = logging.getLogger(__name__)

Ideal = FrozenSet[int]


class FiniteRingTable:
    """
    W_S(A) for finite A as an indexed list of elements.

    Sums and products are computed on demand through the universal polynomials
    and memoized by index pair; `build_tables` fills both tables completely.
    """

    def __init__(self, ring: RingDescriptor, S: TruncationSet, elements: List[WittVector]):
        self.ring = ring
        self.S = S
        self.elements = elements
        self._index = {w.payloads(): i for i, w in enumerate(elements)}
        self.zero = self.index_of(zero(S, ring))
        self.one = self.index_of(one(S, ring))
        self._add: Dict[Tuple[int, int], int] = {}
        self._mul: Dict[Tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, w: WittVector) -> int:
        return self._index[w.payloads()]

    def add(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._add:
            self._add[key] = self.index_of(add(self.elements[i], self.elements[j]))
        return self._add[key]

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._mul:
            self._mul[key] = self.index_of(mul(self.elements[i], self.elements[j]))
        return self._mul[key]

    def build_tables(self):
        size = len(self)
        for i in range(size):
            for j in range(size):
                self.add(i, j)
                self.mul(i, j)
        logger.debug(f"Built {size}x{size} operation tables for W_{self.S}({self.ring.label()})")

    def is_unit(self, i: int) -> bool:
        return any(self.mul(i, j) == self.one for j in range(len(self)))

    def principal_ideal(self, i: int) -> Ideal:
        return frozenset(self.mul(r, i) for r in range(len(self)))

    def ideal_sum(self, a: Ideal, b: Ideal) -> Ideal:
        return frozenset(self.add(x, y) for x in a for y in b)

    def check_axioms(self, sample: Optional[int] = None, seed: int = WITT_SEED) -> List[str]:
        """
        Commutativity, associativity, distributivity and the identities.

        Every triple is checked when sample is None, otherwise `sample` random
        triples drawn with `seed`. Returns the failures found.
        """
        size = len(self)
        if sample is None:
            triples = itertools.product(range(size), repeat=3)
        else:
            rng = random.Random(seed)
            triples = [tuple(rng.randrange(size) for _ in range(3)) for _ in range(sample)]

        failures = []
        for a in range(size):
            if self.add(a, self.zero) != a or self.mul(a, self.one) != a:
                failures.append(f"identity fails at {self.elements[a]!r}")
        for a, b, c in triples:
            if self.add(a, b) != self.add(b, a) or self.mul(a, b) != self.mul(b, a):
                failures.append(f"not commutative at {a},{b}")
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)):
                failures.append(f"addition not associative at {a},{b},{c}")
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                failures.append(f"multiplication not associative at {a},{b},{c}")
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)):
                failures.append(f"not distributive at {a},{b},{c}")
        return failures


def materialize(ring: RingDescriptor, S: TruncationSet, cap: int = WITT_FINITE_CAP) -> FiniteRingTable:
    """
    Enumerate W_S(A) for a finite ring A.

    Raises:
        NotFinite: A is not finite.
        TooLarge: |A|^|S| exceeds the cap.
    """
    elements = list(enumerate_vectors(ring, S, cap))
    logger.info(f"Materialized W_{S}({ring.label()}) with {len(elements)} elements")
    return FiniteRingTable(ring, S, elements)


def maximal_ideals(table: FiniteRingTable) -> List[Ideal]:
    """
    Every maximal ideal, in order of first discovery.

    Each ideal is grown greedily from a principal ideal (x) by adding
    generators while it stays proper. A maximal ideal m always contains an x
    lying in no other maximal ideal, and every proper ideal grown from such an
    x ends in m, so skipping x already covered by a found ideal loses nothing.
    """
    found: List[Ideal] = []
    size = len(table)
    for x in range(size):
        if any(x in m for m in found) or table.is_unit(x):
            continue
        ideal = table.principal_ideal(x)
        for y in range(size):
            if y in ideal:
                continue
            grown = table.ideal_sum(ideal, table.principal_ideal(y))
            if table.one not in grown:
                ideal = grown
        if ideal not in found:
            found.append(ideal)
    logger.debug(f"Found {len(found)} maximal ideals in W_{table.S}({table.ring.label()})")
    return found


class IdealReport(BaseModel):
    elements: List[List[str]]
    size: int
    quotient_size: int


class MaximalIdealReport(BaseModel):
    ring: str
    S: List[int]
    elements: int
    maximal_ideals: List[IdealReport]
    predicted_count: Optional[int] = None
    passed: bool = True
    failures: List[str] = []


def ideal_report(table: FiniteRingTable, ideal: Ideal) -> IdealReport:
    return IdealReport(
        elements=[[str(c) for c in table.elements[i].payloads()] for i in sorted(ideal)],
        size=len(ideal),
        quotient_size=len(table) // len(ideal),
    )


def predicted_maximal_ideal_count(S: TruncationSet, p: int) -> int:
    """
    W_S(F_p) splits over the n in S prime to p into p-typical factors, and
    each p-typical factor over F_p is local.
    """
    require_prime(p)
    return sum(1 for n in S if n % p)


def maximal_ideal_report(ring: RingDescriptor, S: TruncationSet, cap: int = WITT_FINITE_CAP) -> MaximalIdealReport:
    table = materialize(ring, S, cap)
    ideals = maximal_ideals(table)
    predicted = None
    if isinstance(ring, IntegersModM):
        predicted = sum(predicted_maximal_ideal_count(S, p) for p in factorint(ring.m))
    failures = []
    if predicted is not None and predicted != len(ideals):
        failures.append(f"found {len(ideals)} maximal ideals, the decomposition predicts {predicted}")
    return MaximalIdealReport(
        ring=ring.label(),
        S=S.to_json(),
        elements=len(table),
        maximal_ideals=[ideal_report(table, m) for m in ideals],
        predicted_count=predicted,
        passed=not failures,
        failures=failures,
    )


class LemmaReport(BaseModel):
    lemma: str
    ring: str
    S: List[int]
    elements: int
    maximal_ideal_count: int
    expected_count: int
    passed: bool
    failures: List[str] = []


def verify_maximal_ideal_lemma(p: int, S: TruncationSet, j: int = 1, cap: int = WITT_FINITE_CAP) -> LemmaReport:
    """
    Over R = Z/p^j with S p-typical, the only maximal ideal of W_S(R) is the
    kernel of W_S(R) -> R -> R/p, i.e. the vectors whose first coordinate is
    divisible by p. Also checks V_p(x)^2 = p V_p(x^2) for every x in W_{S/p}(R).
    """
    require_prime(p)
    if not S.is_p_typical(p):
        raise ShapeMismatch(f"{S} is not {p}-typical", S=S.to_json(), p=p)
    if j < 1:
        raise InvalidRing(f"exponent must be >= 1, got {j}", j=j)
    ring = IntegersModM(p ** j)
    table = materialize(ring, S, cap)
    ideals = maximal_ideals(table)

    expected = frozenset(i for i, w in enumerate(table.elements) if w.coord(1).payload % p == 0)
    failures = []
    for m in ideals:
        if m != expected:
            failures.append(f"maximal ideal of size {len(m)} differs from the kernel of reduction mod {p}")
    if len(ideals) != 1:
        failures.append(f"expected exactly one maximal ideal, found {len(ideals)}")

    quotient = S.quotient(p)
    if quotient:
        for x in enumerate_vectors(ring, quotient, cap):
            vx = verschiebung(p, x, S)
            if mul(vx, vx) != scale_int(verschiebung(p, mul(x, x), S), p):
                failures.append(f"V_{p}(x)^2 != {p} V_{p}(x^2) for x = {x!r}")

    logger.info(f"Maximal ideal lemma over {ring.label()}, S={S}: {len(failures)} failures")
    return LemmaReport(
        lemma="maximal-ideal",
        ring=ring.label(),
        S=S.to_json(),
        elements=len(table),
        maximal_ideal_count=len(ideals),
        expected_count=1,
        passed=not failures,
        failures=failures,
    )


def verify_points_lemma(m: int, S: TruncationSet, cap: int = WITT_FINITE_CAP) -> LemmaReport:
    """
    Over R = Z/m, every maximal ideal of W_S(R) contains the kernel of
    W_S(Z/m) -> W_S(Z/p^v) for some prime power p^v exactly dividing m.
    """
    ring = IntegersModM(m)
    table = materialize(ring, S, cap)
    ideals = maximal_ideals(table)
    factors = factorint(m)
    kernels = {
        p: frozenset(
            i for i, w in enumerate(table.elements)
            if all(c % p ** v == 0 for c in w.payloads())
        )
        for p, v in factors.items()
    }

    failures = []
    for ideal in ideals:
        if not any(kernel <= ideal for kernel in kernels.values()):
            failures.append(f"a maximal ideal of size {len(ideal)} contains no prime-power kernel")
    expected = sum(predicted_maximal_ideal_count(S, p) for p in factors)
    if expected != len(ideals):
        failures.append(f"found {len(ideals)} maximal ideals, expected {expected}")

    logger.info(f"Points lemma over {ring.label()}, S={S}: {len(failures)} failures")
    return LemmaReport(
        lemma="points",
        ring=ring.label(),
        S=S.to_json(),
        elements=len(table),
        maximal_ideal_count=len(ideals),
        expected_count=expected,
        passed=not failures,
        failures=failures,
    )

