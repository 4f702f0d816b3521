# core.py

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel
from sympy import divisors

from config import WITT_ARITHMETIC, WITT_FINITE_CAP
from witt.errors import (
    DescriptorMismatch,
    InvalidRing,
    InvariantViolation,
    NotDivisible,
    NotGhostIntegral,
    NotSubset,
    ShapeMismatch,
    TooLarge,
)
from witt.polytable import evaluate, get_table
from witt.rings import Integers, LocalIntegersAtP, RingDescriptor, RingValue
from witt.truncation import TruncationSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WittVector:
    """A family (a_s) for s in S over a coefficient ring; coords follow S's order."""

    S: TruncationSet
    ring: RingDescriptor
    coords: Tuple[RingValue, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.S):
            raise ShapeMismatch(
                f"{len(self.coords)} coordinates given for truncation set {self.S}",
                S=self.S.to_json(),
            )
        for c in self.coords:
            if c.descriptor is not self.ring and c.descriptor != self.ring:
                raise DescriptorMismatch(f"coordinate over {c.descriptor.label()} in a vector over {self.ring.label()}")

    @classmethod
    def of(cls, S: TruncationSet, ring: RingDescriptor, values: Iterable) -> "WittVector":
        """Build from ints, fractions, payloads or RingValues."""
        coords = []
        for v in values:
            if isinstance(v, RingValue):
                coords.append(v)
            elif isinstance(v, int):
                coords.append(ring.from_int(v))
            else:
                coords.append(ring.value(v))
        return cls(S, ring, tuple(coords))

    def coord(self, s: int) -> RingValue:
        return self.coords[self.S.index(s)]

    def as_dict(self) -> Dict[int, RingValue]:
        return dict(zip(self.S.elements, self.coords))

    def payloads(self) -> Tuple:
        return tuple(c.payload for c in self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __add__(self, other: "WittVector") -> "WittVector":
        return add(self, other)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return sub(self, other)

    def __mul__(self, other) -> "WittVector":
        if isinstance(other, int):
            return scale_int(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self) -> "WittVector":
        return neg(self)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {c!r}" for s, c in zip(self.S.elements, self.coords))
        return f"W{self.S}({self.ring.label()})<{inner}>"


@dataclass(frozen=True)
class GhostVector:
    """Ghost components (gh_n) for n in S."""

    S: TruncationSet
    ring: RingDescriptor
    components: Tuple[RingValue, ...]

    def __post_init__(self):
        if len(self.components) != len(self.S):
            raise ShapeMismatch(f"{len(self.components)} ghost components given for {self.S}")

    @classmethod
    def of(cls, S: TruncationSet, ring: RingDescriptor, values: Iterable) -> "GhostVector":
        return cls(S, ring, WittVector.of(S, ring, values).coords)

    def component(self, n: int) -> RingValue:
        return self.components[self.S.index(n)]

    def __add__(self, other: "GhostVector") -> "GhostVector":
        _same_shape(self, other)
        return GhostVector(self.S, self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def __mul__(self, other: "GhostVector") -> "GhostVector":
        _same_shape(self, other)
        return GhostVector(self.S, self.ring, tuple(a * b for a, b in zip(self.components, other.components)))


def _same_shape(x, y):
    if x.S != y.S or x.ring != y.ring:
        raise ShapeMismatch(
            f"operands live in W_{x.S}({x.ring.label()}) and W_{y.S}({y.ring.label()})",
            left=x.S.to_json(), right=y.S.to_json(),
        )


def zero(S: TruncationSet, ring: RingDescriptor) -> WittVector:
    return WittVector(S, ring, tuple(ring.zero() for _ in S))


def one(S: TruncationSet, ring: RingDescriptor) -> WittVector:
    return teichmuller(ring.one(), S)


def teichmuller(a: RingValue, S: TruncationSet) -> WittVector:
    """[a] = (a, 0, 0, ...)."""
    ring = a.descriptor
    return WittVector(S, ring, tuple(a if s == 1 else ring.zero() for s in S))


@lru_cache(maxsize=4096)
def _integer_coords(c: int, S: TruncationSet) -> Tuple[int, ...]:
    ring = Integers()
    constant = GhostVector(S, ring, tuple(ring.from_int(c) for _ in S))
    return from_ghost(constant).payloads()


def from_int(c: int, S: TruncationSet, ring: RingDescriptor) -> WittVector:
    """Image of the integer c under Z -> W_S(Z) -> W_S(A)."""
    return WittVector(S, ring, tuple(ring.from_int(a) for a in _integer_coords(c, S)))


def embed_scalar(a: RingValue, S: TruncationSet) -> WittVector:
    """
    Image of a under the ring map A -> W_S(A) that exists for torsion-free A
    whenever the constant ghost vector (a, a, ...) is integral.
    """
    ring = a.descriptor
    if not ring.torsion_free:
        raise InvalidRing(f"no scalar embedding into W_S({ring.label()})", ring=ring.label())
    return from_ghost(GhostVector(S, ring, tuple(a for _ in S)))


def ghost(w: WittVector) -> GhostVector:
    """gh_n(a) = sum over d | n of d * a_d^(n/d)."""
    ring = w.ring
    a = dict(zip(w.S.elements, w.payloads()))
    components = []
    for n in w.S:
        acc = ring._from_int(0)
        for d in divisors(n):
            term = ring._pow(a[d], n // d)
            if d != 1:
                term = ring._mul(ring._from_int(d), term)
            acc = ring._add(acc, term)
        components.append(RingValue(ring, acc))
    return GhostVector(w.S, ring, tuple(components))


def from_ghost(g: GhostVector) -> WittVector:
    """
    Invert the ghost map by the triangular solve, in increasing n.

    Raises:
        InvalidRing: The ring is not Z-torsion-free.
        NotGhostIntegral: Some division by n is not exact, so g is not a ghost image.
    """
    ring = g.ring
    if not ring.torsion_free:
        raise InvalidRing(f"the ghost map of W_S({ring.label()}) is not injective", ring=ring.label())
    a: Dict[int, object] = {}
    coords = []
    for n, g_n in zip(g.S.elements, g.components):
        residue = g_n.payload
        for d in divisors(n)[:-1]:
            residue = ring._add(residue, ring._neg(ring._mul(ring._from_int(d), ring._pow(a[d], n // d))))
        try:
            a_n = ring.div_exact_by_int(RingValue(ring, residue), n)
        except NotDivisible:
            raise NotGhostIntegral(n)
        a[n] = a_n.payload
        coords.append(a_n)
    return WittVector(g.S, ring, tuple(coords))


def is_ghost_integral(g: GhostVector) -> bool:
    try:
        from_ghost(g)
        return True
    except NotGhostIntegral:
        return False


def _arithmetic_path(ring: RingDescriptor, path: Optional[str]) -> str:
    path = (path or WITT_ARITHMETIC).lower()
    if not ring.torsion_free:
        return "table"
    if path in ("auto", "ghost"):
        return "ghost"
    return path


def _table_values(*vectors: WittVector) -> List[Optional[object]]:
    table = get_table()
    values: List[Optional[object]] = [None] * (2 * table.limit)
    index = (table.x_index, table.y_index)
    for which, w in enumerate(vectors):
        table.check_limit(w.S.max)
        zero_payload = w.ring._from_int(0)
        for s, c in zip(w.S.elements, w.payloads()):
            values[index[which](s)] = None if c == zero_payload else c
    return values


def _binary(x: WittVector, y: WittVector, path: Optional[str], kind: str) -> WittVector:
    _same_shape(x, y)
    chosen = _arithmetic_path(x.ring, path)

    def via_ghost() -> WittVector:
        gx, gy = ghost(x), ghost(y)
        return from_ghost(gx + gy if kind == "sum" else gx * gy)

    def via_table() -> WittVector:
        table = get_table()
        poly = table.sigma if kind == "sum" else table.pi
        values = _table_values(x, y)
        return WittVector(x.S, x.ring, tuple(evaluate(poly(n), values, x.ring) for n in x.S))

    if chosen == "ghost":
        return via_ghost()
    if chosen == "table":
        return via_table()
    return _cross_checked(via_ghost, via_table, kind)


def _cross_checked(via_ghost: Callable[[], WittVector], via_table: Callable[[], WittVector], label: str) -> WittVector:
    fast, general = via_ghost(), via_table()
    if fast != general:
        raise InvariantViolation(f"ghost and table paths disagree for {label}: {fast!r} vs {general!r}")
    return fast


def add(x: WittVector, y: WittVector, path: Optional[str] = None) -> WittVector:
    return _binary(x, y, path, "sum")


def mul(x: WittVector, y: WittVector, path: Optional[str] = None) -> WittVector:
    return _binary(x, y, path, "prod")


def neg(w: WittVector, path: Optional[str] = None) -> WittVector:
    if _arithmetic_path(w.ring, path) == "ghost":
        g = ghost(w)
        return from_ghost(GhostVector(w.S, w.ring, tuple(-c for c in g.components)))
    return mul(from_int(-1, w.S, w.ring), w, path)


def sub(x: WittVector, y: WittVector, path: Optional[str] = None) -> WittVector:
    return add(x, neg(y, path), path)


def scale_int(w: WittVector, k: int, path: Optional[str] = None) -> WittVector:
    return mul(from_int(k, w.S, w.ring), w, path)


def frobenius(n: int, w: WittVector, path: Optional[str] = None) -> WittVector:
    """F_n: W_S(A) -> W_{S/n}(A), pinned by gh_m(F_n w) = gh_{nm}(w)."""
    target = w.S.quotient(n)
    chosen = _arithmetic_path(w.ring, path)

    def via_ghost() -> WittVector:
        g = ghost(w)
        return from_ghost(GhostVector(target, w.ring, tuple(g.component(n * m) for m in target)))

    def via_table() -> WittVector:
        table = get_table()
        values = _table_values(w)
        return WittVector(target, w.ring, tuple(evaluate(table.frobenius(n, m), values, w.ring) for m in target))

    if chosen == "ghost":
        return via_ghost()
    if chosen == "table":
        return via_table()
    return _cross_checked(via_ghost, via_table, f"F_{n}")


def verschiebung(n: int, w: WittVector, S: TruncationSet) -> WittVector:
    """V_n: W_{S/n}(A) -> W_S(A); coordinate ns receives a_s, all others are 0."""
    if w.S != S.quotient(n):
        raise ShapeMismatch(
            f"V_{n} into W_{S} needs a vector over {S.quotient(n)}, got one over {w.S}",
            expected=S.quotient(n).to_json(), got=w.S.to_json(),
        )
    a = w.as_dict()
    zero_value = w.ring.zero()
    return WittVector(S, w.ring, tuple(a[s // n] if s % n == 0 else zero_value for s in S))


def restrict(w: WittVector, T: TruncationSet) -> WittVector:
    """R^S_T: drop the coordinates outside T."""
    if not T.is_subset(w.S):
        raise NotSubset(f"{T} is not contained in {w.S}", T=T.to_json(), S=w.S.to_json())
    a = w.as_dict()
    return WittVector(T, w.ring, tuple(a[t] for t in T))


def extend_by_zero(w: WittVector, S: TruncationSet) -> WittVector:
    """A section of restriction: the coordinates outside w.S become 0."""
    if not w.S.is_subset(S):
        raise NotSubset(f"{w.S} is not contained in {S}", T=w.S.to_json(), S=S.to_json())
    a = w.as_dict()
    zero_value = w.ring.zero()
    return WittVector(S, w.ring, tuple(a.get(s, zero_value) for s in S))


def teichmuller_expansion(w: WittVector) -> List[Tuple[int, WittVector]]:
    """The summands V_s([a_s]) of w, one per s in S."""
    terms = []
    for s, c in zip(w.S.elements, w.coords):
        terms.append((s, verschiebung(s, teichmuller(c, w.S.quotient(s)), w.S)))
    return terms


def sum_vectors(vectors: Iterable[WittVector], S: TruncationSet, ring: RingDescriptor,
                path: Optional[str] = None) -> WittVector:
    total = zero(S, ring)
    for v in vectors:
        total = add(total, v, path)
    return total


def change_ring(w: WittVector, ring: RingDescriptor) -> WittVector:
    """Coordinatewise image under a ring map determined by integer/fraction coercion."""
    if ring.torsion_free and w.ring.torsion_free:
        return WittVector(w.S, ring, tuple(ring.from_fraction(w.ring.to_fraction(c)) for c in w.coords))
    return WittVector(w.S, ring, tuple(ring.from_int(c.payload) for c in w.coords))


def localize(w: WittVector, p: int) -> WittVector:
    """W_S(Z) -> W_S(Z_(p)) is the coordinatewise inclusion."""
    return change_ring(w, LocalIntegersAtP(p))


def enumerate_vectors(ring: RingDescriptor, S: TruncationSet, cap: int = WITT_FINITE_CAP) -> Iterable[WittVector]:
    """Every element of W_S(A) for finite A, in lexicographic coordinate order."""
    size = ring.cardinality() ** len(S)
    if size > cap:
        raise TooLarge(f"|W_{S}({ring.label()})| = {size} exceeds the cap {cap}", size=size, cap=cap)
    elements = list(ring.enumerate())
    for coords in itertools.product(elements, repeat=len(S)):
        yield WittVector(S, ring, tuple(coords))


class ExactSequenceReport(BaseModel):
    ring: str
    S: List[int]
    n: int
    T: List[int]
    quotient: List[int]
    card_source: int
    card_middle: int
    card_target: int
    card_image: int
    card_kernel: int
    injective: bool
    surjective: bool
    image_equals_kernel: bool
    exact: bool
    passed: bool
    counterexample: Optional[Dict[str, List[str]]] = None


def exact_sequence_check(ring: RingDescriptor, S: TruncationSet, n: int,
                         cap: int = WITT_FINITE_CAP) -> ExactSequenceReport:
    """
    Check 0 -> W_{S/n}(A) -V_n-> W_S(A) -R-> W_T(A) -> 0 by full enumeration,
    with T = S minus the multiples of n.

    Raises:
        NotFinite: A is not finite.
        TooLarge: |W_S(A)| exceeds the cap.
    """
    T = S.complement_of_multiples(n)
    source_set = S.quotient(n)
    logger.info(f"Checking exactness over {ring.label()} for S={S}, n={n}, T={T}")

    counterexample = None
    image = {}
    for w in enumerate_vectors(ring, source_set, cap):
        v = verschiebung(n, w, S)
        key = v.payloads()
        if key in image and counterexample is None:
            counterexample = {"kind": ["V_n not injective"], "vector": [str(x) for x in w.payloads()]}
        image[key] = w

    kernel = set()
    hit = set()
    zero_target = zero(T, ring).payloads()
    card_middle = 0
    for w in enumerate_vectors(ring, S, cap):
        card_middle += 1
        r = restrict(w, T).payloads()
        hit.add(r)
        if r == zero_target:
            kernel.add(w.payloads())

    card_source = ring.cardinality() ** len(source_set)
    card_target = ring.cardinality() ** len(T)
    injective = len(image) == card_source
    surjective = len(hit) == card_target
    image_keys = set(image)
    image_equals_kernel = image_keys == kernel
    if not image_equals_kernel and counterexample is None:
        witness = next(iter(image_keys.symmetric_difference(kernel)))
        counterexample = {"kind": ["image differs from kernel"], "vector": [str(x) for x in witness]}

    exact = injective and surjective and image_equals_kernel
    report = ExactSequenceReport(
        ring=ring.label(), S=S.to_json(), n=n, T=T.to_json(), quotient=source_set.to_json(),
        card_source=card_source, card_middle=card_middle, card_target=card_target,
        card_image=len(image), card_kernel=len(kernel),
        injective=injective, surjective=surjective, image_equals_kernel=image_equals_kernel,
        exact=exact, passed=exact,
        counterexample=counterexample,
    )
    logger.debug(f"Exact sequence report: {report}")
    return report
