# epsilon.py

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional

from pydantic import BaseModel
from sympy import primerange

from witt.core import (
    WittVector,
    add,
    embed_scalar,
    extend_by_zero,
    frobenius,
    mul,
    one,
    restrict,
    sub,
    verschiebung,
    zero,
)
from witt.errors import InvariantViolation, NotCoprime, ShapeMismatch, WrongRing
from witt.rings import LocalIntegersAtP, Rationals, RingDescriptor
from witt.truncation import TruncationSet, require_prime

logger = logging.getLogger(__name__)


def check_local_ring(ring: Optional[RingDescriptor], p: int) -> RingDescriptor:
    """The idempotents need every prime other than p inverted: Z_(p) itself or Q."""
    require_prime(p)
    if ring is None:
        return LocalIntegersAtP(p)
    if isinstance(ring, Rationals) or (isinstance(ring, LocalIntegersAtP) and ring.p == p):
        return ring
    raise WrongRing(f"{ring.label()} is not a Z_({p})-algebra", ring=ring.label(), p=p)


def _require_coprime(n: int, p: int):
    if gcd(n, p) != 1:
        raise NotCoprime(f"{n} is not coprime to {p}", n=n, p=p)


def _scaled(w: WittVector, q: Fraction) -> WittVector:
    return mul(embed_scalar(w.ring.from_fraction(q), w.S), w)


def coprime_indices(S: TruncationSet, p: int) -> List[int]:
    """The n with (n, p) = 1 and S/n nonempty, i.e. the n in S prime to p."""
    return [n for n in S if gcd(n, p) == 1]


def epsilon_one(S: TruncationSet, p: int, ring: Optional[RingDescriptor] = None) -> WittVector:
    """Product of (1 - (1/l) V_l(1)) over the primes l != p with S/l nonempty."""
    ring = check_local_ring(ring, p)
    unit = one(S, ring)
    result = unit
    for ell in primerange(2, S.max + 1):
        if ell == p or ell not in S:
            continue
        v_ell = verschiebung(ell, one(S.quotient(ell), ring), S)
        result = mul(result, sub(unit, _scaled(v_ell, Fraction(1, ell))))
    return result


def epsilon(n: int, S: TruncationSet, p: int, ring: Optional[RingDescriptor] = None) -> WittVector:
    """
    The idempotent eps_{n,S} = (1/n) V_n(eps_{1,S/n}); zero when S/n is empty.

    Raises:
        NotCoprime: (n, p) != 1.
        WrongRing: The ring is not a Z_(p)-algebra.
    """
    ring = check_local_ring(ring, p)
    _require_coprime(n, p)
    quotient = S.quotient(n)
    if not quotient:
        return zero(S, ring)
    return _scaled(verschiebung(n, epsilon_one(quotient, p, ring), S), Fraction(1, n))


@dataclass(frozen=True)
class EpsilonFamily:
    S: TruncationSet
    p: int
    ring: RingDescriptor
    idempotents: Dict[int, WittVector] = field(hash=False)


def epsilon_family(S: TruncationSet, p: int, ring: Optional[RingDescriptor] = None) -> EpsilonFamily:
    ring = check_local_ring(ring, p)
    return EpsilonFamily(S, p, ring, {n: epsilon(n, S, p, ring) for n in coprime_indices(S, p)})


class FamilyReport(BaseModel):
    S: List[int]
    p: int
    indices: List[int]
    idempotent: bool
    orthogonal: bool
    sums_to_one: bool
    failures: List[str]


def check_family(family: EpsilonFamily) -> FamilyReport:
    """eps_n^2 = eps_n, eps_n eps_n' = 0 for n != n', and the eps_n sum to 1."""
    failures = []
    items = sorted(family.idempotents.items())
    for n, e in items:
        if mul(e, e) != e:
            failures.append(f"eps_{n} is not idempotent")
    for i, (n, e) in enumerate(items):
        for n2, e2 in items[i + 1:]:
            if not mul(e, e2).is_zero():
                failures.append(f"eps_{n} * eps_{n2} != 0")
    total = zero(family.S, family.ring)
    for _, e in items:
        total = add(total, e)
    sums_to_one = total == one(family.S, family.ring)
    if not sums_to_one:
        failures.append("the idempotents do not sum to 1")
    return FamilyReport(
        S=family.S.to_json(),
        p=family.p,
        indices=[n for n, _ in items],
        idempotent=not any("idempotent" in f for f in failures),
        orthogonal=not any("!= 0" in f for f in failures),
        sums_to_one=sums_to_one,
        failures=failures,
    )


def frobenius_of_epsilon(m: int, n: int, S: TruncationSet, p: int,
                         ring: Optional[RingDescriptor] = None) -> WittVector:
    """
    F_m(eps_n), checked against eps_{n/m} over S/m when m | n and against 0 otherwise.

    Raises:
        InvariantViolation: The computed value disagrees with the case rule.
    """
    ring = check_local_ring(ring, p)
    _require_coprime(m, p)
    _require_coprime(n, p)
    value = frobenius(m, epsilon(n, S, p, ring))
    quotient = S.quotient(m)
    expected = epsilon(n // m, quotient, p, ring) if n % m == 0 else zero(quotient, ring)
    if value != expected:
        raise InvariantViolation(f"F_{m}(eps_{n}) over {S} is {value!r}, expected {expected!r}")
    return value


def decompose(w: WittVector, p: int) -> Dict[int, WittVector]:
    """Component n is R^{S/n}_{(S/n)_p}(F_n(w)), for every n in S prime to p."""
    check_local_ring(w.ring, p)
    components = {}
    for n in coprime_indices(w.S, p):
        quotient = w.S.quotient(n)
        components[n] = restrict(frobenius(n, w), quotient.p_part(p))
    return components


def reassemble(components: Dict[int, WittVector], S: TruncationSet, p: int,
               ring: Optional[RingDescriptor] = None) -> WittVector:
    """
    Inverse of decompose: w = sum over n of (1/n) V_n(eps_{1,S/n} * c_n), where
    c_n is extended by zero from (S/n)_p to S/n.

    Raises:
        ShapeMismatch: A component is missing or lives over the wrong set.
    """
    if ring is None and components:
        ring = next(iter(components.values())).ring
    ring = check_local_ring(ring, p)
    indices = coprime_indices(S, p)
    if set(components) != set(indices):
        raise ShapeMismatch(
            f"components {sorted(components)} do not match the indices {indices}",
            expected=indices, got=sorted(components),
        )
    total = zero(S, ring)
    for n in indices:
        quotient = S.quotient(n)
        c = components[n]
        if c.S != quotient.p_part(p):
            raise ShapeMismatch(
                f"component {n} lives over {c.S}, expected {quotient.p_part(p)}",
                expected=quotient.p_part(p).to_json(), got=c.S.to_json(),
            )
        lifted = mul(epsilon_one(quotient, p, ring), extend_by_zero(c, quotient))
        total = add(total, _scaled(verschiebung(n, lifted, S), Fraction(1, n)))
    return total
