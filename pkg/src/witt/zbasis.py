# zbasis.py

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Tuple

from sympy import divisors

from witt.core import GhostVector, WittVector, from_ghost, ghost
from witt.errors import IndexOutsideS, InvariantViolation, WrongRing
from witt.rings import Integers
from witt.truncation import TruncationSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VBasisExpansion:
    """Integer coefficients c_n with w = sum over n in S of c_n * V_n(1)."""

    S: TruncationSet
    coeffs: Tuple[int, ...]

    def coeff(self, n: int) -> int:
        return self.coeffs[self.S.index(n)]

    def as_dict(self) -> Dict[int, int]:
        return dict(zip(self.S.elements, self.coeffs))


def _require_integers(w: WittVector):
    if not isinstance(w.ring, Integers):
        raise WrongRing(f"the V_n(1) basis exists over Z, not {w.ring.label()}", ring=w.ring.label())


def to_vbasis(w: WittVector) -> VBasisExpansion:
    """
    Expand w in the basis V_n(1) of W_S(Z).

    gh_m(V_n(1)) is n when n | m and 0 otherwise, so the ghost matrix is
    triangular with diagonal n and c_m = (g_m - sum_{n|m, n<m} n c_n) / m.
    """
    _require_integers(w)
    g = dict(zip(w.S.elements, (c.payload for c in ghost(w).components)))
    c: Dict[int, int] = {}
    for m in w.S:
        residue = g[m] - sum(n * c[n] for n in divisors(m)[:-1])
        q, r = divmod(residue, m)
        if r:
            raise InvariantViolation(f"V-basis coefficient at {m} is not an integer for {w!r}")
        c[m] = q
    return VBasisExpansion(w.S, tuple(c[m] for m in w.S))


def from_vbasis(e: VBasisExpansion) -> WittVector:
    """Evaluate sum c_n V_n(1) through its ghost components g_m = sum_{n|m} n c_n."""
    ring = Integers()
    c = e.as_dict()
    components = tuple(ring.from_int(sum(n * c[n] for n in divisors(m))) for m in e.S)
    return from_ghost(GhostVector(e.S, ring, components))


def vbasis_element(k: int, S: TruncationSet) -> WittVector:
    """V_k(1) in W_S(Z)."""
    if k not in S:
        raise IndexOutsideS(f"{k} is not in {S}", index=k, S=S.to_json())
    return from_vbasis(VBasisExpansion(S, tuple(1 if n == k else 0 for n in S)))


def vbasis_product(m: int, n: int, S: TruncationSet) -> Tuple[int, int]:
    """V_m(1) * V_n(1) = c * V_{mn/c}(1) with c = gcd(m, n)."""
    c = gcd(m, n)
    index = m * n // c
    for k in (m, n, index):
        if k not in S:
            raise IndexOutsideS(f"{k} is not in {S}", index=k, S=S.to_json())
    return c, index


def vbasis_multiply(e1: VBasisExpansion, e2: VBasisExpansion) -> VBasisExpansion:
    """Multiply two expansions with the structure constants; terms landing outside S vanish."""
    if e1.S != e2.S:
        raise IndexOutsideS(f"expansions over {e1.S} and {e2.S}")
    S = e1.S
    result = dict.fromkeys(S.elements, 0)
    for m, a in e1.as_dict().items():
        if not a:
            continue
        for n, b in e2.as_dict().items():
            if not b:
                continue
            c = gcd(m, n)
            index = m * n // c
            if index in S:
                result[index] += a * b * c
    return VBasisExpansion(S, tuple(result[k] for k in S))
