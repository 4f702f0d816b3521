# polytable.py

import logging
import threading
from typing import Dict, Hashable, Optional, Sequence, Tuple

from sympy import divisors
from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from config import WITT_MAX_N
from witt.errors import InvariantViolation, TableLimitExceeded
from witt.rings import RingDescriptor, RingValue

logger = logging.getLogger(__name__)


class UniversalPolyTable:
    """
    Integer polynomials computing Witt sums, products and Frobenius coordinatewise.

    For each n the sum polynomial sigma_n and product polynomial pi_n live in
    Z[x_d, y_d : d | n]; the Frobenius polynomial f_{r,m} gives coordinate m of
    F_r and lives in Z[x_d : d | rm]. Entries are built lazily by the ghost
    recursion a_n = (g_n - sum_{d|n, d<n} d * a_d^(n/d)) / n, and every division
    must be exact.

    The cache is append-only. Reads of finished entries take no lock; building
    an entry holds a per-entry lock so each polynomial is computed once.
    """

    def __init__(self, limit: int = WITT_MAX_N):
        self.limit = limit
        names = [f"x{d}" for d in range(1, limit + 1)] + [f"y{d}" for d in range(1, limit + 1)]
        self.ring = PolyRing(",".join(names), ZZ)
        self._entries: Dict[Hashable, PolyElement] = {}
        self._powers: Dict[Tuple[Hashable, int], PolyElement] = {}
        self._locks: Dict[Hashable, threading.Lock] = {}
        self._guard = threading.Lock()

    def x(self, d: int) -> PolyElement:
        return self.ring.gens[d - 1]

    def y(self, d: int) -> PolyElement:
        return self.ring.gens[self.limit + d - 1]

    def x_index(self, d: int) -> int:
        return d - 1

    def y_index(self, d: int) -> int:
        return self.limit + d - 1

    def check_limit(self, n: int):
        """
        Raises:
            TableLimitExceeded: n is past the largest index the table holds.
        """
        if n > self.limit:
            raise TableLimitExceeded(
                f"universal polynomials for n={n} exceed WITT_MAX_N={self.limit}",
                n=n, limit=self.limit,
            )

    def ghost_x(self, n: int) -> PolyElement:
        return sum((d * self.x(d) ** (n // d) for d in divisors(n)), self.ring.zero)

    def ghost_y(self, n: int) -> PolyElement:
        return sum((d * self.y(d) ** (n // d) for d in divisors(n)), self.ring.zero)

    def sigma(self, n: int) -> PolyElement:
        return self._get(("sum", n))

    def pi(self, n: int) -> PolyElement:
        return self._get(("prod", n))

    def frobenius(self, r: int, m: int) -> PolyElement:
        return self._get(("frob", r, m))

    def build(self, n: int) -> Dict[str, PolyElement]:
        """Build (or fetch) sigma_n and pi_n, plus their lower-index dependencies."""
        return {"sigma": self.sigma(n), "pi": self.pi(n)}

    def _get(self, key: Tuple) -> PolyElement:
        entry = self._entries.get(key)
        if entry is not None:
            return entry
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            entry = self._entries.get(key)
            if entry is None:
                entry = self._build_entry(key)
                self._entries[key] = entry
        return entry

    def _build_entry(self, key: Tuple) -> PolyElement:
        kind = key[0]
        if kind == "frob":
            _, r, m = key
            self.check_limit(r * m)
            target = self.ghost_x(r * m)
            lower = lambda d: self.frobenius(r, d)
            n = m
        else:
            n = key[1]
            self.check_limit(n)
            if kind == "sum":
                target = self.ghost_x(n) + self.ghost_y(n)
                lower = self.sigma
            else:
                target = self.ghost_x(n) * self.ghost_y(n)
                lower = self.pi

        residue = target
        for d in divisors(n)[:-1]:
            residue -= d * self._power((kind,) + key[1:-1] + (d,), lower(d), n // d)
        try:
            entry = residue.exquo(self.ring(n))
        except ExactQuotientFailed:
            raise InvariantViolation(f"universal polynomial {key} has a non-integral coefficient")
        logger.debug(f"Built universal polynomial {key} with {len(entry)} terms")
        return entry

    def _power(self, key: Tuple, base: PolyElement, k: int) -> PolyElement:
        cached = self._powers.get((key, k))
        if cached is None:
            cached = base ** k
            self._powers[(key, k)] = cached
        return cached

    def stats(self) -> Dict[str, int]:
        return {"entries": len(self._entries), "powers": len(self._powers), "limit": self.limit}


def evaluate(poly: PolyElement, values: Sequence[Optional[object]], ring: RingDescriptor) -> RingValue:
    """
    Evaluate an integer polynomial at ring payloads.

    Args:
        poly (PolyElement): Polynomial in the table's ring.
        values (Sequence): Payload for each generator index; None marks a zero value.
        ring (RingDescriptor): Ring whose payload arithmetic is used.

    Returns:
        RingValue: The value, in canonical form.
    """
    acc = ring._from_int(0)
    powers: Dict[Tuple[int, int], object] = {}
    for monom, coeff in poly.items():
        term = ring._from_int(int(coeff))
        for i, e in enumerate(monom):
            if not e:
                continue
            v = values[i]
            if v is None:
                term = None
                break
            pw = powers.get((i, e))
            if pw is None:
                pw = powers[(i, e)] = ring._pow(v, e)
            term = ring._mul(term, pw)
        if term is not None:
            acc = ring._add(acc, term)
    return RingValue(ring, acc)


_table: Optional[UniversalPolyTable] = None
_table_guard = threading.Lock()


def get_table() -> UniversalPolyTable:
    """The process-wide table, sized by WITT_MAX_N."""
    global _table
    if _table is None:
        with _table_guard:
            if _table is None:
                _table = UniversalPolyTable(WITT_MAX_N)
    return _table


def build_table(n: int) -> Dict[str, PolyElement]:
    return get_table().build(n)


def table_stats() -> Dict[str, int]:
    return get_table().stats()
