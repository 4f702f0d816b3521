# truncation.py

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Tuple

from sympy import divisors, isprime, multiplicity

from witt.errors import NotDivisorClosed, NotPrime, ParseError

logger = logging.getLogger(__name__)


def is_power_of(n: int, p: int) -> bool:
    return n == p ** multiplicity(p, n)


def require_prime(p: int) -> int:
    if not isprime(p):
        raise NotPrime(f"{p} is not a prime", p=p)
    return p


@dataclass(frozen=True)
class TruncationSet:
    """A finite divisor-closed set of positive integers, kept sorted."""

    elements: Tuple[int, ...] = ()
    _members: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.elements))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, n: object) -> bool:
        return n in self._members

    def __bool__(self) -> bool:
        return bool(self.elements)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"

    @property
    def max(self) -> int:
        return self.elements[-1] if self.elements else 0

    def index(self, n: int) -> int:
        return self.elements.index(n)

    @classmethod
    def validate(cls, raw: Iterable[int]) -> "TruncationSet":
        """
        Accept a list of positive integers if it is divisor-closed.

        Args:
            raw (Iterable[int]): Candidate elements, in any order, duplicates allowed.

        Returns:
            TruncationSet: The canonical sorted set.

        Raises:
            NotDivisorClosed: Names the first element with a missing divisor.
            ParseError: An element is not a positive integer.
        """
        try:
            values = sorted(set(int(v) for v in raw))
        except (TypeError, ValueError) as e:
            raise ParseError(f"truncation sets hold positive integers: {e}")
        if values and values[0] < 1:
            raise ParseError(f"truncation sets hold positive integers, got {values[0]}")
        members = set(values)
        for n in values:
            for d in divisors(n):
                if d not in members:
                    raise NotDivisorClosed(witness=n, missing=d)
        return cls(tuple(values))

    @classmethod
    def divisor_closure(cls, seed: Iterable[int]) -> "TruncationSet":
        closed = set()
        for n in seed:
            closed.update(divisors(int(n)))
        return cls(tuple(sorted(closed)))

    @classmethod
    def up_to(cls, n: int) -> "TruncationSet":
        return cls(tuple(range(1, n + 1)))

    def quotient(self, n: int) -> "TruncationSet":
        """S/n = {s : ns in S}."""
        members = self._members
        return TruncationSet(tuple(s for s in self.elements if s * n in members))

    def p_part(self, p: int) -> "TruncationSet":
        require_prime(p)
        return TruncationSet(tuple(s for s in self.elements if is_power_of(s, p)))

    def complement_of_multiples(self, n: int) -> "TruncationSet":
        """S minus the multiples of n; divisor-closed because divisors of a non-multiple are non-multiples."""
        return TruncationSet(tuple(s for s in self.elements if s % n != 0))

    def is_subset(self, other: "TruncationSet") -> bool:
        return self._members <= other._members

    def is_p_typical(self, p: int) -> bool:
        return all(is_power_of(s, p) for s in self.elements)

    def subsets(self) -> List["TruncationSet"]:
        """Every nonempty truncation set contained in S, smallest first."""
        found: List[Tuple[int, ...]] = [()]
        for s in self.elements:
            proper = divisors(s)[:-1]
            found += [chosen + (s,) for chosen in found if all(d in chosen for d in proper)]
        return sorted((TruncationSet(c) for c in found if c), key=lambda t: (len(t), t.elements))

    def to_json(self) -> list:
        return list(self.elements)


def parse_truncation_set(text: str) -> TruncationSet:
    """Parse '1,2,3,6' (or an empty string) and validate it."""
    text = text.strip().strip("[]{}")
    if not text:
        return TruncationSet()
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ParseError(f"cannot parse truncation set '{text}': {e}")
    return TruncationSet.validate(values)
