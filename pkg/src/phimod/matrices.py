# matrices.py

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from witt.core import GhostVector, WittVector, extend_by_zero, from_ghost, ghost
from witt.errors import InvalidRing, NotDivisible, NotGhostIntegral, NotSubset, ShapeMismatch
from witt.rings import RingDescriptor
from witt.truncation import TruncationSet

logger = logging.getLogger(__name__)


def _qq(q: Fraction):
    return QQ(q.numerator, q.denominator)


def _fraction(e) -> Fraction:
    return Fraction(int(e.numerator), int(e.denominator))


def ghost_fractions(w: WittVector) -> List[Fraction]:
    return [w.ring.to_fraction(c) for c in ghost(w).components]


def witt_from_fractions(S: TruncationSet, ring: RingDescriptor, values: Sequence[Fraction]) -> WittVector:
    """
    The Witt vector with the given rational ghost components.

    Raises:
        NotGhostIntegral: Some component is outside R or the solve is not integral.
    """
    components = []
    for k, q in zip(S.elements, values):
        try:
            components.append(ring.from_fraction(q))
        except NotDivisible:
            raise NotGhostIntegral(k, f"ghost component {q} at index {k} is not in {ring.label()}")
    return from_ghost(GhostVector(S, ring, tuple(components)))


@dataclass(frozen=True, eq=False)
class WittMatrix:
    """
    A rows x cols matrix over W_S(R) for Z-torsion-free R.

    Held as one rational matrix per ghost index k in S, so products, F_n, V_n
    and restriction act blockwise. Witt coordinates are recovered on demand by
    the ghost solve.
    """

    S: TruncationSet
    ring: RingDescriptor
    shape: Tuple[int, int]
    blocks: Tuple[DomainMatrix, ...]

    def __post_init__(self):
        if not self.ring.torsion_free:
            raise InvalidRing(f"matrices over W_S({self.ring.label()}) need a torsion-free ring", ring=self.ring.label())
        if len(self.blocks) != len(self.S):
            raise ShapeMismatch(f"{len(self.blocks)} ghost blocks for {self.S}")
        # eye and zeros come back sparse; equality is only meaningful between dense blocks
        object.__setattr__(self, "blocks", tuple(b.to_dense() for b in self.blocks))

    @classmethod
    def from_entries(cls, S: TruncationSet, ring: RingDescriptor, rows: Sequence[Sequence[WittVector]]) -> "WittMatrix":
        shape = (len(rows), len(rows[0]) if rows else 0)
        ghosts = [[ghost_fractions(w) for w in row] for row in rows]
        for row in rows:
            for w in row:
                if w.S != S:
                    raise ShapeMismatch(f"entry over {w.S} in a matrix over {S}", expected=S.to_json(), got=w.S.to_json())
        blocks = tuple(
            DomainMatrix([[_qq(g[k]) for g in row] for row in ghosts], shape, QQ)
            for k in range(len(S))
        )
        return cls(S, ring, shape, blocks)

    @classmethod
    def from_ints(cls, S: TruncationSet, ring: RingDescriptor, rows: Sequence[Sequence[int]]) -> "WittMatrix":
        """Integer entries; the ghost vector of an integer c is (c, c, ...)."""
        shape = (len(rows), len(rows[0]) if rows else 0)
        block = DomainMatrix([[QQ(int(c)) for c in row] for row in rows], shape, QQ)
        return cls(S, ring, shape, tuple(block for _ in S))

    @classmethod
    def identity(cls, r: int, S: TruncationSet, ring: RingDescriptor) -> "WittMatrix":
        return cls(S, ring, (r, r), tuple(DomainMatrix.eye(r, QQ) for _ in S))

    @classmethod
    def zeros(cls, shape: Tuple[int, int], S: TruncationSet, ring: RingDescriptor) -> "WittMatrix":
        return cls(S, ring, shape, tuple(DomainMatrix.zeros(shape, QQ) for _ in S))

    @classmethod
    def diagonal(cls, values: Sequence[WittVector]) -> "WittMatrix":
        S, ring = values[0].S, values[0].ring
        zero = WittVector.of(S, ring, [0] * len(S))
        rows = [[values[i] if i == j else zero for j in range(len(values))] for i in range(len(values))]
        return cls.from_entries(S, ring, rows)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def block(self, k: int) -> DomainMatrix:
        return self.blocks[self.S.index(k)]

    def _like(self, blocks, shape=None, S=None) -> "WittMatrix":
        return WittMatrix(S if S is not None else self.S, self.ring, shape or self.shape, tuple(blocks))

    def _check(self, other: "WittMatrix"):
        if self.S != other.S or self.ring != other.ring:
            raise ShapeMismatch(
                f"matrices over W_{self.S}({self.ring.label()}) and W_{other.S}({other.ring.label()})",
                left=self.S.to_json(), right=other.S.to_json(),
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittMatrix):
            return NotImplemented
        return (self.S == other.S and self.ring == other.ring and self.shape == other.shape
                and all(a == b for a, b in zip(self.blocks, other.blocks)))

    __hash__ = None

    def __add__(self, other: "WittMatrix") -> "WittMatrix":
        self._check(other)
        return self._like(a + b for a, b in zip(self.blocks, other.blocks))

    def __sub__(self, other: "WittMatrix") -> "WittMatrix":
        self._check(other)
        return self._like(a - b for a, b in zip(self.blocks, other.blocks))

    def __neg__(self) -> "WittMatrix":
        return self._like(-a for a in self.blocks)

    def __matmul__(self, other: "WittMatrix") -> "WittMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return self._like((a * b for a, b in zip(self.blocks, other.blocks)), (self.rows, other.cols))

    def scale_int(self, k: int) -> "WittMatrix":
        return self._like(a * QQ(int(k)) for a in self.blocks)

    def scale_fraction(self, q: Fraction) -> "WittMatrix":
        """Multiply ghost components by q; the result may leave W_S(R) and is checked on conversion."""
        return self._like(a * _qq(q) for a in self.blocks)

    def scale_witt(self, w: WittVector) -> "WittMatrix":
        """lambda * M for lambda in W_S(R)."""
        if w.S != self.S:
            raise ShapeMismatch(f"scalar over {w.S} for a matrix over {self.S}")
        return self._like(a * _qq(g) for a, g in zip(self.blocks, ghost_fractions(w)))

    def is_zero(self) -> bool:
        return all(a.is_zero_matrix for a in self.blocks)

    def frobenius(self, n: int) -> "WittMatrix":
        """F_n entrywise: gh_m(F_n w) = gh_{nm}(w) for m in S/n."""
        target = self.S.quotient(n)
        return self._like((self.block(n * m) for m in target), S=target)

    def verschiebung(self, n: int, S: TruncationSet) -> "WittMatrix":
        """V_n entrywise into W_S: gh_k(V_n w) is n gh_{k/n}(w) when n | k and 0 otherwise."""
        if self.S != S.quotient(n):
            raise ShapeMismatch(
                f"V_{n} into W_{S} needs a matrix over {S.quotient(n)}, got one over {self.S}",
                expected=S.quotient(n).to_json(), got=self.S.to_json(),
            )
        zero = DomainMatrix.zeros(self.shape, QQ)
        return self._like((self.block(k // n) * QQ(n) if k % n == 0 else zero for k in S), S=S)

    def restrict(self, T: TruncationSet) -> "WittMatrix":
        if not T.is_subset(self.S):
            raise NotSubset(f"{T} is not contained in {self.S}", T=T.to_json(), S=self.S.to_json())
        return self._like((self.block(k) for k in T), S=T)

    def transpose(self) -> "WittMatrix":
        return self._like((a.transpose() for a in self.blocks), (self.cols, self.rows))

    def kron(self, other: "WittMatrix") -> "WittMatrix":
        """Kronecker product with self's index as the major one."""
        self._check(other)
        shape = (self.rows * other.rows, self.cols * other.cols)
        blocks = []
        for a, b in zip(self.blocks, other.blocks):
            la, lb = a.to_list(), b.to_list()
            rows = [
                [la[i][j] * lb[k][l] for j in range(self.cols) for l in range(other.cols)]
                for i in range(self.rows) for k in range(other.rows)
            ]
            blocks.append(DomainMatrix(rows, shape, QQ))
        return self._like(blocks, shape)

    def block_diag(self, other: "WittMatrix") -> "WittMatrix":
        self._check(other)
        shape = (self.rows + other.rows, self.cols + other.cols)
        blocks = []
        for a, b in zip(self.blocks, other.blocks):
            la, lb = a.to_list(), b.to_list()
            rows = [row + [QQ(0)] * other.cols for row in la] + [[QQ(0)] * self.cols + row for row in lb]
            blocks.append(DomainMatrix(rows, shape, QQ))
        return self._like(blocks, shape)

    def vec(self) -> "WittMatrix":
        """Column-major vectorization into a (rows * cols) x 1 column."""
        blocks = []
        for a in self.blocks:
            rows = a.to_list()
            blocks.append(DomainMatrix([[rows[i][j]] for j in range(self.cols) for i in range(self.rows)],
                                       (self.rows * self.cols, 1), QQ))
        return self._like(blocks, (self.rows * self.cols, 1))

    def extend_by_zero(self, S: TruncationSet) -> "WittMatrix":
        """Entrywise extension by zero Witt coordinates; not blockwise in ghost space."""
        if self.rows == 0 or self.cols == 0:
            return WittMatrix.zeros(self.shape, S, self.ring)
        return WittMatrix.from_entries(S, self.ring, [[extend_by_zero(w, S) for w in row] for row in self.entries()])

    def ghost_entries(self, i: int, j: int) -> List[Fraction]:
        return [_fraction(a.to_list()[i][j]) for a in self.blocks]

    def entry(self, i: int, j: int) -> WittVector:
        return witt_from_fractions(self.S, self.ring, self.ghost_entries(i, j))

    def entries(self) -> List[List[WittVector]]:
        """
        Raises:
            NotGhostIntegral: Some entry is not in W_S(R).
        """
        lists = [a.to_list() for a in self.blocks]
        return [
            [witt_from_fractions(self.S, self.ring, [_fraction(l[i][j]) for l in lists]) for j in range(self.cols)]
            for i in range(self.rows)
        ]

    def is_integral(self) -> bool:
        try:
            self.entries()
            return True
        except NotGhostIntegral:
            return False

    def divide_int(self, n: int) -> Optional["WittMatrix"]:
        """M / n when every entry is n times an element of W_S(R), otherwise None."""
        quotient = self.scale_fraction(Fraction(1, n))
        return quotient if quotient.is_integral() else None

    def inverse(self) -> Optional["WittMatrix"]:
        """
        The inverse over W_S(R), or None.

        Invertible over W_S(R) means every ghost block is invertible over Q
        and the blockwise inverse is again ghost-integral.
        """
        if self.rows != self.cols:
            raise ShapeMismatch(f"cannot invert a {self.shape} matrix")
        if any(a.det() == 0 for a in self.blocks):
            return None
        inverse = self._like(a.inv() for a in self.blocks)
        return inverse if inverse.is_integral() else None

    def __repr__(self) -> str:
        return f"WittMatrix(S={self.S}, ring={self.ring.label()}, shape={self.shape})"


def column(values: Sequence[WittVector]) -> WittMatrix:
    """A column vector of W_S(R)."""
    S, ring = values[0].S, values[0].ring
    return WittMatrix.from_entries(S, ring, [[v] for v in values])


def tangent_matrix(m: WittMatrix) -> List[List[Fraction]]:
    """The image over W_{1}(R) = R: ghost index 1 is the first coordinate."""
    if 1 not in m.S:
        raise ShapeMismatch(f"{m.S} does not contain 1")
    return [[_fraction(e) for e in row] for row in m.block(1).to_list()]
