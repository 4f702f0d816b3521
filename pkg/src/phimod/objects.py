# objects.py

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from phimod.matrices import WittMatrix
from witt.core import teichmuller
from witt.errors import AmbientMismatch, InvalidRing, ParseError, ShapeMismatch
from witt.rings import Integers, LocalIntegersAtP, Rationals, RingDescriptor, RingValue
from witt.truncation import TruncationSet

logger = logging.getLogger(__name__)

Key = Tuple[TruncationSet, int]

PHI_RINGS = (Integers, Rationals, LocalIntegersAtP)


def check_phi_ring(ring: RingDescriptor) -> RingDescriptor:
    if not isinstance(ring, PHI_RINGS):
        raise InvalidRing(f"phi-modules are supported over Z, Q and Z_(p), not {ring.label()}", ring=ring.label())
    return ring


def twist_factor(n: int, twist: int) -> Fraction:
    """M(t) has phi_n scaled by n^-t."""
    return Fraction(n) ** -twist


@dataclass(frozen=True, eq=False)
class BetaData:
    """beta_n(y) = B * V_n(C * y) with B over W_S(R) and C over W_{S/n}(R)."""

    B: WittMatrix
    C: WittMatrix

    def apply(self, n: int, S: TruncationSet, y: WittMatrix) -> WittMatrix:
        return self.B @ (self.C @ y).verschiebung(n, S)


@dataclass(eq=False)
class PhiObject:
    """
    A phi-module over a finite ambient truncation set Q.

    M_S is free of rank `rank` over W_S(R) for every nonempty truncation set
    S in Q, with bases chosen so that the base change M_S -> M_T is the
    identity on coordinates. phi_n acts by x -> phi[(S, n)] * F_n(x); beta_n
    is stored as BetaData. The object is M(twist), and phi_n o beta_n = n^a.
    """

    Q: TruncationSet
    ring: RingDescriptor
    rank: int
    a: int
    twist: int
    phi: Dict[Key, WittMatrix] = field(repr=False)
    beta: Dict[Key, BetaData] = field(repr=False)
    name: str = ""

    def keys(self) -> List[Key]:
        return sorted(self.phi, key=lambda k: (len(k[0]), k[0].elements, k[1]))

    def sets(self) -> List[TruncationSet]:
        return self.Q.subsets()

    def rank_at(self, S: TruncationSet) -> int:
        return self.rank if S else 0

    def apply_phi(self, S: TruncationSet, n: int, x: WittMatrix) -> WittMatrix:
        """phi_n: M_S -> M_{S/n} on a column (or block of columns) of coordinates."""
        return self.phi[(S, n)] @ x.frobenius(n)

    def apply_beta(self, S: TruncationSet, n: int, y: WittMatrix) -> WittMatrix:
        """beta_n: M_{S/n} -> M_S."""
        return self.beta[(S, n)].apply(n, S, y)

    def effective_phi(self, S: TruncationSet, n: int) -> WittMatrix:
        """The phi matrix of M(twist), generally with rational ghost components."""
        return self.phi[(S, n)].scale_fraction(twist_factor(n, self.twist))

    def __repr__(self) -> str:
        return f"PhiObject({self.name or '?'}, Q={self.Q}, R={self.ring.label()}, rank={self.rank}, a={self.a}, twist={self.twist})"


def _build(Q: TruncationSet, ring: RingDescriptor, rank: int, a: int, twist: int, name: str,
           phi_at: Callable[[TruncationSet, int], WittMatrix],
           beta_at: Callable[[TruncationSet, int], BetaData]) -> PhiObject:
    check_phi_ring(ring)
    phi, beta = {}, {}
    for S in Q.subsets():
        for n in S:
            phi[(S, n)] = phi_at(S, n)
            beta[(S, n)] = beta_at(S, n)
    return PhiObject(Q, ring, rank, a, twist, phi, beta, name)


def graded_piece(q: int, d: int, Q: TruncationSet, ring: RingDescriptor) -> PhiObject:
    """
    Rank one with phi_n = n^q F_n and beta_n = n^(d-q) V_n, so phi_n o beta_n = n^(d+1).

    Raises:
        ParseError: Unless 0 <= q <= d.
    """
    if not 0 <= q <= d:
        raise ParseError(f"graded piece needs 0 <= q <= d, got q={q}, d={d}", q=q, d=d)

    def phi_at(S, n):
        return WittMatrix.from_ints(S.quotient(n), ring, [[n ** q]])

    def beta_at(S, n):
        return BetaData(WittMatrix.from_ints(S, ring, [[n ** (d - q)]]), WittMatrix.identity(1, S.quotient(n), ring))

    return _build(Q, ring, 1, d + 1, 0, f"graded({q},{d})", phi_at, beta_at)


def tate(b: int, Q: TruncationSet, ring: RingDescriptor) -> PhiObject:
    """
    The Tate object 1(b). For b <= 0 it is stored untwisted with phi_n = n^-b F_n
    and the minimal exponent a = 1 - b; for b > 0 it is the unit with twist b.
    """
    if b <= 0:
        obj = graded_piece(-b, -b, Q, ring)
    else:
        obj = replace(graded_piece(0, 0, Q, ring), twist=b)
    obj.name = "unit" if b == 0 else f"tate({b})"
    return obj


def unit(Q: TruncationSet, ring: RingDescriptor) -> PhiObject:
    return tate(0, Q, ring)


def _same_ambient(M: PhiObject, N: PhiObject):
    if M.Q != N.Q or M.ring != N.ring:
        raise AmbientMismatch(
            f"objects live over Q={M.Q}, R={M.ring.label()} and Q={N.Q}, R={N.ring.label()}",
            left=M.Q.to_json(), right=N.Q.to_json(),
        )


def twist(M: PhiObject, b: int) -> PhiObject:
    """M(k) -> M(k + b)."""
    return replace(M, twist=M.twist + b, name=f"{M.name}({b:+d})")


def _lift(M: PhiObject, target_twist: int, target_a: int) -> PhiObject:
    """The same object written with a larger twist tag and exponent."""
    shift = target_twist - M.twist
    a = M.a + shift
    extra = target_a - a
    phi = {k: v.scale_int(k[1] ** shift) for k, v in M.phi.items()}
    beta = {k: BetaData(v.B, v.C.scale_int(k[1] ** extra)) for k, v in M.beta.items()}
    return replace(M, phi=phi, beta=beta, a=target_a, twist=target_twist)


def direct_sum(M: PhiObject, N: PhiObject) -> PhiObject:
    """Block-diagonal data after bringing both summands to a common twist and exponent."""
    _same_ambient(M, N)
    t = max(M.twist, N.twist)
    a = max(M.a + t - M.twist, N.a + t - N.twist)
    M, N = _lift(M, t, a), _lift(N, t, a)
    phi = {k: M.phi[k].block_diag(N.phi[k]) for k in M.phi}
    beta = {k: BetaData(M.beta[k].B.block_diag(N.beta[k].B), M.beta[k].C.block_diag(N.beta[k].C)) for k in M.beta}
    result = PhiObject(M.Q, M.ring, M.rank + N.rank, a, t, phi, beta, f"({M.name}+{N.name})")
    return normalize(result)


def tensor(M: PhiObject, N: PhiObject) -> PhiObject:
    """
    phi = phi_M (x) phi_N and beta = beta_M (x) beta_N. Since
    V_n(u) V_n(v) = n V_n(uv), the tensor beta has B = B_M (x) B_N and
    C = n (C_M (x) C_N).
    """
    _same_ambient(M, N)
    phi = {k: M.phi[k].kron(N.phi[k]) for k in M.phi}
    beta = {
        k: BetaData(M.beta[k].B.kron(N.beta[k].B), M.beta[k].C.kron(N.beta[k].C).scale_int(k[1]))
        for k in M.beta
    }
    result = PhiObject(M.Q, M.ring, M.rank * N.rank, M.a + N.a, M.twist + N.twist, phi, beta, f"({M.name}*{N.name})")
    return normalize(result)


def beta_pseudo_inverse(M: PhiObject, S: TruncationSet, n: int) -> WittMatrix:
    """P = n F_n(B) C over W_{S/n}(R); phi_n(beta_n(y)) = phi * P * y, and phi * P = n^a."""
    data = M.beta[(S, n)]
    return (data.B.frobenius(n) @ data.C).scale_int(n)


def internal_hom(M: PhiObject, N: PhiObject) -> PhiObject:
    """
    Hom(M, N) = Hom'(M, N)(a_M) on matrices r_N x r_M, vectorized column-major.

    phi_n(f) = phi_N o f o beta_M has matrix P_M^T (x) phi_N, and
    beta_n(g) = beta_N o g o phi_M has B = I (x) B_N, C = phi_M^T (x) C_N.
    """
    _same_ambient(M, N)
    phi, beta = {}, {}
    for (S, n) in M.phi:
        phi[(S, n)] = beta_pseudo_inverse(M, S, n).transpose().kron(N.phi[(S, n)])
        beta[(S, n)] = BetaData(
            WittMatrix.identity(M.rank, S, M.ring).kron(N.beta[(S, n)].B),
            M.phi[(S, n)].transpose().kron(N.beta[(S, n)].C),
        )
    result = PhiObject(
        M.Q, M.ring, M.rank * N.rank, M.a + N.a, N.twist - M.twist + M.a,
        phi, beta, f"Hom({M.name},{N.name})",
    )
    return normalize(result)


def dual(M: PhiObject) -> PhiObject:
    """M^v = Hom(M, 1)."""
    result = internal_hom(M, unit(M.Q, M.ring))
    result.name = f"dual({M.name})"
    return result


def _divide_all(matrices: Dict[Key, WittMatrix]) -> Optional[Dict[Key, WittMatrix]]:
    divided = {}
    for (S, n), m in matrices.items():
        q = m if n == 1 else m.divide_int(n)
        if q is None:
            return None
        divided[(S, n)] = q
    return divided


def _reduce_beta(M: PhiObject) -> Optional[Dict[Key, BetaData]]:
    reduced = {}
    for (S, n), data in M.beta.items():
        if n == 1:
            reduced[(S, n)] = data
            continue
        C = data.C.divide_int(n)
        if C is not None:
            reduced[(S, n)] = BetaData(data.B, C)
            continue
        B = data.B.divide_int(n)
        if B is None:
            return None
        reduced[(S, n)] = BetaData(B, data.C)
    return reduced


def normalize(M: PhiObject) -> PhiObject:
    """
    Bring M to its stored form: a negative twist tag is moved into the data,
    then a is lowered while it stays >= 1, first by dividing every beta_n by n
    and otherwise, while the tag is positive, by moving a factor n out of every
    phi_n into the tag.
    """
    if M.twist < 0:
        M = _lift(M, 0, M.a - M.twist)
    while M.a > 1:
        beta = _reduce_beta(M)
        if beta is not None:
            M = replace(M, beta=beta, a=M.a - 1)
            continue
        phi = _divide_all(M.phi) if M.twist > 0 else None
        if phi is not None:
            M = replace(M, phi=phi, a=M.a - 1, twist=M.twist - 1)
            continue
        break
    logger.debug(f"Normalized {M!r}")
    return M


def same_object(M: PhiObject, N: PhiObject) -> bool:
    """Equal rank and equal phi_n of M(twist) and N(twist) on the canonical bases."""
    if M.Q != N.Q or M.ring != N.ring or M.rank != N.rank:
        return False
    return all(M.effective_phi(S, n) == N.effective_phi(S, n) for (S, n) in M.phi)


@dataclass(eq=False)
class PhiMorphism:
    """f_S: M_S -> N_S for each S in Q, as r_N x r_M matrices over W_S(R)."""

    source: PhiObject
    target: PhiObject
    mats: Dict[TruncationSet, WittMatrix] = field(repr=False)

    def at(self, S: TruncationSet) -> WittMatrix:
        return self.mats[S]


def morphism_from_matrix(M: PhiObject, N: PhiObject, matrix: WittMatrix) -> PhiMorphism:
    """Restrict one matrix over W_Q(R) to every S."""
    _same_ambient(M, N)
    if matrix.S != M.Q or matrix.shape != (N.rank, M.rank):
        raise ShapeMismatch(f"expected a {(N.rank, M.rank)} matrix over {M.Q}, got {matrix!r}")
    return PhiMorphism(M, N, {S: matrix.restrict(S) for S in M.sets()})


def identity_morphism(M: PhiObject) -> PhiMorphism:
    return morphism_from_matrix(M, M, WittMatrix.identity(M.rank, M.Q, M.ring))


def zero_morphism(M: PhiObject, N: PhiObject) -> PhiMorphism:
    return morphism_from_matrix(M, N, WittMatrix.zeros((N.rank, M.rank), M.Q, M.ring))


def scalar_morphism(M: PhiObject, m: int) -> PhiMorphism:
    return morphism_from_matrix(M, M, WittMatrix.identity(M.rank, M.Q, M.ring).scale_int(m))


def teichmuller_morphism(M: PhiObject, c: RingValue) -> PhiMorphism:
    """Multiplication by the Teichmuller lift [c]."""
    return morphism_from_matrix(M, M, WittMatrix.identity(M.rank, M.Q, M.ring).scale_witt(teichmuller(c, M.Q)))


def diagonal_morphism(M: PhiObject, values: List[int]) -> PhiMorphism:
    if len(values) != M.rank:
        raise ShapeMismatch(f"{len(values)} diagonal entries for rank {M.rank}")
    rows = [[v if i == j else 0 for j in range(M.rank)] for i, v in enumerate(values)]
    return morphism_from_matrix(M, M, WittMatrix.from_ints(M.Q, M.ring, rows))


def compose(g: PhiMorphism, f: PhiMorphism) -> PhiMorphism:
    """g o f."""
    if not same_object(f.target, g.source):
        raise AmbientMismatch(f"cannot compose {f.target!r} into {g.source!r}")
    return PhiMorphism(f.source, g.target, {S: g.mats[S] @ f.mats[S] for S in f.mats})


def block_morphism(f: PhiMorphism, g: PhiMorphism) -> PhiMorphism:
    """f + g between the direct sums."""
    return PhiMorphism(
        direct_sum(f.source, g.source), direct_sum(f.target, g.target),
        {S: f.mats[S].block_diag(g.mats[S]) for S in f.mats},
    )


def tensor_morphisms(f: PhiMorphism, g: PhiMorphism) -> PhiMorphism:
    return PhiMorphism(
        tensor(f.source, g.source), tensor(f.target, g.target),
        {S: f.mats[S].kron(g.mats[S]) for S in f.mats},
    )
