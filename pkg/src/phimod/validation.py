# validation.py

import logging
import random
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import divisors

from config import WITT_LAMBDA_SAMPLES, WITT_SEED
from phimod.matrices import WittMatrix
from phimod.objects import (
    PhiMorphism,
    PhiObject,
    beta_pseudo_inverse,
    dual,
    internal_hom,
    morphism_from_matrix,
    same_object,
    tensor,
    unit,
    zero_morphism,
)
from phimod.schemas import AdjunctionReport, Failure, HomCheckReport, ValidationReport
from witt.core import WittVector, one, verschiebung, zero
from witt.errors import InvariantViolation, ShapeMismatch
from witt.rings import RingDescriptor
from witt.truncation import TruncationSet

logger = logging.getLogger(__name__)


def lambda_samples(S: TruncationSet, ring: RingDescriptor, rng: random.Random, samples: int) -> List[WittVector]:
    """0, 1, the V_k(1) for k > 1 in S, then random vectors with small coordinates."""
    values = [zero(S, ring), one(S, ring)]
    values += [verschiebung(k, one(S.quotient(k), ring), S) for k in S if k > 1]
    values += [WittVector.of(S, ring, [rng.randint(-3, 3) for _ in S]) for _ in range(samples)]
    return values


def _where(lhs: WittMatrix, rhs: WittMatrix) -> str:
    for k, (x, y) in zip(lhs.S, zip(lhs.blocks, rhs.blocks)):
        if x != y:
            return f"ghost index {k}: {x.to_list()} != {y.to_list()}"
    return "shapes differ"


def _maximal_elements(S: TruncationSet) -> List[int]:
    return [s for s in S if s > 1 and not any(t != s and t % s == 0 for t in S)]


class _Recorder:
    def __init__(self):
        self.checks = 0
        self.failures: List[Failure] = []

    def expect(self, lhs: WittMatrix, rhs: WittMatrix, axiom: str, S: TruncationSet,
               n: Optional[int] = None, m: Optional[int] = None, witness: str = "") -> bool:
        self.checks += 1
        if lhs == rhs:
            return True
        detail = _where(lhs, rhs)
        self.failures.append(Failure(axiom=axiom, S=S.to_json(), n=n, m=m,
                                     witness=f"{witness}; {detail}" if witness else detail))
        return False

    def fail(self, axiom: str, S: TruncationSet, n: Optional[int] = None, witness: str = ""):
        self.checks += 1
        self.failures.append(Failure(axiom=axiom, S=S.to_json(), n=n, witness=witness))


def _shapes_ok(M: PhiObject, rec: _Recorder) -> bool:
    ok = True
    if M.a < 1:
        rec.fail("a >= 1", M.Q, witness=f"a = {M.a}")
        ok = False
    for S in M.sets():
        for n in S:
            if (S, n) not in M.phi or (S, n) not in M.beta:
                rec.fail("shape", S, n, "no data stored")
                ok = False
                continue
            square = (M.rank, M.rank)
            Phi, data = M.phi[(S, n)], M.beta[(S, n)]
            quotient = S.quotient(n)
            for label, matrix, over in (("phi", Phi, quotient), ("B", data.B, S), ("C", data.C, quotient)):
                if matrix.S != over or matrix.shape != square or matrix.ring != M.ring:
                    rec.fail("shape", S, n, f"{label} is {matrix!r}, expected {square} over {over}")
                    ok = False
    return ok


def _check_phi_beta(M: PhiObject, rec: _Recorder, rng: random.Random, samples: int):
    for (S, n) in M.keys():
        quotient = S.quotient(n)
        Phi, data = M.phi[(S, n)], M.beta[(S, n)]
        identity = WittMatrix.identity(M.rank, quotient, M.ring)
        if n == 1:
            rec.expect(Phi, identity, "phi_1 = id", S, n)
        rec.expect((Phi @ data.B.frobenius(n) @ data.C).scale_int(n), identity.scale_int(n ** M.a),
                   "phi_n o beta_n = n^a", S, n)

        # beta_n(lam phi_n(x)) = B V_n(lam C Phi) x by the projection formula
        C_Phi = data.C @ Phi
        for lam in lambda_samples(quotient, M.ring, rng, samples):
            scalar = identity.scale_witt(lam)
            lhs = data.B @ (scalar @ C_Phi).verschiebung(n, S)
            rhs = scalar.verschiebung(n, S).scale_int(n ** (M.a - 1))
            if not rec.expect(lhs, rhs, "beta_n(lambda phi_n(x)) = n^(a-1) V_n(lambda) x", S, n,
                              witness=f"lambda = {lam!r}"):
                break


def _check_phi_phi(M: PhiObject, rec: _Recorder):
    for S in M.sets():
        for k in S:
            for m in divisors(k)[1:-1]:
                n = k // m
                lhs = M.phi[(S.quotient(m), n)] @ M.phi[(S, m)].frobenius(n)
                rec.expect(lhs, M.phi[(S, k)], "phi_n o phi_m = phi_nm", S, n, m)


def _check_restriction(M: PhiObject, rec: _Recorder):
    """Every T in S is reached by removing maximal elements one at a time."""
    for S in M.sets():
        for s in _maximal_elements(S):
            T = TruncationSet(tuple(t for t in S if t != s))
            for n in T:
                quotient = T.quotient(n)
                big, small = M.beta[(S, n)], M.beta[(T, n)]
                rec.expect(M.phi[(S, n)].restrict(quotient), M.phi[(T, n)], "base change", T, n, witness=f"phi from {S}")
                rec.expect(big.B.restrict(T), small.B, "base change", T, n, witness=f"beta B from {S}")
                rec.expect(big.C.restrict(quotient), small.C, "base change", T, n, witness=f"beta C from {S}")


def _test_inputs(r: int, T: TruncationSet, ring: RingDescriptor, rng: random.Random, count: int = 3) -> List[WittMatrix]:
    identity = WittMatrix.identity(r, T, ring)
    inputs = [identity]
    for lam in lambda_samples(T, ring, rng, count)[-count:]:
        inputs.append(identity.scale_witt(lam))
    return inputs


def beta_laws(M: PhiObject, seed: int = WITT_SEED) -> Tuple[int, List[Failure]]:
    """
    beta_n o beta_m = beta_nm, and phi_n o beta_m = beta_m o phi_n for coprime
    n and m, evaluated on the basis and on random multiples of it.
    """
    rng = random.Random(seed)
    rec = _Recorder()
    for S in M.sets():
        for k in S:
            for m in divisors(k)[1:-1]:
                n = k // m
                for y in _test_inputs(M.rank, S.quotient(k), M.ring, rng):
                    lhs = M.apply_beta(S, m, M.apply_beta(S.quotient(m), n, y))
                    if not rec.expect(lhs, M.apply_beta(S, k, y), "beta_n o beta_m = beta_nm", S, n, m):
                        break
                if gcd(n, m) != 1:
                    continue
                for x in _test_inputs(M.rank, S.quotient(m), M.ring, rng):
                    lhs = M.apply_phi(S, n, M.apply_beta(S, m, x))
                    rhs = M.apply_beta(S.quotient(n), m, M.apply_phi(S.quotient(m), n, x))
                    if not rec.expect(lhs, rhs, "phi_n o beta_m = beta_m o phi_n", S, n, m):
                        break
    return rec.checks, rec.failures


def validate(M: PhiObject, samples: int = WITT_LAMBDA_SAMPLES, seed: int = WITT_SEED) -> ValidationReport:
    """
    Check every axiom of M on every S in Q and n in S.

    Failures are collected, not raised; each names the axiom, S, n and a witness.
    """
    rng = random.Random(seed)
    rec = _Recorder()
    if _shapes_ok(M, rec):
        _check_phi_beta(M, rec, rng, samples)
        _check_phi_phi(M, rec)
        _check_restriction(M, rec)
        checks, failures = beta_laws(M, seed)
        rec.checks += checks
        rec.failures += failures
    logger.info(f"Validated {M!r}: {rec.checks} checks, {len(rec.failures)} failures")
    return ValidationReport(object=M.name, checks=rec.checks, passed=not rec.failures, failures=rec.failures)


def _check_morphism_shapes(M: PhiObject, N: PhiObject, mats: Dict[TruncationSet, WittMatrix]):
    if M.Q != N.Q or M.ring != N.ring:
        raise ShapeMismatch(f"{M!r} and {N!r} live over different ambients")
    expected = set(M.sets())
    if set(mats) != expected:
        raise ShapeMismatch(f"morphism matrices given for {sorted(map(repr, mats))}, expected every S in {M.Q}")
    for S, f in mats.items():
        if f.S != S or f.shape != (N.rank, M.rank) or f.ring != M.ring:
            raise ShapeMismatch(f"f_{S} is {f!r}, expected {(N.rank, M.rank)} over {S}",
                                S=S.to_json(), expected=[N.rank, M.rank], got=list(f.shape))


def _commutes_with_restriction(M: PhiObject, mats: Dict[TruncationSet, WittMatrix]) -> bool:
    for S in M.sets():
        for s in _maximal_elements(S):
            T = TruncationSet(tuple(t for t in S if t != s))
            if mats[S].restrict(T) != mats[T]:
                return False
    return True


def _phi_condition(M: PhiObject, N: PhiObject, mats: Dict[TruncationSet, WittMatrix]) -> bool:
    """phi_N F_n(f_S) = f_{S/n} phi_M with the twisted phi's."""
    for (S, n) in M.keys():
        lhs = N.effective_phi(S, n) @ mats[S].frobenius(n)
        if lhs != mats[S.quotient(n)] @ M.effective_phi(S, n):
            return False
    return True


def _beta_condition(M: PhiObject, N: PhiObject, mats: Dict[TruncationSet, WittMatrix]) -> bool:
    """phi_N o f_S o beta_M = n^(a_M) f_{S/n}, i.e. f is fixed by phi on Hom(M, N)."""
    for (S, n) in M.keys():
        lhs = N.effective_phi(S, n) @ mats[S].frobenius(n) @ beta_pseudo_inverse(M, S, n)
        if lhs != mats[S.quotient(n)].scale_fraction(Fraction(n) ** (M.a - M.twist)):
            return False
    return True


def _commutes_with_beta(M: PhiObject, N: PhiObject, mats: Dict[TruncationSet, WittMatrix]) -> bool:
    for (S, n) in M.keys():
        quotient = S.quotient(n)
        lhs = (mats[S] @ M.apply_beta(S, n, WittMatrix.identity(M.rank, quotient, M.ring)))
        rhs = N.apply_beta(S, n, mats[quotient])
        if lhs.scale_fraction(Fraction(n) ** M.twist) != rhs.scale_fraction(Fraction(n) ** N.twist):
            return False
    return True


def hom_set_check(M: PhiObject, N: PhiObject, mats: Dict[TruncationSet, WittMatrix]) -> HomCheckReport:
    """
    Decide whether the matrices f_S form a morphism M -> N.

    The phi-commutation condition and the fixed-point condition on Hom(M, N)
    are evaluated independently; they must agree. For a morphism between
    objects with the same a, commutation with beta is asserted as well.

    Raises:
        ShapeMismatch: The matrices do not fit M and N.
        InvariantViolation: The two conditions disagree, or a morphism fails to commute with beta.
    """
    _check_morphism_shapes(M, N, mats)
    restriction = _commutes_with_restriction(M, mats)
    phi_ok = _phi_condition(M, N, mats)
    beta_ok = _beta_condition(M, N, mats)
    if phi_ok != beta_ok:
        raise InvariantViolation(
            f"phi-commutation ({phi_ok}) and the Hom fixed-point condition ({beta_ok}) disagree for {M!r} -> {N!r}"
        )
    is_morphism = restriction and phi_ok

    commutation = "not applicable"
    if is_morphism and M.a == N.a:
        if not _commutes_with_beta(M, N, mats):
            raise InvariantViolation(f"a morphism {M!r} -> {N!r} does not commute with beta")
        commutation = "pass"
    logger.debug(f"Hom check {M!r} -> {N!r}: morphism={is_morphism}")
    return HomCheckReport(
        source=M.name, target=N.name, is_morphism=is_morphism,
        commutes_with_restriction=restriction, phi_condition=phi_ok, beta_condition=beta_ok,
        beta_commutation=commutation,
    )


def is_morphism(f: PhiMorphism) -> bool:
    return hom_set_check(f.source, f.target, f.mats).is_morphism


def global_section(f: PhiMorphism) -> PhiMorphism:
    """f as the morphism 1 -> Hom(M, N) given by vec(f)."""
    H = internal_hom(f.source, f.target)
    return PhiMorphism(unit(H.Q, H.ring), H, {S: m.vec() for S, m in f.mats.items()})


def _candidate_morphisms(M: PhiObject, N: PhiObject) -> List[PhiMorphism]:
    candidates = [zero_morphism(M, N)]
    ones = [[1] * M.rank for _ in range(N.rank)]
    candidates.append(morphism_from_matrix(M, N, WittMatrix.from_ints(M.Q, M.ring, ones)))
    if M.rank == N.rank:
        candidates.append(morphism_from_matrix(M, N, WittMatrix.identity(M.rank, M.Q, M.ring)))
    return candidates


def hom_adjunction_check(M: PhiObject, N: PhiObject, P: PhiObject) -> AdjunctionReport:
    """
    Hom(M (x) N, P) = Hom(M, Hom(N, P)), Hom(M, N) = M^v (x) N, M^vv = M, and
    f: M -> N is a morphism exactly when vec(f): 1 -> Hom(M, N) is one.
    """
    failures = []
    adjunction = same_object(internal_hom(tensor(M, N), P), internal_hom(M, internal_hom(N, P)))
    if not adjunction:
        failures.append(f"Hom({M.name}*{N.name},{P.name}) differs from Hom({M.name},Hom({N.name},{P.name}))")
    dual_tensor = same_object(internal_hom(M, N), tensor(dual(M), N))
    if not dual_tensor:
        failures.append(f"Hom({M.name},{N.name}) differs from dual({M.name})*{N.name}")
    double_dual = same_object(dual(dual(M)), M)
    if not double_dual:
        failures.append(f"dual(dual({M.name})) differs from {M.name}")

    sections = True
    for f in _candidate_morphisms(M, N):
        direct = is_morphism(f)
        if direct != is_morphism(global_section(f)):
            sections = False
            failures.append(f"vec(f) and f disagree on being a morphism ({direct}) for {M.name} -> {N.name}")

    logger.info(f"Adjunction check on {M.name}, {N.name}, {P.name}: {len(failures)} failures")
    return AdjunctionReport(
        objects=[M.name, N.name, P.name],
        hom_tensor_adjunction=adjunction,
        hom_is_dual_tensor=dual_tensor,
        double_dual=double_dual,
        global_sections=sections,
        passed=not failures,
        failures=failures,
    )
