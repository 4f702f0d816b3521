# tangent.py

import logging
import random
from fractions import Fraction
from typing import List

from config import WITT_SEED
from phimod.matrices import WittMatrix, tangent_matrix
from phimod.objects import PhiMorphism, PhiObject
from phimod.schemas import Failure, HarnessReport, ReductionReport, TangentModel
from phimod.validation import lambda_samples
from witt.epsilon import check_local_ring, coprime_indices, epsilon, epsilon_one
from witt.errors import NotGhostIntegral
from witt.rings import Rationals
from witt.truncation import TruncationSet

logger = logging.getLogger(__name__)

POINT = TruncationSet((1,))


def tangent(M: PhiObject) -> TangentModel:
    """T(M) = M_{1}, a free R-module of rank M.rank."""
    return TangentModel(object=M.name, ring=M.ring.describe(), rank=M.rank, a=M.a, twist=M.twist)


def tangent_of_morphism(f: PhiMorphism) -> List[List[Fraction]]:
    return tangent_matrix(f.at(POINT))


def _encode(f: PhiMorphism, values: List[List[Fraction]]) -> List[List[str]]:
    ring = f.source.ring
    return [[ring.encode(ring.from_fraction(q)) for q in row] for row in values]


def conservativity_harness(f: PhiMorphism) -> HarnessReport:
    """
    Faithfulness: T(f) = 0 forces every f_S = 0. Conservativity: T(f)
    invertible over R forces every f_S invertible over W_S(R). A branch whose
    hypothesis does not hold is reported as "not applicable".
    """
    values = tangent_of_morphism(f)
    counterexample = None

    faithful = "not applicable"
    if all(q == 0 for row in values for q in row):
        bad = [S for S, m in sorted(f.mats.items(), key=lambda item: item[0].elements) if not m.is_zero()]
        faithful = "fail" if bad else "pass"
        if bad:
            counterexample = f"T(f) = 0 but f_{bad[0]} = {f.at(bad[0]).entries()}"

    conservative = "not applicable"
    point = f.at(POINT)
    if point.rows == point.cols and point.inverse() is not None:
        bad = [S for S, m in sorted(f.mats.items(), key=lambda item: item[0].elements) if m.inverse() is None]
        conservative = "fail" if bad else "pass"
        if bad and counterexample is None:
            counterexample = f"T(f) is invertible but f_{bad[0]} is not"

    passed = "fail" not in (faithful, conservative)
    if not passed:
        logger.warning(f"Tangent harness failed: {counterexample}")
    logger.debug(f"Harness verdicts: faithful={faithful}, conservative={conservative}")
    return HarnessReport(
        morphism=f"{f.source.name}->{f.target.name}",
        tangent=_encode(f, values),
        faithful=faithful,
        conservative=conservative,
        passed=passed,
        counterexample=counterexample,
    )


def p_typical_reduction_check(M: PhiObject, p: int, samples: int = 3, seed: int = WITT_SEED) -> ReductionReport:
    """
    Over a Z_(p)-algebra, M_S splits along the idempotents eps_n. Checks, for
    every S in Q:

    * eps_1 M_S -> M_{S_p} by restriction is bijective, with inverse
      y -> eps_1 * extend_by_zero(y);
    * phi_n: eps_n M_S -> eps_1 M_{S/n} is bijective for n in S prime to p,
      with two-sided inverse psi = (eps_n / n^a) beta_n, and psi lands in M_S.

    Over Q every phi block at ghost index 1 must also be invertible.

    Raises:
        WrongRing: R is not Z_(p) or Q.
    """
    check_local_ring(M.ring, p)
    rng = random.Random(seed)
    checks = 0
    failures: List[Failure] = []

    def record(ok: bool, axiom: str, S: TruncationSet, n=None, witness: str = ""):
        nonlocal checks
        checks += 1
        if not ok:
            failures.append(Failure(axiom=axiom, S=S.to_json(), n=n, witness=witness))

    def columns(T: TruncationSet) -> List[WittMatrix]:
        identity = WittMatrix.identity(M.rank, T, M.ring)
        return [identity] + [identity.scale_witt(lam) for lam in lambda_samples(T, M.ring, rng, samples)[-samples:]]

    for S in M.sets():
        S_p = S.p_part(p)
        e1 = epsilon_one(S, p, M.ring)
        for x in columns(S):
            image = x.scale_witt(e1).restrict(S_p)
            back = image.extend_by_zero(S).scale_witt(e1)
            record(back == x.scale_witt(e1), "eps_1 M_S -> M_{S_p} injective", S)
        for y in columns(S_p):
            lifted = y.extend_by_zero(S).scale_witt(e1)
            record(lifted.restrict(S_p) == y, "eps_1 M_S -> M_{S_p} surjective", S)

        for n in coprime_indices(S, p):
            quotient = S.quotient(n)
            e_n = epsilon(n, S, p, M.ring)
            e1_quotient = epsilon_one(quotient, p, M.ring)

            def psi(y: WittMatrix) -> WittMatrix:
                return M.apply_beta(S, n, y).scale_witt(e_n).scale_fraction(Fraction(1, n ** M.a))

            for y in columns(quotient):
                y = y.scale_witt(e1_quotient)
                lifted = psi(y)
                try:
                    lifted.entries()
                except NotGhostIntegral as e:
                    record(False, "psi lands in M_S", S, n, e.message)
                    continue
                record(M.apply_phi(S, n, lifted) == y, "phi_n o psi = id", S, n)
            for x in columns(S):
                x = x.scale_witt(e_n)
                record(psi(M.apply_phi(S, n, x)) == x, "psi o phi_n = id", S, n)

            if isinstance(M.ring, Rationals):
                record(M.phi[(S, n)].block(1).det() != 0, "phi_n invertible at ghost index 1", S, n)

    logger.info(f"p-typical reduction of {M!r} at p={p}: {checks} checks, {len(failures)} failures")
    return ReductionReport(
        object=M.name, ring=M.ring.label(), p=p, checks=checks, passed=not failures, failures=failures,
    )
