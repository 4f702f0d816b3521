# suites.py

import logging
import random
from math import gcd
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel
from sympy import isprime

from config import WITT_FINITE_CAP, WITT_LAMBDA_SAMPLES, WITT_SEED
from phimod.objects import (
    PhiObject,
    block_morphism,
    diagonal_morphism,
    direct_sum,
    dual,
    internal_hom,
    scalar_morphism,
    tate,
    tensor,
    unit,
)
from phimod.tangent import conservativity_harness, p_typical_reduction_check
from phimod.validation import hom_adjunction_check, hom_set_check, is_morphism, validate
from witt.core import (
    GhostVector,
    WittVector,
    add,
    exact_sequence_check,
    from_ghost,
    frobenius,
    ghost,
    mul,
    scale_int,
    teichmuller,
    verschiebung,
)
from witt.epsilon import check_family, decompose, epsilon_family, frobenius_of_epsilon, reassemble
from witt.errors import InvariantViolation, NotGhostIntegral
from witt.finite import maximal_ideal_report, verify_maximal_ideal_lemma, verify_points_lemma
from witt.polytable import build_table, table_stats
from witt.rings import Integers, IntegersModM, LocalIntegersAtP, Rationals, RingDescriptor
from witt.truncation import TruncationSet
from witt.zbasis import VBasisExpansion, from_vbasis, to_vbasis, vbasis_element, vbasis_multiply

logger = logging.getLogger(__name__)


class SuiteReport(BaseModel):
    suite: str
    max: int
    samples: int
    seed: int
    cases: int
    failures: List[str]
    passed: bool


class _Cases:
    def __init__(self):
        self.count = 0
        self.failures: List[str] = []

    def check(self, ok: bool, label: str):
        self.count += 1
        if not ok:
            self.failures.append(label)


def random_vector(S: TruncationSet, ring: RingDescriptor, rng: random.Random, bound: int = 5) -> WittVector:
    if isinstance(ring, IntegersModM):
        return WittVector.of(S, ring, [rng.randrange(ring.m) for _ in S])
    return WittVector.of(S, ring, [rng.randint(-bound, bound) for _ in S])


def _sets(max_n: int, cap: int = 12) -> List[TruncationSet]:
    return [TruncationSet.up_to(N) for N in range(1, min(max_n, cap) + 1)]


def ghost_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """gh(x + y) = gh(x) + gh(y) and gh(xy) = gh(x) gh(y) over Z."""
    rng, cases, ring = random.Random(seed), _Cases(), Integers()
    for S in _sets(max_n):
        for _ in range(samples):
            x, y = random_vector(S, ring, rng), random_vector(S, ring, rng)
            cases.check(ghost(add(x, y)) == ghost(x) + ghost(y), f"ghost(x+y) on {S}: {x!r}, {y!r}")
            cases.check(ghost(mul(x, y)) == ghost(x) * ghost(y), f"ghost(xy) on {S}: {x!r}, {y!r}")
    return cases


def roundtrip_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """from_ghost o ghost = id, and perturbing gh_2 by 1 leaves the image of the ghost map."""
    rng, cases, ring = random.Random(seed), _Cases(), Integers()
    for S in _sets(max_n):
        for _ in range(samples):
            w = random_vector(S, ring, rng)
            g = ghost(w)
            cases.check(from_ghost(g) == w, f"round trip on {S}: {w!r}")
            if 2 not in S:
                continue
            bumped = GhostVector(S, ring, tuple(c + 1 if k == 2 else c for k, c in zip(S, g.components)))
            try:
                from_ghost(bumped)
                cases.check(False, f"non-integral ghost vector accepted on {S}")
            except NotGhostIntegral as e:
                cases.check(e.index == 2, f"non-integrality reported at {e.index}, expected 2")
    return cases


def tables_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """Build sigma_n, pi_n for n <= max; the table path agrees with the ghost path."""
    rng, cases, ring = random.Random(seed), _Cases(), Integers()
    for n in range(1, max_n + 1):
        build_table(n)
    stats = table_stats()
    logger.info(f"Universal polynomial table after n={max_n}: {stats}")
    cases.check(stats["entries"] >= 2 * max_n, f"sigma_n and pi_n cached for n <= {max_n}: {stats}")
    S = TruncationSet.up_to(max_n)
    for _ in range(samples):
        x, y = random_vector(S, ring, rng, 3), random_vector(S, ring, rng, 3)
        cases.check(add(x, y, "table") == add(x, y, "ghost"), f"table sum on {S}: {x!r}, {y!r}")
        cases.check(mul(x, y, "table") == mul(x, y, "ghost"), f"table product on {S}: {x!r}, {y!r}")
    return cases


def fv_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """
    F_n V_n = n, F_n V_m = V_m F_n for coprime n and m, F_n F_m = F_nm,
    V_n V_m = V_nm, V_p(x)^2 = p V_p(x^2), the projection formula and
    multiplicativity of Teichmuller lifts, over Z and Z/4.
    """
    rng, cases = random.Random(seed), _Cases()
    S = TruncationSet.up_to(max_n)
    for ring in (Integers(), IntegersModM(4)):
        label = ring.label()
        for _ in range(samples):
            a, b = random_vector(TruncationSet((1,)), ring, rng).coords[0], random_vector(TruncationSet((1,)), ring, rng).coords[0]
            cases.check(mul(teichmuller(a, S), teichmuller(b, S)) == teichmuller(a * b, S), f"[a][b] = [ab] over {label}")
        for n in range(2, max_n + 1):
            quotient = S.quotient(n)
            for _ in range(samples):
                x = random_vector(quotient, ring, rng, 3)
                cases.check(frobenius(n, verschiebung(n, x, S)) == scale_int(x, n), f"F_{n} V_{n} = {n} over {label}")
                y = random_vector(S, ring, rng, 3)
                lhs = verschiebung(n, mul(frobenius(n, y), x), S)
                cases.check(lhs == mul(y, verschiebung(n, x, S)), f"V_{n}(F_{n}(y) x) = y V_{n}(x) over {label}")
                if isprime(n):
                    vx = verschiebung(n, x, S)
                    cases.check(mul(vx, vx) == scale_int(verschiebung(n, mul(x, x), S), n), f"V_{n}(x)^2 over {label}")
            for m in range(2, max_n // n + 1):
                w = random_vector(S, ring, rng, 3)
                cases.check(frobenius(n, frobenius(m, w)) == frobenius(n * m, w), f"F_{n} F_{m} over {label}")
                z = random_vector(S.quotient(n * m), ring, rng, 3)
                cases.check(
                    verschiebung(n, verschiebung(m, z, S.quotient(n)), S) == verschiebung(n * m, z, S),
                    f"V_{n} V_{m} over {label}",
                )
                if gcd(n, m) == 1:
                    x = random_vector(S.quotient(m), ring, rng, 3)
                    cases.check(
                        frobenius(n, verschiebung(m, x, S)) == verschiebung(m, frobenius(n, x), S.quotient(n)),
                        f"F_{n} V_{m} = V_{m} F_{n} over {label}",
                    )
    return cases


def zbasis_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """V_m(1) V_n(1) = gcd(m, n) V_lcm(1), and V-basis round trips."""
    rng, cases, ring = random.Random(seed), _Cases(), Integers()
    S = TruncationSet.up_to(max_n)
    for m in S:
        for n in S:
            c = gcd(m, n)
            if m * n // c > max_n:
                continue
            product = mul(vbasis_element(m, S), vbasis_element(n, S))
            cases.check(product == scale_int(vbasis_element(m * n // c, S), c), f"V_{m}(1) V_{n}(1)")
    for _ in range(samples):
        w = random_vector(S, ring, rng)
        cases.check(from_vbasis(to_vbasis(w)) == w, f"V-basis round trip: {w!r}")
        e1 = VBasisExpansion(S, tuple(rng.randint(-3, 3) for _ in S))
        e2 = VBasisExpansion(S, tuple(rng.randint(-3, 3) for _ in S))
        cases.check(from_vbasis(vbasis_multiply(e1, e2)) == mul(from_vbasis(e1), from_vbasis(e2)), "V-basis product")
    return cases


def eps_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """Idempotent family, the F_m case rule and decompose/reassemble round trips."""
    rng, cases = random.Random(seed), _Cases()
    for p in (2, 3, 5):
        ring = LocalIntegersAtP(p)
        for S in _sets(max_n):
            report = check_family(epsilon_family(S, p, ring))
            cases.check(report.idempotent and report.orthogonal and report.sums_to_one, f"eps family p={p}, S={S}")
            indices = report.indices
            for m in indices:
                for n in indices:
                    try:
                        frobenius_of_epsilon(m, n, S, p, ring)
                        cases.check(True, "")
                    except InvariantViolation as e:
                        cases.check(False, str(e))
            for _ in range(samples):
                w = random_vector(S, ring, rng)
                cases.check(reassemble(decompose(w, p), S, p, ring) == w, f"decompose/reassemble p={p} on {S}: {w!r}")
    return cases


def exactseq_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """Exactness of 0 -> W_{S/n} -> W_S -> W_T -> 0 for every truncation set under the cap."""
    cases = _Cases()
    candidates = TruncationSet.up_to(min(max_n, 12)).subsets()
    for ring in (IntegersModM(2), IntegersModM(3), IntegersModM(4)):
        for S in candidates:
            if ring.cardinality() ** len(S) > WITT_FINITE_CAP:
                continue
            for n in S:
                report = exact_sequence_check(ring, S, n)
                cases.check(report.exact, f"exact sequence over {ring.label()}, S={S}, n={n}")
    return cases


def maxideal_suite(max_n: int, samples: int, seed: int) -> _Cases:
    cases = _Cases()
    for p, elements, j in ((2, (1, 2), 1), (2, (1, 2, 4), 1), (3, (1, 3), 1), (3, (1, 3), 2)):
        report = verify_maximal_ideal_lemma(p, TruncationSet(elements), j)
        cases.check(report.passed, f"maximal ideal lemma p={p}, S={elements}, j={j}: {report.failures}")
    report = maximal_ideal_report(IntegersModM(3), TruncationSet((1, 2)))
    cases.check(report.passed and len(report.maximal_ideals) == 2, "W_{1,2}(F_3) has two maximal ideals")
    report = verify_points_lemma(6, TruncationSet((1, 2)))
    cases.check(report.passed, f"points lemma over Z/6: {report.failures}")
    return cases


def base_objects(Q: TruncationSet, ring: RingDescriptor) -> List[PhiObject]:
    objects = [unit(Q, ring)] + [tate(-b, Q, ring) for b in (1, 2, 3)]
    objects.append(direct_sum(unit(Q, ring), tate(-1, Q, ring)))
    return objects


def _phimod_ambient(max_n: int) -> TruncationSet:
    return TruncationSet.up_to(min(max_n, 6))


def phimod_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """
    Axioms of unit, Tate objects, a sum, and all pairwise tensors, internal
    Homs and duals over Z; Hom conditions on candidate morphisms; adjunctions.
    """
    cases = _Cases()
    Q = _phimod_ambient(max_n)
    ring = Integers()
    objects = base_objects(Q, ring)
    built = list(objects)
    built += [dual(M) for M in objects]
    built += [tensor(M, N) for M in objects for N in objects]
    built += [internal_hom(M, N) for M in objects for N in objects]
    for M in built:
        report = validate(M, samples, seed)
        cases.check(report.passed, f"validate {M.name}: {[f.axiom for f in report.failures[:3]]}")
    for M in objects:
        for f in (scalar_morphism(M, 3), scalar_morphism(M, 0)):
            cases.check(hom_set_check(M, M, f.mats).is_morphism, f"scalar endomorphism of {M.name}")
    for M in objects[:3]:
        for N in objects[:3]:
            report = hom_adjunction_check(M, N, objects[1])
            cases.check(report.passed, f"adjunctions on {M.name}, {N.name}: {report.failures}")
    return cases


def tangent_suite(max_n: int, samples: int, seed: int) -> _Cases:
    """Faithfulness and conservativity on random scalar, diagonal and block endomorphisms; p-typical reduction."""
    rng, cases = random.Random(seed), _Cases()
    Q = _phimod_ambient(max_n)
    objects = base_objects(Q, Integers())
    for _ in range(samples):
        M = rng.choice(objects)
        kind = rng.randrange(3)
        if kind == 0:
            f = scalar_morphism(M, rng.randint(-2, 2))
        elif kind == 1:
            f = diagonal_morphism(M, [rng.randint(-2, 2) for _ in range(M.rank)])
        else:
            N = rng.choice(objects[:4])
            f = block_morphism(scalar_morphism(M, rng.randint(-2, 2)), scalar_morphism(N, rng.randint(-2, 2)))
        cases.check(is_morphism(f), f"endomorphism of {f.source.name} is a morphism")
        report = conservativity_harness(f)
        cases.check(report.passed, f"tangent harness on {f.source.name}: {report.counterexample}")
    reduction_Q = TruncationSet.divisor_closure([6]) if max_n >= 6 else Q
    for ring in (LocalIntegersAtP(2), Rationals()):
        for M in (unit(reduction_Q, ring), tate(-1, reduction_Q, ring)):
            report = p_typical_reduction_check(M, 2, seed=seed)
            cases.check(report.passed, f"p-typical reduction of {M.name} over {ring.label()}")
    return cases


SUITES: Dict[str, Callable[[int, int, int], _Cases]] = {
    "ghost": ghost_suite,
    "roundtrip": roundtrip_suite,
    "tables": tables_suite,
    "fv": fv_suite,
    "zbasis": zbasis_suite,
    "eps": eps_suite,
    "exactseq": exactseq_suite,
    "maxideal": maxideal_suite,
    "phimod": phimod_suite,
    "tangent": tangent_suite,
}


def run_suite(name: str, max_n: int = 12, samples: Optional[int] = None, seed: int = WITT_SEED) -> List[SuiteReport]:
    """
    Run one named suite, or every suite for "all".

    Raises:
        KeyError: Unknown suite name.
    """
    samples = WITT_LAMBDA_SAMPLES if samples is None else samples
    names = list(SUITES) if name == "all" else [name]
    reports = []
    for suite in names:
        logger.info(f"Running suite {suite} (max={max_n}, samples={samples}, seed={seed})")
        cases = SUITES[suite](max_n, samples, seed)
        if cases.failures:
            logger.warning(f"Suite {suite}: {len(cases.failures)} failures out of {cases.count}")
        reports.append(SuiteReport(
            suite=suite, max=max_n, samples=samples, seed=seed,
            cases=cases.count, failures=cases.failures, passed=not cases.failures,
        ))
    return reports
