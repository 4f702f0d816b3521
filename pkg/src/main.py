# main.py

import argparse
import logging
import sys
import traceback
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from config import LOG_FILE, LOG_LEVEL, WITT_FINITE_CAP, WITT_LAMBDA_SAMPLES, WITT_SEED
from phimod.objects import (
    PhiMorphism,
    PhiObject,
    diagonal_morphism,
    dual,
    graded_piece,
    internal_hom,
    scalar_morphism,
    tate,
    teichmuller_morphism,
    tensor,
    unit,
)
from phimod.schemas import PhiMorphismModel, PhiObjectModel, morphism_from_model, object_from_model, object_to_model
from phimod.tangent import conservativity_harness, p_typical_reduction_check, tangent
from phimod.validation import hom_adjunction_check, hom_set_check, validate
from utils.json_helper import decode_vector, dumps, encode_coords, encode_ghost, encode_vector, load_json
from utils.logging_helper import setup_logging
from verify.suites import SUITES, run_suite
from witt.core import (
    GhostVector,
    WittVector,
    add,
    exact_sequence_check,
    from_ghost,
    frobenius,
    ghost,
    mul,
    one,
    restrict,
    teichmuller,
    verschiebung,
)
from witt.epsilon import check_family, decompose, epsilon_family, reassemble
from witt.errors import IndexOutsideS, InvalidRing, ParseError, WittError
from witt.finite import maximal_ideal_report, verify_maximal_ideal_lemma, verify_points_lemma
from witt.rings import IntegersModM, RingDescriptor, RingValue, parse_ring
from witt.truncation import TruncationSet, parse_truncation_set
from witt.zbasis import to_vbasis, vbasis_product

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so run() owns the exit code."""

    def error(self, message):
        raise UsageError(message)


def parse_values(text: str, ring: RingDescriptor) -> List[RingValue]:
    """Coordinates separated by ';' when present, otherwise by ','."""
    separator = ";" if ";" in text else ","
    return [ring.parse(part.strip()) for part in text.split(separator) if part.strip()]


def parse_operand(text: str, S: TruncationSet, ring: RingDescriptor) -> WittVector:
    """A coordinate list, or the shorthand Vk for V_k(1) and Tc for the Teichmuller lift [c]."""
    text = text.strip()
    if text[:1] in ("V", "v") and text[1:].isdigit():
        k = int(text[1:])
        if k not in S:
            raise IndexOutsideS(f"{k} is not in {S}", index=k, S=S.to_json())
        return verschiebung(k, one(S.quotient(k), ring), S)
    if text[:1] in ("T", "t") and len(text) > 1:
        return teichmuller(ring.parse(text[1:]), S)
    return WittVector(S, ring, tuple(parse_values(text, ring)))


def load_object(spec: str, Q: TruncationSet, ring: RingDescriptor) -> PhiObject:
    """unit, tate:B, graded:Q:D, or a path to object JSON."""
    parts = spec.split(":")
    try:
        if parts[0] == "unit" and len(parts) == 1:
            return unit(Q, ring)
        if parts[0] == "tate" and len(parts) == 2:
            return tate(int(parts[1]), Q, ring)
        if parts[0] == "graded" and len(parts) == 3:
            return graded_piece(int(parts[1]), int(parts[2]), Q, ring)
    except ValueError as e:
        raise ParseError(f"cannot parse object '{spec}': {e}")
    return object_from_model(PhiObjectModel.model_validate(load_json(spec)))


def load_morphism(spec: str, M: PhiObject) -> PhiMorphism:
    """scalar:K, diag:a,b,..., teich:c on M, or a path to morphism JSON."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "scalar":
            return scalar_morphism(M, int(rest))
        if kind == "diag":
            return diagonal_morphism(M, [int(v) for v in rest.split(",")])
        if kind == "teich":
            return teichmuller_morphism(M, M.ring.parse(rest))
    except ValueError as e:
        raise ParseError(f"cannot parse morphism '{spec}': {e}")
    return morphism_from_model(PhiMorphismModel.model_validate(load_json(spec)))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="witt", description="Big Witt vectors and phi-modules")
    commands = parser.add_subparsers(dest="command", required=True)

    def witt_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--ring", default=None,
                         help="z, q, zmod:M, zp:P, poly:x,y, quot:x:c0,c1,..[:M]; z by default, zp:P for eps and decompose")
        sub.add_argument("-S", "--S", required=True, help="truncation set, e.g. 1,2,3,6")
        return sub

    witt_command("ghost", "ghost components").add_argument("--coords", required=True)
    witt_command("unghost", "Witt coordinates from ghost components").add_argument("--ghost", required=True)
    for name in ("add", "mul"):
        sub = witt_command(name, f"{name} two Witt vectors")
        sub.add_argument("--a", required=True)
        sub.add_argument("--b", required=True)
    sub = witt_command("frob", "Frobenius F_n: W_S -> W_{S/n}")
    sub.add_argument("-n", "--n", type=int, required=True)
    sub.add_argument("--coords", required=True)
    sub = witt_command("ver", "Verschiebung V_n: W_{S/n} -> W_S")
    sub.add_argument("-n", "--n", type=int, required=True)
    sub.add_argument("--coords", required=True, help="coordinates over S/n")
    sub = witt_command("restrict", "restriction W_S -> W_T")
    sub.add_argument("-T", "--T", required=True)
    sub.add_argument("--coords", required=True)
    sub = witt_command("exactseq", "exactness of 0 -> W_{S/n} -> W_S -> W_T -> 0 over a finite ring")
    sub.add_argument("-n", "--n", type=int, required=True)
    sub.add_argument("--cap", type=int, default=WITT_FINITE_CAP)
    sub = witt_command("zbasis", "expansion in the basis V_n(1) of W_S(Z)")
    sub.add_argument("--coords")
    sub.add_argument("--product", help="m,n: the structure constant of V_m(1) V_n(1)")
    sub = witt_command("eps", "the idempotents eps_n over a Z_(p)-algebra")
    sub.add_argument("-p", "--p", type=int, required=True)
    sub = witt_command("decompose", "p-typical components of a Witt vector")
    sub.add_argument("-p", "--p", type=int, required=True)
    sub.add_argument("--coords", required=True)
    sub = commands.add_parser("reassemble", help="inverse of decompose")
    sub.add_argument("--ring", default=None)
    sub.add_argument("-S", "--S", required=True)
    sub.add_argument("-p", "--p", type=int, required=True)
    sub.add_argument("--file", required=True, help="JSON output of decompose")
    sub = witt_command("finite", "maximal ideals of W_S(A) for finite A")
    sub.add_argument("--lemma", choices=("ideals", "maximal", "points"), default="ideals")
    sub.add_argument("--maximal-ideals", dest="lemma", action="store_const", const="ideals",
                     default=argparse.SUPPRESS, help="same as --lemma ideals")
    sub.add_argument("-p", "--p", type=int)
    sub.add_argument("--j", type=int, default=1)
    sub.add_argument("--cap", type=int, default=WITT_FINITE_CAP)

    sub = commands.add_parser("phimod", help="phi-modules over W(R)")
    sub.add_argument("action", choices=(
        "build", "validate", "tensor", "hom", "dual", "tangent", "harness", "reduce", "adjunction",
    ))
    sub.add_argument("--ring", default="z")
    sub.add_argument("--Q", default="1,2", help="ambient truncation set")
    sub.add_argument("--object", action="append", default=[], help="unit, tate:B, graded:Q:D or a JSON file")
    sub.add_argument("--morphism", default="scalar:1", help="scalar:K, diag:a,b, teich:c or a JSON file")
    sub.add_argument("--p", type=int, default=2)
    sub.add_argument("--samples", type=int, default=WITT_LAMBDA_SAMPLES)
    sub.add_argument("--seed", type=int, default=WITT_SEED)

    sub = commands.add_parser("verify", help="run identity suites")
    sub.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    sub.add_argument("--max", type=int, default=12)
    sub.add_argument("--samples", type=int, default=WITT_LAMBDA_SAMPLES)
    sub.add_argument("--seed", type=int, default=WITT_SEED)
    return parser


def _objects(args, count: int) -> List[PhiObject]:
    if len(args.object) != count:
        raise ParseError(f"phimod {args.action} takes {count} --object argument(s), got {len(args.object)}")
    Q, ring = parse_truncation_set(args.Q), parse_ring(args.ring)
    return [load_object(spec, Q, ring) for spec in args.object]


def run_phimod(args) -> Any:
    action = args.action
    if action in ("build", "validate", "dual", "tangent", "harness", "reduce"):
        M = _objects(args, 1)[0]
        if action == "build":
            return object_to_model(M)
        if action == "validate":
            return validate(M, args.samples, args.seed)
        if action == "dual":
            return object_to_model(dual(M))
        if action == "tangent":
            return tangent(M)
        if action == "reduce":
            return p_typical_reduction_check(M, args.p, seed=args.seed)
        f = load_morphism(args.morphism, M)
        check = hom_set_check(f.source, f.target, f.mats)
        harness = conservativity_harness(f)
        return {"hom_check": check.model_dump(), "harness": harness.model_dump(), "passed": harness.passed}
    if action in ("tensor", "hom"):
        M, N = _objects(args, 2)
        return object_to_model(tensor(M, N) if action == "tensor" else internal_hom(M, N))
    M, N, P = _objects(args, 3)
    return hom_adjunction_check(M, N, P)


def _default_ring(command: str, args) -> str:
    """Z_(p) for the p-typical commands, Z otherwise."""
    if command in ("eps", "decompose"):
        return f"zp:{args.p}"
    return "z"


def dispatch(args) -> Any:
    """The JSON payload for one parsed command."""
    command = args.command
    if command == "verify":
        reports = run_suite(args.suite, args.max, args.samples, args.seed)
        return {"suites": [r.model_dump() for r in reports], "passed": all(r.passed for r in reports)}
    if command == "phimod":
        return run_phimod(args)

    S = parse_truncation_set(args.S)
    if command == "reassemble":
        data = load_json(args.file)
        components = {int(n): decode_vector(v) for n, v in data.get("components", {}).items()}
        ring = parse_ring(args.ring) if args.ring else None
        return encode_vector(reassemble(components, S, args.p, ring))

    ring = parse_ring(args.ring or _default_ring(command, args))
    if getattr(args, "n", None) is not None and args.n < 1:
        raise ParseError(f"n must be a positive integer, got {args.n}", n=args.n)
    if command == "ghost":
        return {"ghost": encode_ghost(ghost(parse_operand(args.coords, S, ring)))}
    if command == "unghost":
        return encode_vector(from_ghost(GhostVector(S, ring, tuple(parse_values(args.ghost, ring)))))
    if command in ("add", "mul"):
        operation = add if command == "add" else mul
        return encode_vector(operation(parse_operand(args.a, S, ring), parse_operand(args.b, S, ring)))
    if command == "frob":
        return encode_vector(frobenius(args.n, parse_operand(args.coords, S, ring)))
    if command == "ver":
        return encode_vector(verschiebung(args.n, parse_operand(args.coords, S.quotient(args.n), ring), S))
    if command == "restrict":
        return encode_vector(restrict(parse_operand(args.coords, S, ring), parse_truncation_set(args.T)))
    if command == "exactseq":
        return exact_sequence_check(ring, S, args.n, args.cap)
    if command == "zbasis":
        payload: Dict[str, Any] = {"S": S.to_json()}
        if args.coords:
            w = parse_operand(args.coords, S, ring)
            payload["coords"] = encode_coords(w)
            payload["coeffs"] = [str(c) for c in to_vbasis(w).coeffs]
        if args.product:
            m, n = (int(v) for v in args.product.split(","))
            c, index = vbasis_product(m, n, S)
            payload["product"] = {"coefficient": str(c), "index": index}
        return payload
    if command == "eps":
        family = epsilon_family(S, args.p, ring)
        return {
            "S": S.to_json(),
            "p": args.p,
            "idempotents": {str(n): encode_coords(e) for n, e in sorted(family.idempotents.items())},
            "check": check_family(family).model_dump(),
        }
    if command == "decompose":
        components = decompose(parse_operand(args.coords, S, ring), args.p)
        return {"p": args.p, "components": {str(n): encode_vector(c) for n, c in sorted(components.items())}}
    if command == "finite":
        if args.lemma == "maximal":
            if args.p is None:
                raise ParseError("finite --lemma maximal needs --p")
            return verify_maximal_ideal_lemma(args.p, S, args.j, args.cap)
        if args.lemma == "points":
            if not isinstance(ring, IntegersModM):
                raise InvalidRing(f"the points lemma runs over Z/m, not {ring.label()}", ring=ring.label())
            return verify_points_lemma(ring.m, S, args.cap)
        return maximal_ideal_report(ring, S, args.cap)
    raise UsageError(f"unknown command {command}")


def _passed(payload: Any) -> bool:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    if isinstance(payload, dict) and payload.get("passed") is False:
        return False
    return True


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv, run one command and print its JSON result on stdout.

    Returns:
        int: 0 on success, 2 on a domain or usage error (a JSON error object is
        printed), 1 when an identity fails or a report does not pass.
    """
    setup_logging(LOG_FILE, LOG_LEVEL)
    try:
        args = build_parser().parse_args(argv)
        payload = dispatch(args)
    except UsageError as e:
        print(dumps({"error": "UsageError", "message": str(e)}))
        return 2
    except WittError as e:
        logger.warning(f"{e.code}: {e.message}")
        print(dumps(e.to_dict()))
        return 2
    except Exception as e:
        logger.error(f"Internal failure: {e}\n{traceback.format_exc()}")
        print(dumps({"error": type(e).__name__, "message": str(e)}))
        return 1
    print(dumps(payload))
    return 0 if _passed(payload) else 1


if __name__ == "__main__":
    sys.exit(run())
