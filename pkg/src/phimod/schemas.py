# schemas.py

from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from phimod.matrices import WittMatrix
from phimod.objects import BetaData, PhiMorphism, PhiObject, check_phi_ring
from utils.json_helper import encode_coords
from witt.core import WittVector
from witt.errors import ParseError, ShapeMismatch
from witt.rings import RingDescriptor, ring_from_json
from witt.truncation import TruncationSet


class MatrixModel(BaseModel):
    S: List[int]
    shape: List[int]
    # rows x cols, each entry its Witt coordinates in the order of S
    entries: List[List[List[Any]]]


class BetaModel(BaseModel):
    B: MatrixModel
    C: MatrixModel


class PhiDataModel(BaseModel):
    S: List[int]
    n: int
    phi: MatrixModel
    beta: BetaModel


class PhiObjectModel(BaseModel):
    name: str = ""
    Q: List[int]
    ring: Dict[str, Any]
    rank: int
    a: int
    twist: int
    maps: List[PhiDataModel]


class MorphismEntryModel(BaseModel):
    S: List[int]
    matrix: MatrixModel


class PhiMorphismModel(BaseModel):
    source: PhiObjectModel
    target: PhiObjectModel
    mats: List[MorphismEntryModel]


class Failure(BaseModel):
    axiom: str
    S: List[int]
    n: Optional[int] = None
    m: Optional[int] = None
    witness: str = ""


class ValidationReport(BaseModel):
    object: str
    checks: int
    passed: bool
    failures: List[Failure]


class HomCheckReport(BaseModel):
    source: str
    target: str
    is_morphism: bool
    commutes_with_restriction: bool
    phi_condition: bool
    beta_condition: bool
    beta_commutation: str


class AdjunctionReport(BaseModel):
    objects: List[str]
    hom_tensor_adjunction: bool
    hom_is_dual_tensor: bool
    double_dual: bool
    global_sections: bool
    passed: bool
    failures: List[str]


class TangentModel(BaseModel):
    object: str
    ring: Dict[str, Any]
    rank: int
    a: int
    twist: int


class HarnessReport(BaseModel):
    morphism: str
    tangent: List[List[Any]]
    faithful: str
    conservative: str
    passed: bool
    counterexample: Optional[str] = None


class ReductionReport(BaseModel):
    object: str
    ring: str
    p: int
    checks: int
    passed: bool
    failures: List[Failure]


def encode_matrix(m: WittMatrix) -> MatrixModel:
    return MatrixModel(
        S=m.S.to_json(),
        shape=list(m.shape),
        entries=[[encode_coords(w) for w in row] for row in m.entries()],
    )


def decode_matrix(model: MatrixModel, ring: RingDescriptor) -> WittMatrix:
    S = TruncationSet.validate(model.S)
    rows, cols = model.shape
    if len(model.entries) != rows or any(len(row) != cols for row in model.entries):
        raise ShapeMismatch(f"matrix entries do not match the shape {model.shape}")
    if rows == 0 or cols == 0:
        return WittMatrix.zeros((rows, cols), S, ring)
    decoded = [
        [WittVector(S, ring, tuple(ring.decode(c) for c in coords)) for coords in row]
        for row in model.entries
    ]
    return WittMatrix.from_entries(S, ring, decoded)


def object_to_model(M: PhiObject) -> PhiObjectModel:
    maps = []
    for (S, n) in M.keys():
        data = M.beta[(S, n)]
        maps.append(PhiDataModel(
            S=S.to_json(), n=n,
            phi=encode_matrix(M.phi[(S, n)]),
            beta=BetaModel(B=encode_matrix(data.B), C=encode_matrix(data.C)),
        ))
    return PhiObjectModel(
        name=M.name, Q=M.Q.to_json(), ring=M.ring.describe(),
        rank=M.rank, a=M.a, twist=M.twist, maps=maps,
    )


def object_from_model(model: PhiObjectModel) -> PhiObject:
    """
    Raises:
        ParseError: Some (S, n) with S in Q and n in S has no data.
    """
    Q = TruncationSet.validate(model.Q)
    ring = check_phi_ring(ring_from_json(model.ring))
    phi, beta = {}, {}
    for entry in model.maps:
        key = (TruncationSet.validate(entry.S), entry.n)
        phi[key] = decode_matrix(entry.phi, ring)
        beta[key] = BetaData(decode_matrix(entry.beta.B, ring), decode_matrix(entry.beta.C, ring))
    missing = [(S.to_json(), n) for S in Q.subsets() for n in S if (S, n) not in phi]
    if missing:
        raise ParseError(f"phi-module data is missing for {missing[:3]}", missing=len(missing))
    return PhiObject(Q, ring, model.rank, model.a, model.twist, phi, beta, model.name)


def morphism_to_model(f: PhiMorphism) -> PhiMorphismModel:
    return PhiMorphismModel(
        source=object_to_model(f.source),
        target=object_to_model(f.target),
        mats=[MorphismEntryModel(S=S.to_json(), matrix=encode_matrix(m)) for S, m in sorted(
            f.mats.items(), key=lambda item: (len(item[0]), item[0].elements))],
    )


def morphism_from_model(model: PhiMorphismModel) -> PhiMorphism:
    source = object_from_model(model.source)
    target = object_from_model(model.target)
    mats = {TruncationSet.validate(e.S): decode_matrix(e.matrix, source.ring) for e in model.mats}
    return PhiMorphism(source, target, mats)
