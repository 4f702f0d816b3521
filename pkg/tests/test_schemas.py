import json

import pytest

from phimod.matrices import WittMatrix
from phimod.objects import direct_sum, identity_morphism, same_object, scalar_morphism, tate, unit
from phimod.schemas import (
    MatrixModel,
    PhiMorphismModel,
    PhiObjectModel,
    decode_matrix,
    encode_matrix,
    morphism_from_model,
    morphism_to_model,
    object_from_model,
    object_to_model,
)
from phimod.validation import is_morphism
from utils.json_helper import decode_vector, dumps, encode_vector
from witt.core import WittVector
from witt.errors import InvalidRing, ParseError, ShapeMismatch
from witt.rings import Integers, IntegersModM, Rationals
from witt.truncation import TruncationSet

Z = Integers()
Q12 = TruncationSet.up_to(2)


def test_matrix_entries_are_witt_coordinates():
    model = encode_matrix(WittMatrix.from_ints(Q12, Z, [[2]]))
    assert model.S == [1, 2]
    assert model.entries == [[["2", "-1"]]]
    assert decode_matrix(model, Z) == WittMatrix.from_ints(Q12, Z, [[2]])


def test_matrix_shape_is_checked():
    model = MatrixModel(S=[1, 2], shape=[2, 1], entries=[[["1", "0"]]])
    with pytest.raises(ShapeMismatch):
        decode_matrix(model, Z)


def test_object_survives_json():
    M = direct_sum(unit(Q12, Rationals()), tate(-1, Q12, Rationals()))
    text = dumps(object_to_model(M))
    back = object_from_model(PhiObjectModel.model_validate_json(text))
    assert same_object(back, M)
    assert (back.a, back.twist, back.name) == (M.a, M.twist, M.name)


def test_missing_data_is_a_parse_error():
    model = object_to_model(tate(-1, Q12, Z))
    model.maps = model.maps[:-1]
    with pytest.raises(ParseError):
        object_from_model(model)


def test_object_ring_must_be_torsion_free():
    model = object_to_model(unit(Q12, Z))
    model.ring = IntegersModM(4).describe()
    with pytest.raises(InvalidRing):
        object_from_model(model)


def test_morphism_survives_json():
    f = scalar_morphism(tate(-1, Q12, Z), 5)
    data = json.loads(dumps(morphism_to_model(f)))
    g = morphism_from_model(PhiMorphismModel.model_validate(data))
    assert all(g.mats[S] == f.mats[S] for S in f.mats)
    assert is_morphism(g)
    assert [entry["S"] for entry in data["mats"]] == [[1], [1, 2]]


def test_dumps_is_canonical():
    f = identity_morphism(unit(Q12, Z))
    assert dumps(morphism_to_model(f)) == dumps(morphism_to_model(f))
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_vector_json():
    w = WittVector.of(Q12, IntegersModM(4), [3, 1])
    data = encode_vector(w)
    assert data["coords"] == [{"mod": "4", "val": "3"}, {"mod": "4", "val": "1"}]
    assert decode_vector(data) == w
    with pytest.raises(ParseError):
        decode_vector({"S": [1]})
    with pytest.raises(ShapeMismatch):
        decode_vector({"S": [1, 2], "ring": Z.describe(), "coords": ["1"]})
