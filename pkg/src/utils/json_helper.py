# json_helper.py

import json
from typing import Any, Dict, List

from pydantic import BaseModel

from witt.core import GhostVector, WittVector
from witt.errors import ParseError, ShapeMismatch
from witt.rings import ring_from_json
from witt.truncation import TruncationSet


def dumps(payload: Any) -> str:
    """
    Canonical JSON: sorted keys, no whitespace, so equal inputs give equal bytes.

    Args:
        payload (Any): A pydantic model or plain JSON data.

    Returns:
        str: The encoded document.
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def encode_coords(w: WittVector) -> List[Any]:
    return [w.ring.encode(c) for c in w.coords]


def encode_vector(w: WittVector) -> Dict[str, Any]:
    return {"S": w.S.to_json(), "ring": w.ring.describe(), "coords": encode_coords(w)}


def encode_ghost(g: GhostVector) -> List[Any]:
    return [g.ring.encode(c) for c in g.components]


def decode_vector(data: Dict[str, Any]) -> WittVector:
    """
    Raises:
        ParseError: A field is missing.
        ShapeMismatch: The coordinates do not match S.
    """
    try:
        S = TruncationSet.validate(data["S"])
        ring = ring_from_json(data["ring"])
        coords = data["coords"]
    except KeyError as e:
        raise ParseError(f"Witt vector JSON is missing {e}")
    if len(coords) != len(S):
        raise ShapeMismatch(f"{len(coords)} coordinates for {S}", S=S.to_json())
    return WittVector(S, ring, tuple(ring.decode(c) for c in coords))


def load_json(path: str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read JSON from {path}: {e}")
