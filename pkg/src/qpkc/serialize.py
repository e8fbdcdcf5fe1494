"""JSON formats for keys, states, ciphers, authentication keys and signature transcripts."""
from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .ecurve import Curve, Point
from .errors import ParameterError
from .gf2 import BitWord, GF2Matrix, LinearCode
from .qauth import AuthKey
from .qpke import CipherState, KeyPair, PublicKey
from .qsim import PureState

FORMAT_VERSION = 1


@lru_cache(maxsize=None)
def schema() -> dict:
    return json.loads(resources.files("qpkc").joinpath("schema.json").read_text())


def validate(obj: dict) -> dict:
    """Check a document against the bundled schema; raises ``ParameterError``."""
    try:
        jsonschema.validate(obj, schema())
    except jsonschema.ValidationError as exc:
        raise ParameterError(f"schema violation at {list(exc.absolute_path)}: {exc.message}") from None
    return obj


def encode_value(v: Any) -> dict:
    if isinstance(v, bool):
        raise TypeError("booleans are not key material")
    if isinstance(v, int):
        return {"type": "int", "value": v}
    if isinstance(v, GF2Matrix):
        return {"type": "matrix", "value": v.to_json()}
    if isinstance(v, LinearCode):
        return {"type": "code", "value": v.to_json()}
    if isinstance(v, Point):
        return {"type": "point", "value": v.to_json()}
    if isinstance(v, Curve):
        return {"type": "curve", "value": v.to_json()}
    if isinstance(v, (tuple, list)) and all(isinstance(x, int) for x in v):
        return {"type": "ints", "value": [int(x) for x in v]}
    raise TypeError(f"cannot serialise {type(v).__name__}")


_DECODERS = {
    "int": int,
    "matrix": GF2Matrix.from_json,
    "code": LinearCode.from_json,
    "point": Point.from_json,
    "curve": Curve.from_json,
    "ints": lambda v: tuple(int(x) for x in v),
}


def decode_value(obj: dict) -> Any:
    return _DECODERS[obj["type"]](obj["value"])


def _encode_params(params: dict) -> dict:
    return {k: encode_value(v) for k, v in sorted(params.items())}


def _decode_params(obj: dict) -> dict:
    return {k: decode_value(v) for k, v in obj.items()}


def public_key_to_json(pk: PublicKey) -> dict:
    return {"kind": "public-key", "version": FORMAT_VERSION, "scheme": pk.scheme, "public": _encode_params(pk.params)}


def key_to_json(kp: KeyPair) -> dict:
    return {
        "kind": "keypair",
        "version": FORMAT_VERSION,
        "scheme": kp.scheme,
        "public": _encode_params(kp.public.params),
        "private": _encode_params(kp.private),
    }


def key_from_json(obj: dict) -> KeyPair | PublicKey:
    validate(obj)
    pk = PublicKey(obj["scheme"], _decode_params(obj["public"]))
    if obj["kind"] == "public-key":
        return pk
    if obj["kind"] != "keypair":
        raise ParameterError(f"expected a key document, got {obj['kind']!r}")
    return KeyPair(pk, _decode_params(obj["private"]))


def fingerprint(pk: PublicKey) -> str:
    """First 16 hex digits of SHA-256 over the canonical public-key JSON."""
    return hashlib.sha256(dumps(public_key_to_json(pk)).encode()).hexdigest()[:16]


def state_to_json(st: PureState) -> dict:
    return {"kind": "state", "version": FORMAT_VERSION, **st.to_json()}


def state_from_json(obj: dict) -> PureState:
    validate(obj)
    if obj["kind"] != "state":
        raise ParameterError(f"expected a state document, got {obj['kind']!r}")
    return PureState.from_json(obj)


def cipher_to_json(c: CipherState) -> dict:
    return {
        "kind": "cipher",
        "version": FORMAT_VERSION,
        "scheme": c.scheme,
        "classical": list(c.classical),
        "state": c.state.to_json(),
    }


def cipher_from_json(obj: dict) -> CipherState:
    validate(obj)
    if obj["kind"] != "cipher":
        raise ParameterError(f"expected a cipher document, got {obj['kind']!r}")
    return CipherState(obj["scheme"], PureState.from_json(obj["state"]), tuple(obj["classical"]))


def auth_key_to_json(key: AuthKey) -> dict:
    return {"kind": "auth-key", "version": FORMAT_VERSION, **key.to_json()}


def auth_key_from_json(obj: dict) -> AuthKey:
    validate(obj)
    if obj["kind"] != "auth-key":
        raise ParameterError(f"expected an auth-key document, got {obj['kind']!r}")
    return AuthKey.from_json(obj)


def bitword_from_json(obj: dict) -> BitWord:
    return BitWord.from_json(obj)


def dumps(obj: dict) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: str | Path, obj: dict) -> None:
    Path(path).write_text(dumps(validate(obj)))


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: not valid JSON ({exc})") from None
