import json

import numpy as np
import pytest

from qpkc import qpke, serialize
from qpkc.errors import ParameterError
from qpkc.qauth import auth_keygen
from qpkc.qsign import make_instance, run_session
from qpkc.qsim import PureState, overlap

PARAMS = {
    "rsa": {"p": 3, "q": 5},
    "elgamal": {"p": 11},
    "gm": {"p": 3, "q": 5, "k": 2},
    "ecc": {},
    "mceliece": {},
    "niederreiter": {},
    "otu": {},
}


@pytest.mark.parametrize("sid", sorted(PARAMS))
def test_keypair_round_trip(sid):
    kp = qpke.keygen(sid, PARAMS[sid], np.random.default_rng(0))
    doc = json.loads(serialize.dumps(serialize.key_to_json(kp)))
    back = serialize.key_from_json(doc)
    assert back.scheme == sid
    assert back.public.params == kp.public.params and back.private == kp.private
    pub = serialize.key_from_json(serialize.public_key_to_json(kp.public))
    assert pub.params == kp.public.params


@pytest.mark.parametrize("sid", sorted(PARAMS))
def test_cipher_round_trip(sid):
    rng = np.random.default_rng(1)
    kp = qpke.keygen(sid, PARAMS[sid], rng)
    psi = qpke.random_message(kp, rng)
    c = qpke.encrypt(kp, psi, qpke.sample_randomness(kp, rng))
    back = serialize.cipher_from_json(json.loads(serialize.dumps(serialize.cipher_to_json(c))))
    assert back.scheme == c.scheme and back.classical == c.classical
    assert back.state.layout == c.state.layout and overlap(back.state, c.state) == pytest.approx(1.0, abs=1e-12)
    out, _ = qpke.decrypt(kp, back, rng)
    assert overlap(out, psi) >= 1 - 1e-9


def test_state_and_auth_key():
    st = PureState.from_register("m", 3, {1: 1, 6: -1j}, normalize=True)
    back = serialize.state_from_json(json.loads(serialize.dumps(serialize.state_to_json(st))))
    assert back.amplitudes == pytest.approx(st.amplitudes)
    key = auth_keygen(4, 8, np.random.default_rng(2))
    assert serialize.auth_key_from_json(serialize.auth_key_to_json(key)) == key


def test_fingerprint_stable_and_distinct():
    a = qpke.keygen("rsa", {"p": 3, "q": 5, "e": 3})
    b = qpke.keygen("rsa", {"p": 3, "q": 5, "e": 7})
    assert serialize.fingerprint(a.public) == serialize.fingerprint(a.public)
    assert serialize.fingerprint(a.public) != serialize.fingerprint(b.public)
    assert len(serialize.fingerprint(a.public)) == 16


def test_transcript_validates():
    inst, kp = make_instance("rsa", {}, np.random.default_rng(0))
    s, _ = run_session(inst, kp, PureState.from_register("m", 2, {1: 1.0}), np.random.default_rng(1), np.random.default_rng(2))
    doc = {
        "kind": "transcript",
        "version": 1,
        "instance": "rsa",
        "public_key": serialize.public_key_to_json(kp.public),
        "seed": 0,
        "tamper": None,
        "steps": s.transcript,
    }
    serialize.validate(json.loads(serialize.dumps(doc)))


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "state", "version": 1},
        {"kind": "cipher", "version": 2, "scheme": "rsa", "classical": [], "state": {}},
        {"kind": "banana", "version": 1},
        {"kind": "transcript", "version": 1, "instance": "rsa", "public_key": {}, "seed": 0, "tamper": None,
         "steps": [{"step": "gossip", "direction": "x", "payload": {}}]},
    ],
)
def test_schema_rejects(doc):
    with pytest.raises(ParameterError):
        serialize.validate(doc)


def test_wrong_kind_rejected():
    kp = qpke.keygen("rsa", {}, np.random.default_rng(0))
    with pytest.raises(ParameterError):
        serialize.cipher_from_json(serialize.key_to_json(kp))


def test_dumps_is_canonical():
    assert serialize.dumps({"b": 1, "a": [2]}) == '{\n  "a": [\n    2\n  ],\n  "b": 1\n}\n'
