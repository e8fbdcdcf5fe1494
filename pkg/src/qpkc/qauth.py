"""Public-key integrity check for quantum messages via a systematic linear code.

A message ``sum a_m |m>`` is mapped to ``sum a_m |m G_s>`` with
``G_s = [I_k | A]``, i.e. the tag ``a(m) = mA`` sits next to ``m``. The
receiver recomputes the syndrome and the codeword residue into fresh
registers and measures them: all-zero means accept.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionError, ParameterError
from .gf2 import BitWord, GF2Matrix, generalized_right_inverse
from .qpke import KeyPair, decrypt, encrypt
from .qpke.base import CipherState
from .qsim import PureState, RegisterLayout, apply_hadamard, apply_uncompute, apply_xor_oracle, measure_register

MESSAGE = "m"
CODEWORD = "c"
IDENTITY = "id"
MAX_IDENTITY_WIDTH = 8

ACCEPT = "accept"
REJECT = "reject"


@dataclass(frozen=True)
class AuthKey:
    G_s: GF2Matrix
    H_s: GF2Matrix
    G_s_inv: GF2Matrix

    def __post_init__(self):
        k, n = self.G_s.shape
        if self.H_s.shape != (n - k, n):
            raise DimensionError("H_s must be (n-k) x n")
        if (self.G_s @ self.H_s.T).data.any():
            raise ParameterError("G_s H_s^T != 0")
        if self.G_s @ self.G_s_inv != GF2Matrix.identity(k):
            raise ParameterError("G_s G_s_inv != I")

    @property
    def k(self) -> int:
        return self.G_s.rows

    @property
    def n(self) -> int:
        return self.G_s.cols

    @classmethod
    def from_tag_matrix(cls, a: GF2Matrix) -> "AuthKey":
        """``G_s = [I | A]`` and ``H_s = [A^T | I]`` (over GF(2) ``-A^T = A^T``)."""
        k, r = a.shape
        g = GF2Matrix.hstack(GF2Matrix.identity(k), a)
        h = GF2Matrix.hstack(a.T, GF2Matrix.identity(r))
        return cls(g, h, generalized_right_inverse(g))

    @property
    def tag_matrix(self) -> GF2Matrix:
        return GF2Matrix(self.G_s.data[:, self.k:])

    def to_json(self) -> dict:
        return {"G_s": self.G_s.to_json(), "H_s": self.H_s.to_json(), "G_s_inv": self.G_s_inv.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "AuthKey":
        return cls(*(GF2Matrix.from_json(obj[f]) for f in ("G_s", "H_s", "G_s_inv")))


def auth_keygen(k: int, n: int, rng: np.random.Generator) -> AuthKey:
    """Random tag matrix ``A`` of shape ``k x (n-k)``."""
    if not 0 < k < n:
        raise ParameterError("need 0 < k < n")
    return AuthKey.from_tag_matrix(GF2Matrix(rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)))


@dataclass(frozen=True)
class AuthTag:
    outcome: str
    message: PureState | None = None
    identity: BitWord | None = None
    syndrome: BitWord | None = None

    @property
    def accepted(self) -> bool:
        return self.outcome == ACCEPT


def _require_register(state: PureState, name: str, width: int) -> None:
    if name not in state.layout or state.layout.width_of(name) != width:
        raise DimensionError(f"expected register {name!r} of width {width}, layout is {state.layout.registers}")


def auth_encode(msg: PureState, key: AuthKey) -> PureState:
    """``sum a_m |m> -> sum a_m |m G_s>`` with the message register cleared."""
    if msg.layout != RegisterLayout.of((MESSAGE, key.k)):
        raise DimensionError(f"message must be a single register {MESSAGE!r} of width {key.k}")
    st = msg.extend(CODEWORD, key.n)
    st = apply_xor_oracle(st, key.G_s.mul_int, [MESSAGE], CODEWORD)
    st = apply_uncompute(st, key.G_s_inv.mul_int, [CODEWORD], MESSAGE)
    return st.drop_zero(MESSAGE)


def auth_verify(state: PureState, key: AuthKey, rng: np.random.Generator) -> AuthTag:
    """Extract the message and measure the syndrome and residue registers; accept iff both read zero."""
    if state.layout != RegisterLayout.of((CODEWORD, key.n)):
        raise DimensionError(f"expected a single register {CODEWORD!r} of width {key.n}")
    st = state.extend("s", key.n - key.k).extend(MESSAGE, key.k)
    st = apply_xor_oracle(st, key.G_s_inv.mul_int, [CODEWORD], MESSAGE)
    st = apply_xor_oracle(st, key.H_s.T.mul_int, [CODEWORD], "s")
    st = apply_xor_oracle(st, key.G_s.mul_int, [MESSAGE], CODEWORD)
    syn, st = measure_register(st, "s", rng)
    residue, st = measure_register(st, CODEWORD, rng)
    if syn.value or residue.value:
        return AuthTag(REJECT, syndrome=syn)
    st = st.drop_zero(CODEWORD).drop_zero("s")
    return AuthTag(ACCEPT, message=st, syndrome=syn)


def auth_encode_with_identity(msg: PureState, key: AuthKey, identity: BitWord) -> PureState:
    """Encoded message preceded by ``H^l |S>`` in an identity register."""
    if not 1 <= identity.width <= MAX_IDENTITY_WIDTH:
        raise DimensionError(f"identity width must be in [1, {MAX_IDENTITY_WIDTH}]")
    ident = apply_hadamard(PureState.from_register(IDENTITY, identity.width, {identity.value: 1.0}), IDENTITY)
    return ident.tensor(auth_encode(msg, key))


def auth_verify_with_identity(state: PureState, key: AuthKey, rng: np.random.Generator) -> AuthTag:
    names = state.layout.names
    if names != (IDENTITY, CODEWORD):
        raise DimensionError(f"expected registers ({IDENTITY!r}, {CODEWORD!r}), got {names}")
    st = apply_hadamard(state, IDENTITY)
    ident, st = measure_register(st, IDENTITY, rng)
    _, st = st.discard(IDENTITY)
    tag = auth_verify(st, key, rng)
    return AuthTag(tag.outcome, tag.message, ident, tag.syndrome)


def undetected_tampers(key: AuthKey) -> set[int]:
    """Nonzero error words ``e`` for which ``mG_s XOR e`` still passes verification."""
    out = set()
    h_t, g_inv, g = key.H_s.T, key.G_s_inv, key.G_s
    for e in range(1, 1 << key.n):
        if h_t.mul_int(e) == 0 and g.mul_int(g_inv.mul_int(e)) == e:
            out.add(e)
    return out


# generic tag function a(m): message kept in the clear, tag checked by recomputation


def generic_tag(msg: PureState, a: Callable[[int], int], tag_width: int, tag_register: str = "a") -> PureState:
    """``sum a_m |m> -> sum a_m |m>|a(m)>``."""
    return apply_xor_oracle(msg.extend(tag_register, tag_width), a, [MESSAGE], tag_register)


def generic_check(
    state: PureState, a: Callable[[int], int], rng: np.random.Generator, tag_register: str = "a"
) -> AuthTag:
    st = apply_xor_oracle(state, a, [MESSAGE], tag_register)
    residue, st = measure_register(st, tag_register, rng)
    if residue.value:
        return AuthTag(REJECT)
    return AuthTag(ACCEPT, message=st.drop_zero(tag_register))


# transport: encoded state sent under a quantum public-key scheme


def seal_for_transport(msg: PureState, key: AuthKey, transport: KeyPair, r: BitWord | int) -> CipherState:
    """Encode, then encrypt the codeword register with the receiver's public key."""
    encoded = auth_encode(msg, key).rename({CODEWORD: MESSAGE})
    return encrypt(transport.public, encoded, r)


def open_from_transport(
    cipher: CipherState, key: AuthKey, transport: KeyPair, rng: np.random.Generator
) -> AuthTag:
    encoded, _ = decrypt(transport, cipher, rng)
    _require_register(encoded, MESSAGE, key.n)
    return auth_verify(encoded.rename({MESSAGE: CODEWORD}), key, rng)
