"""Interactive signatures that seal a quantum message until it is extracted.

Bob sends a challenge ``r_B``; Alice picks ``r_A`` and uses her trapdoor to
find ``(r, r')`` with ``f(r, r') = (r_B, r_A)``, then attaches
``|f(m, r)>`` to every branch of the message. Only after Bob acknowledges
receipt does Alice reveal ``(r, r')``; Bob checks the challenge, clears the
tag with ``r`` and measures it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import DecodingError, ParameterError, ProtocolError, SeparabilityError
from .gf2 import BitWord, generalized_right_inverse, syndrome_decode, words_of_weight
from .qpke import KeyPair, PublicKey, keygen
from .qsim import PureState, RegisterLayout, apply_xor_oracle, measure_register

__all__ = [
    "SignatureInstance",
    "RSASignature",
    "McElieceSignature",
    "SignatureSession",
    "VerifyOutcome",
    "make_instance",
    "bob_challenge",
    "alice_sign",
    "bob_acknowledge",
    "alice_reveal",
    "bob_verify",
    "copy_tag_register",
    "flip_register_bit",
]

MESSAGE = "m"
TAG = "tag"
RESAMPLE_BUDGET = 1024

PHASES = ("challenge_sent", "signed_state_sent", "receipt_acknowledged", "revealed", "verified")


class SignatureInstance:
    """A trapdoor permutation ``f`` split as ``(k + n)`` input bits and ``(k' + n')`` output bits."""

    kind = ""

    def __init__(self, pk: PublicKey):
        self.pk = pk

    challenge_width: int  # r_B
    response_width: int  # r_A
    r_width: int
    r_prime_width: int
    message_width: int
    tag_width: int

    def challenge_domain(self) -> list[int]:
        raise NotImplementedError

    def sample_r_a(self, r_b: int, rng: np.random.Generator) -> int:
        raise NotImplementedError

    def invert(self, kp: KeyPair, r_b: int, r_a: int) -> tuple[int, int]:
        """Trapdoor preimage ``(r, r')`` of ``(r_B, r_A)``."""
        raise NotImplementedError

    def challenge_of(self, r: int, r_prime: int) -> int:
        """The ``r_B`` part of ``f(r, r')``."""
        raise NotImplementedError

    def tag(self, m: int, r: int) -> int:
        """``f(m, r)`` attached to message branch ``m``."""
        raise NotImplementedError


class RSASignature(SignatureInstance):
    """``f(x, y) = (x || y)^e mod N`` on ``L = bitlen(N-1)`` bits, ``x`` in the high ``k = L // 2`` bits."""

    kind = "rsa"

    def __init__(self, pk: PublicKey):
        super().__init__(pk)
        self.N, self.e = pk["N"], pk["e"]
        self.L = (self.N - 1).bit_length()
        self.k = self.L // 2
        self.n = self.L - self.k
        self.challenge_width = self.r_width = self.k
        self.response_width = self.r_prime_width = self.n
        self.message_width = self.n
        self.tag_width = self.L

    def _valid(self, v: int) -> bool:
        return v < self.N and gcd(v, self.N) == 1

    def _join(self, hi: int, lo: int) -> int:
        return (hi << self.n) | lo

    def challenge_domain(self) -> list[int]:
        return [b for b in range(1 << self.k) if any(self._valid(self._join(b, a)) for a in range(1 << self.n))]

    def sample_r_a(self, r_b, rng):
        for _ in range(RESAMPLE_BUDGET):
            r_a = int(rng.integers(1 << self.n))
            if self._valid(self._join(r_b, r_a)):
                return r_a
        raise ParameterError(f"no valid r_A for r_B = {r_b} after {RESAMPLE_BUDGET} draws")

    def invert(self, kp, r_b, r_a):
        v = self._join(r_b, r_a)
        if not self._valid(v):
            raise ParameterError(f"(r_B, r_A) = {v} is not a unit below N = {self.N}")
        x = pow(v, kp["s"], self.N)
        return x >> self.n, x & ((1 << self.n) - 1)

    def challenge_of(self, r, r_prime):
        return pow(self._join(r, r_prime), self.e, self.N) >> self.n

    def tag(self, m, r):
        return pow(self._join(r, m), self.e, self.N)


class McElieceSignature(SignatureInstance):
    """``f(x, y) = yG' XOR x``; ``r_B`` fills the first ``n/2`` coordinates, each half of weight ``t // 2``."""

    kind = "mceliece"

    def __init__(self, pk: PublicKey):
        super().__init__(pk)
        self.G = pk["G_pub"]
        length = pk["n"]
        if length % 2:
            raise ParameterError("signing code length must be even")
        self.half = length // 2
        self.weight = pk["t"] // 2
        self.challenge_width = self.response_width = self.half
        self.r_width = length
        self.r_prime_width = pk["k"]
        self.message_width = pk["k"]
        self.tag_width = length

    def challenge_domain(self) -> list[int]:
        return [w.value for w in words_of_weight(self.half, self.weight)]

    def sample_r_a(self, r_b, rng):
        domain = self.challenge_domain()
        return domain[int(rng.integers(len(domain)))]

    def invert(self, kp, r_b, r_a):
        code, p = kp["code"], kp["P"]
        y = r_b | (r_a << self.half)
        yp = p.inverse().mul_int(y)
        try:
            e = syndrome_decode(code, code.syndrome(BitWord(code.n, yp)))
        except DecodingError as exc:
            raise AssertionError("weight-constrained challenge must decode") from exc
        r = p.mul_int(e.value)
        r_prime = generalized_right_inverse(self.G).mul_int(y ^ r)
        if self.G.mul_int(r_prime) ^ r != y:
            raise AssertionError("trapdoor preimage does not map back to (r_B, r_A)")
        return r, r_prime

    def challenge_of(self, r, r_prime):
        return (self.G.mul_int(r_prime) ^ r) & ((1 << self.half) - 1)

    def tag(self, m, r):
        return self.G.mul_int(m) ^ r


INSTANCES = {"rsa": RSASignature, "mceliece": McElieceSignature}

DEFAULT_PARAMS = {"rsa": {"p": 3, "q": 5}, "mceliece": {"code": "signing"}}


def make_instance(kind: str, params: dict | None = None, rng: np.random.Generator | None = None):
    """Key pair plus signature instance; McEliece defaults to the [12,4] t=2 signing code."""
    if kind not in INSTANCES:
        raise ParameterError(f"unknown signature instance {kind!r}")
    rng = rng if rng is not None else np.random.default_rng()
    kp = keygen(kind, {**DEFAULT_PARAMS[kind], **(params or {})}, rng)
    return INSTANCES[kind](kp.public), kp


def instance_for(pk: PublicKey) -> SignatureInstance:
    return INSTANCES[pk.scheme](pk)


@dataclass
class VerifyOutcome:
    challenge_check: bool
    tag_check: bool
    recovered_message: PureState | None = None
    tag_outcome: int | None = None

    @property
    def accepted(self) -> bool:
        return self.challenge_check and self.tag_check


@dataclass
class SignatureSession:
    instance: SignatureInstance
    r_b: BitWord
    phase: str = "challenge_sent"
    r_a: BitWord | None = None
    held: tuple[BitWord, BitWord] | None = None
    signed_state: PureState | None = None
    transcript: list[dict] = field(default_factory=list)
    copies: int = 0

    def _advance(self, expected: tuple[str, ...], new: str) -> None:
        if self.phase not in expected:
            raise ProtocolError(f"step needs phase {' or '.join(expected)}, session is at {self.phase}")
        self.phase = new

    def _log(self, step: str, direction: str, payload: dict) -> None:
        self.transcript.append({"step": step, "direction": direction, "payload": payload})


def bob_challenge(instance: SignatureInstance, rng: np.random.Generator) -> SignatureSession:
    domain = instance.challenge_domain()
    r_b = BitWord(instance.challenge_width, domain[int(rng.integers(len(domain)))])
    session = SignatureSession(instance, r_b)
    session._log("challenge", "bob->alice", {"r_B": r_b.to_json()})
    return session


def alice_sign(kp: KeyPair, session: SignatureSession, message: PureState, rng: np.random.Generator) -> PureState:
    inst = session.instance
    if message.layout != RegisterLayout.of((MESSAGE, inst.message_width)):
        raise ParameterError(f"message must be a single register {MESSAGE!r} of width {inst.message_width}")
    session._advance(("challenge_sent",), "signed_state_sent")
    r_b = session.r_b.value
    r_a = inst.sample_r_a(r_b, rng)
    r, r_prime = inst.invert(kp, r_b, r_a)
    session.r_a = BitWord(inst.response_width, r_a)
    session.held = (BitWord(inst.r_width, r), BitWord(inst.r_prime_width, r_prime))
    st = apply_xor_oracle(message.extend(TAG, inst.tag_width), lambda m: inst.tag(m, r), [MESSAGE], TAG)
    session.signed_state = st
    session._log("signed_state", "alice->bob", {"state": st.to_json()})
    return st


def bob_acknowledge(session: SignatureSession) -> None:
    session._advance(("signed_state_sent",), "receipt_acknowledged")
    session._log("receipt", "bob->alice", {})


def alice_reveal(session: SignatureSession) -> tuple[BitWord, BitWord]:
    session._advance(("receipt_acknowledged",), "revealed")
    r, r_prime = session.held
    session._log("reveal", "alice->bob", {"r": r.to_json(), "r_prime": r_prime.to_json()})
    return r, r_prime


def bob_verify(
    session: SignatureSession,
    r: BitWord | int,
    r_prime: BitWord | int,
    rng: np.random.Generator,
    tag_register: str = TAG,
) -> VerifyOutcome:
    """Challenge check first; only if it passes is the tag cleared with ``r`` and measured.

    Verifying a copy made by :func:`copy_tag_register` consumes the copy and
    leaves the original tag in place; verifying ``tag`` itself extracts the message.
    """
    session._advance(("revealed", "verified"), "verified")
    inst = session.instance
    r, r_prime = int(r), int(r_prime)
    challenge_ok = inst.challenge_of(r, r_prime) == session.r_b.value
    if not challenge_ok:
        out = VerifyOutcome(False, False)
    else:
        st = apply_xor_oracle(session.signed_state, lambda m: inst.tag(m, r), [MESSAGE], tag_register)
        residue, st = measure_register(st, tag_register, rng)
        if residue.value:
            session.signed_state = st
            out = VerifyOutcome(True, False, tag_outcome=residue.value)
        elif tag_register == TAG:
            session.signed_state = st
            out = VerifyOutcome(True, True, _extract_message(st), 0)
        else:
            session.signed_state = st.drop_zero(tag_register)
            out = VerifyOutcome(True, True, None, 0)
    session._log("verify", "bob", {
        "register": tag_register,
        "challenge_check": out.challenge_check,
        "tag_check": out.tag_check,
        "accepted": out.accepted,
    })
    return out


def _extract_message(st: PureState) -> PureState | None:
    """The message register alone, or None while a tag copy is still entangled with it."""
    try:
        for name in st.layout.names:
            if name != MESSAGE:
                st = st.discard(name)[1]
    except SeparabilityError:
        return None
    return st


def copy_tag_register(session: SignatureSession) -> PureState:
    """XOR-copy the tag into a fresh register so it can be verified separately."""
    if session.signed_state is None:
        raise ProtocolError("no signed state to copy from")
    session.copies += 1
    name = f"tag_copy{session.copies}"
    st = session.signed_state.extend(name, session.instance.tag_width)
    st = apply_xor_oracle(st, lambda t: t, [TAG], name)
    session.signed_state = st
    return st


def flip_register_bit(state: PureState, register: str, bit: int) -> PureState:
    """Pauli-X on one qubit of a register."""
    w = state.layout.width_of(register)
    if not 0 <= bit < w:
        raise ParameterError(f"bit {bit} outside register {register!r} of width {w}")
    st = state.extend("_flip", w, 1 << bit)
    st = apply_xor_oracle(st, lambda v: v, ["_flip"], register)
    return st.discard("_flip")[1]


# end-to-end runs with an interposable channel, and their transcripts

TAMPERS = ("tag-bit", "challenge", "reveal")


def parse_tamper(text: str | None) -> tuple[str, int] | None:
    """``"tag-bit:3"`` -> ``("tag-bit", 3)``; ``"challenge"`` / ``"reveal"`` take no argument."""
    if text is None:
        return None
    kind, _, arg = text.partition(":")
    if kind not in TAMPERS:
        raise ParameterError(f"unknown tamper {text!r}; expected one of {TAMPERS}")
    if kind == "tag-bit":
        if not arg.isdigit():
            raise ParameterError("tag-bit tamper needs a bit index, e.g. tag-bit:3")
        return kind, int(arg)
    if arg:
        raise ParameterError(f"tamper {kind!r} takes no argument")
    return kind, 0


def run_session(
    instance: SignatureInstance,
    kp: KeyPair,
    message: PureState,
    sign_rng: np.random.Generator,
    verify_rng: np.random.Generator,
    tamper: str | None = None,
) -> tuple[SignatureSession, VerifyOutcome]:
    """Honest parties with an optional adversary on the channel.

    ``challenge`` hands Alice a different ``r_B``; ``tag-bit:i`` flips qubit ``i``
    of the tag in transit; ``reveal`` flips the low bit of the announced ``r``.
    """
    attack = parse_tamper(tamper)
    session = bob_challenge(instance, sign_rng)
    bob_rb = session.r_b
    if attack and attack[0] == "challenge":
        domain = instance.challenge_domain()
        forged = BitWord(bob_rb.width, domain[(domain.index(bob_rb.value) + 1) % len(domain)])
        session._log("tamper", "adversary->alice", {"kind": "challenge", "r_B": forged.to_json()})
        session.r_b = forged
        alice_sign(kp, session, message, sign_rng)
        session.r_b = bob_rb
    else:
        alice_sign(kp, session, message, sign_rng)
    if attack and attack[0] == "tag-bit":
        session.signed_state = flip_register_bit(session.signed_state, TAG, attack[1])
        session._log("tamper", "adversary->bob", {"kind": "tag-bit", "bit": attack[1], "state": session.signed_state.to_json()})
    bob_acknowledge(session)
    r, r_prime = alice_reveal(session)
    if attack and attack[0] == "reveal":
        r = BitWord(r.width, r.value ^ 1)
        session._log("tamper", "adversary->bob", {"kind": "reveal", "r": r.to_json(), "r_prime": r_prime.to_json()})
    return session, bob_verify(session, r, r_prime, verify_rng)


def verify_from_transcript(pk: PublicKey, steps: list[dict], verify_rng: np.random.Generator) -> VerifyOutcome:
    """Re-run Bob's final check from the messages he received."""
    instance = instance_for(pk)
    r_b = state = reveal = None
    for entry in steps:
        step, payload = entry["step"], entry["payload"]
        if step == "challenge":
            r_b = BitWord.from_json(payload["r_B"])
        elif step == "signed_state" or (step == "tamper" and "state" in payload):
            state = PureState.from_json(payload["state"])
        elif step == "reveal" or (step == "tamper" and "r" in payload):
            reveal = (BitWord.from_json(payload["r"]), BitWord.from_json(payload["r_prime"]))
    if r_b is None or state is None or reveal is None:
        raise ProtocolError("transcript lacks a challenge, signed state or reveal")
    session = SignatureSession(instance, r_b, phase="revealed", signed_state=state)
    return bob_verify(session, reveal[0], reveal[1], verify_rng)
