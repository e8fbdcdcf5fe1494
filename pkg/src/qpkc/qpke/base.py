"""Keys, cipher containers and the scheme interface shared by every protocol."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ..errors import DimensionError, ParameterError, SchemeMismatchError
from ..gf2 import BitWord
from ..qsim import PureState, RegisterLayout

# decryption_case values: which branch of the decryption framework a scheme follows
CASE1_G_OF_R = "case1_g_of_r"
CASE1_G_OF_M = "case1_g_of_m"
CASE2_RECOVERS_R = "case2_recovers_r"

MESSAGE = "m"


@dataclass(frozen=True)
class PublicKey:
    scheme: str
    params: dict[str, Any]

    def __getitem__(self, key: str) -> Any:
        return self.params[key]


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    private: dict[str, Any]

    @property
    def scheme(self) -> str:
        return self.public.scheme

    def __getitem__(self, key: str) -> Any:
        if key in self.private:
            return self.private[key]
        return self.public.params[key]


@dataclass(frozen=True)
class CipherState:
    """Quantum cipher plus any classical side information the scheme sends."""

    scheme: str
    state: PureState
    classical: tuple[int, ...] = ()


@dataclass(frozen=True)
class ClassicalCipher:
    """Register contents of a basis-state cipher, keyed like the quantum cipher layout."""

    registers: dict[str, int]
    classical: tuple[int, ...] = ()

    def key(self) -> tuple:
        return tuple(sorted(self.registers.items())) + self.classical


class TrapdoorScheme:
    """Interface every concrete protocol implements.

    ``encrypt`` and ``decrypt`` run the protocol's circuit gate by gate on
    the sparse simulator; ``classical_encrypt``/``classical_decrypt`` are the
    textbook classical ciphers the quantum ones reduce to on basis states.
    """

    scheme_id = ""
    decryption_case = ""

    def keygen(self, params: dict, rng: np.random.Generator) -> KeyPair:
        raise NotImplementedError

    def check_keys(self, kp: KeyPair) -> None:
        """Raise ``ParameterError`` unless the key consistency relation holds."""
        raise NotImplementedError

    def message_width(self, pk: PublicKey) -> int:
        raise NotImplementedError

    def message_space(self, pk: PublicKey) -> Sequence[int]:
        return range(1 << self.message_width(pk))

    def randomness_width(self, pk: PublicKey) -> int:
        raise NotImplementedError

    def randomness_domain(self, pk: PublicKey) -> Sequence[int]:
        raise NotImplementedError

    def sample_randomness(self, pk: PublicKey, rng: np.random.Generator) -> BitWord:
        domain = self.randomness_domain(pk)
        return BitWord(self.randomness_width(pk), int(domain[int(rng.integers(len(domain)))]))

    def cipher_layout(self, pk: PublicKey) -> RegisterLayout:
        raise NotImplementedError

    def encrypt(self, pk: PublicKey, message: PureState, r: BitWord) -> CipherState:
        raise NotImplementedError

    def decrypt(
        self, kp: KeyPair, cipher: CipherState, rng: np.random.Generator
    ) -> tuple[PureState, BitWord | None]:
        raise NotImplementedError

    def classical_encrypt(self, pk: PublicKey, m: int, r: int) -> ClassicalCipher:
        raise NotImplementedError

    def classical_decrypt(self, kp: KeyPair, cipher: ClassicalCipher) -> int:
        raise NotImplementedError

    # helpers for subclasses

    def _check_message(self, pk: PublicKey, message: PureState) -> int:
        w = self.message_width(pk)
        if message.layout != RegisterLayout.of((MESSAGE, w)):
            raise DimensionError(
                f"{self.scheme_id} expects a message over [({MESSAGE!r}, {w})], got {message.layout.registers}"
            )
        space = self.message_space(pk)
        allowed = space if isinstance(space, range) else set(space)
        bad = [v for v in message.amplitudes if v not in allowed]
        if bad:
            raise ParameterError(f"basis values {sorted(bad)[:5]} lie outside the {self.scheme_id} message space")
        return w

    def _check_r(self, pk: PublicKey, r: BitWord | int) -> int:
        width = self.randomness_width(pk)
        value = r.value if isinstance(r, BitWord) else int(r)
        if isinstance(r, BitWord) and r.width != width:
            raise DimensionError(f"r has width {r.width}, expected {width}")
        domain = self.randomness_domain(pk)
        allowed = domain if isinstance(domain, range) else set(domain)
        if value not in allowed:
            raise ParameterError(f"r = {value} is outside the {self.scheme_id} randomness domain")
        return value

    def _check_cipher(self, kp: KeyPair, cipher: CipherState) -> None:
        if cipher.scheme != self.scheme_id or kp.scheme != self.scheme_id:
            raise SchemeMismatchError(f"key is {kp.scheme!r}, cipher is {cipher.scheme!r}")
        if cipher.state.layout != self.cipher_layout(kp.public):
            raise DimensionError("cipher layout does not match the key")
