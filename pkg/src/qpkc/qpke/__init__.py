"""Quantum public-key encryption built from classical trapdoor functions.

Each scheme lifts ``m -> (g(m,r), f(m,r))`` to a unitary on superposed
messages; decryption inverts it with the trapdoor and, for some schemes,
also returns the randomness ``r``.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from ..errors import DimensionError, ParameterError
from ..gf2 import BitWord
from ..qsim import MAX_DENSE_DIM, CipherEnsemble, PureState
from .base import (
    CASE1_G_OF_M,
    CASE1_G_OF_R,
    CASE2_RECOVERS_R,
    MESSAGE,
    CipherState,
    ClassicalCipher,
    KeyPair,
    PublicKey,
    TrapdoorScheme,
)
from .classic import RSA, EllipticCurve, ElGamal, GoldwasserMicali
from .postquantum import McEliece, Niederreiter, OkamotoTanakaUchiyama

SCHEMES: dict[str, TrapdoorScheme] = {
    s.scheme_id: s
    for s in (
        RSA(),
        ElGamal(),
        GoldwasserMicali(),
        EllipticCurve(),
        McEliece(),
        Niederreiter(),
        OkamotoTanakaUchiyama(),
    )
}

__all__ = [
    "SCHEMES",
    "CASE1_G_OF_M",
    "CASE1_G_OF_R",
    "CASE2_RECOVERS_R",
    "MESSAGE",
    "CipherState",
    "ClassicalCipher",
    "KeyPair",
    "PublicKey",
    "TrapdoorScheme",
    "get_scheme",
    "keygen",
    "sample_randomness",
    "encrypt",
    "decrypt",
    "encrypt_ensemble",
    "classical_encrypt",
    "classical_roundtrip",
    "joint_injective",
    "random_message",
    "basis_message",
]


def get_scheme(scheme: str | PublicKey | KeyPair) -> TrapdoorScheme:
    sid = scheme if isinstance(scheme, str) else scheme.scheme
    try:
        return SCHEMES[sid]
    except KeyError:
        raise ParameterError(f"unknown scheme {sid!r}; known: {sorted(SCHEMES)}") from None


def _public(key: PublicKey | KeyPair) -> PublicKey:
    return key.public if isinstance(key, KeyPair) else key


def keygen(scheme_id: str, params: Mapping | None = None, rng: np.random.Generator | None = None) -> KeyPair:
    rng = rng if rng is not None else np.random.default_rng()
    return get_scheme(scheme_id).keygen(dict(params or {}), rng)


def sample_randomness(key: PublicKey | KeyPair, rng: np.random.Generator) -> BitWord:
    pk = _public(key)
    return get_scheme(pk).sample_randomness(pk, rng)


def encrypt(key: PublicKey | KeyPair, message: PureState, r: BitWord | int) -> CipherState:
    pk = _public(key)
    return get_scheme(pk).encrypt(pk, message, r)


def decrypt(
    kp: KeyPair, cipher: CipherState, rng: np.random.Generator | None = None
) -> tuple[PureState, BitWord | None]:
    """Recover the message state; the second item is ``r`` for schemes that reveal it, else None."""
    rng = rng if rng is not None else np.random.default_rng(0)
    return get_scheme(kp).decrypt(kp, cipher, rng)


def encrypt_ensemble(
    key: PublicKey | KeyPair,
    message: PureState,
    r_distribution: Mapping[int, float] | None = None,
    rng: np.random.Generator | None = None,
    sample_size: int = 64,
) -> CipherEnsemble:
    """The mixed cipher ``sum_r p_r |E_r(m)><E_r(m)|`` seen by anyone without ``r``.

    Without an explicit distribution ``r`` is uniform over the whole domain
    when that is at most ``sample_size`` values, else over a seeded sample.
    """
    pk = _public(key)
    scheme = get_scheme(pk)
    if r_distribution is None:
        domain = list(scheme.randomness_domain(pk))
        if len(domain) > sample_size:
            rng = rng if rng is not None else np.random.default_rng(0)
            domain = sorted(int(x) for x in rng.choice(domain, size=sample_size, replace=False))
        r_distribution = {r: 1.0 / len(domain) for r in domain}
    width = scheme.randomness_width(pk)
    entries = []
    for r, p in sorted(r_distribution.items()):
        c = scheme.encrypt(pk, message, r)
        entries.append((float(p), BitWord(width, int(r)), c.state))
    support = {k for _, _, st in entries for k in st.amplitudes}
    if len(support) > MAX_DENSE_DIM:
        raise DimensionError(f"ensemble support {len(support)} exceeds {MAX_DENSE_DIM}")
    return CipherEnsemble(tuple(entries))


def classical_encrypt(key: PublicKey | KeyPair, m: int, r: int) -> ClassicalCipher:
    pk = _public(key)
    scheme = get_scheme(pk)
    scheme._check_r(pk, r)
    return scheme.classical_encrypt(pk, int(m), int(r))


def classical_roundtrip(kp: KeyPair, m: BitWord | int, r: BitWord | int) -> BitWord:
    """Encrypt and decrypt ``m`` with the textbook classical cipher."""
    scheme = get_scheme(kp)
    width = scheme.message_width(kp.public)
    m = int(m)
    if m not in set(scheme.message_space(kp.public)):
        raise ParameterError(f"m = {m} outside the {scheme.scheme_id} message space")
    cipher = classical_encrypt(kp, m, int(r))
    return BitWord(width, scheme.classical_decrypt(kp, cipher))


def basis_message(key: PublicKey | KeyPair, m: int) -> PureState:
    pk = _public(key)
    return PureState.from_register(MESSAGE, get_scheme(pk).message_width(pk), {m: 1.0})


def random_message(key: PublicKey | KeyPair, rng: np.random.Generator, max_terms: int = 16) -> PureState:
    """Normalised superposition of 1..max_terms distinct message-space basis states."""
    pk = _public(key)
    scheme = get_scheme(pk)
    space = list(scheme.message_space(pk))
    count = int(rng.integers(1, min(max_terms, len(space)) + 1))
    chosen = rng.choice(len(space), size=count, replace=False)
    amps = rng.normal(size=count) + 1j * rng.normal(size=count)
    return PureState.from_register(
        MESSAGE, scheme.message_width(pk), {space[int(i)]: complex(a) for i, a in zip(chosen, amps)}, normalize=True
    )


def joint_injective(key: PublicKey | KeyPair, r: int) -> bool:
    """Whether ``m -> (g(m,r), f(m,r))`` is one-to-one over the message space."""
    pk = _public(key)
    scheme = get_scheme(pk)
    seen = set()
    for m in scheme.message_space(pk):
        c = scheme.classical_encrypt(pk, m, r).key()
        if c in seen:
            return False
        seen.add(c)
    return True
