import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpkc import qpke
from qpkc.errors import DimensionError, ParameterError
from qpkc.gf2 import BitWord, GF2Matrix
from qpkc.qauth import (
    AuthKey,
    auth_encode,
    auth_encode_with_identity,
    auth_keygen,
    auth_verify,
    auth_verify_with_identity,
    generic_check,
    generic_tag,
    open_from_transport,
    seal_for_transport,
    undetected_tampers,
)
from qpkc.qsim import PureState, overlap

# systematic [7,4] Hamming tag matrix
A74 = GF2Matrix([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]])
KEY74 = AuthKey.from_tag_matrix(A74)


def bits(v, w):
    return np.array([(v >> i) & 1 for i in range(w)], dtype=np.int64)


def word(arr):
    return int(sum(int(b) << i for i, b in enumerate(arr)))


def codeword_oracle(key, m):
    """m [I | A] by a dense numpy product."""
    return word(bits(m, key.k) @ np.asarray(key.G_s.data, dtype=np.int64) % 2)


def random_message(rng, k, terms):
    keys = rng.choice(1 << k, size=min(terms, 1 << k), replace=False)
    amps = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
    return PureState.from_register("m", k, {int(x): complex(a) for x, a in zip(keys, amps)}, normalize=True)


class TestKey:
    def test_relations(self):
        assert not (KEY74.G_s @ KEY74.H_s.T).data.any()
        assert KEY74.G_s @ KEY74.G_s_inv == GF2Matrix.identity(4)
        assert KEY74.tag_matrix == A74

    def test_bad_key_rejected(self):
        with pytest.raises(ParameterError):
            AuthKey(KEY74.G_s, GF2Matrix([[1, 0, 0, 0, 1, 0, 0], [0] * 7, [0] * 7]), KEY74.G_s_inv)
        with pytest.raises(ParameterError):
            auth_keygen(4, 4, np.random.default_rng(0))

    def test_json(self):
        key = auth_keygen(3, 9, np.random.default_rng(1))
        assert AuthKey.from_json(key.to_json()) == key


class TestEncode:
    def test_basis_codewords(self):
        for m in range(16):
            out = auth_encode(PureState.from_register("m", 4, {m: 1.0}), KEY74)
            assert out.amplitudes == {codeword_oracle(KEY74, m): 1.0}

    def test_repetition(self):
        key = AuthKey.from_tag_matrix(GF2Matrix([[1]]))
        out = auth_encode(PureState.from_register("m", 1, {0: 1, 1: 1}, normalize=True), key)
        assert out.amplitudes == pytest.approx({0b00: 2**-0.5, 0b11: 2**-0.5})

    def test_zero_state(self):
        assert auth_encode(PureState.from_register("m", 4, {0: 1.0}), KEY74).amplitudes == {0: 1.0}

    def test_width_mismatch(self):
        with pytest.raises(DimensionError):
            auth_encode(PureState.from_register("m", 3, {0: 1.0}), KEY74)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30)
    def test_isometry(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_message(rng, 4, 8), random_message(rng, 4, 8)
        assert overlap(auth_encode(a, KEY74), auth_encode(b, KEY74)) == pytest.approx(overlap(a, b), abs=1e-12)


class TestVerify:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30)
    def test_honest_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        key = auth_keygen(4, 8, rng)
        psi = random_message(rng, 4, 16)
        tag = auth_verify(auth_encode(psi, key), key, rng)
        assert tag.accepted and overlap(tag.message, psi) >= 1 - 1e-9

    def test_single_bit_flips(self):
        """Every position of the Hamming code has a nonzero syndrome column."""
        h = np.asarray(KEY74.H_s.data, dtype=np.int64)
        rng = np.random.default_rng(0)
        for m in range(16):
            cw = codeword_oracle(KEY74, m)
            for i in range(7):
                assert (h[:, i] % 2).any()
                tag = auth_verify(PureState.from_register("c", 7, {cw ^ (1 << i): 1.0}), KEY74, rng)
                assert not tag.accepted and tag.message is None

    def test_substitution_limit(self):
        """Replacing a codeword by another codeword passes and yields the other message."""
        forged = PureState.from_register("c", 7, {codeword_oracle(KEY74, 9): 1.0})
        tag = auth_verify(forged, KEY74, np.random.default_rng(0))
        assert tag.accepted and tag.message.amplitudes == {9: 1.0}

    def test_undetected_set_is_code(self):
        for seed in range(5):
            key = auth_keygen(4, 10, np.random.default_rng(seed))
            codewords = {codeword_oracle(key, m) for m in range(1, 16)}
            assert undetected_tampers(key) == codewords


class TestIdentity:
    def test_single_qubit_identity(self):
        st_ = auth_encode_with_identity(PureState.from_register("m", 4, {3: 1.0}), KEY74, BitWord(1, 0))
        assert st_.register_amplitudes() == pytest.approx(
            {(0, codeword_oracle(KEY74, 3)): 2**-0.5, (1, codeword_oracle(KEY74, 3)): 2**-0.5}
        )

    @pytest.mark.parametrize("ident", [BitWord(1, 1), BitWord(3, 5), BitWord(8, 0xA7)])
    def test_recovers_identity(self, ident):
        rng = np.random.default_rng(ident.value)
        psi = random_message(rng, 4, 5)
        tag = auth_verify_with_identity(auth_encode_with_identity(psi, KEY74, ident), KEY74, rng)
        assert tag.accepted and tag.identity == ident
        assert overlap(tag.message, psi) >= 1 - 1e-9

    def test_identity_too_wide(self):
        with pytest.raises(DimensionError):
            auth_encode_with_identity(PureState.from_register("m", 4, {0: 1.0}), KEY74, BitWord(9, 0))


def test_generic_tag_function():
    a = lambda m: (m * 5 + 1) % 8  # noqa: E731
    rng = np.random.default_rng(3)
    psi = random_message(rng, 3, 4)
    tagged = generic_tag(psi, a, 3)
    ok = generic_check(tagged, a, rng)
    assert ok.accepted and overlap(ok.message, psi) >= 1 - 1e-9
    bad = PureState(tagged.layout, {k ^ 1: v for k, v in tagged.amplitudes.items()})
    assert not generic_check(bad, a, rng).accepted


def test_transport_under_mceliece():
    rng = np.random.default_rng(5)
    # the codeword register is the McEliece plaintext, so n1 = k = 4
    key = auth_keygen(2, 4, rng)
    transport = qpke.keygen("mceliece", {}, rng)
    psi = random_message(rng, 2, 4)
    cipher = seal_for_transport(psi, key, transport, qpke.sample_randomness(transport, rng))
    tag = open_from_transport(cipher, key, transport, rng)
    assert tag.accepted and overlap(tag.message, psi) >= 1 - 1e-9
