from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpkc.errors import ParameterError, ProtocolError
from qpkc.gf2 import BitWord
from qpkc.qsign import (
    McElieceSignature,
    RSASignature,
    alice_reveal,
    alice_sign,
    bob_acknowledge,
    bob_challenge,
    bob_verify,
    copy_tag_register,
    flip_register_bit,
    instance_for,
    make_instance,
    parse_tamper,
    run_session,
    verify_from_transcript,
)
from qpkc.qsim import PureState, overlap


def message(inst, amps):
    return PureState.from_register("m", inst.message_width, amps, normalize=True)


def random_message(inst, rng, terms=4):
    size = 1 << inst.message_width
    keys = rng.choice(size, size=min(terms, size), replace=False)
    amps = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
    return message(inst, {int(k): complex(a) for k, a in zip(keys, amps)})


def honest(inst, kp, psi, rng):
    s = bob_challenge(inst, rng)
    alice_sign(kp, s, psi, rng)
    bob_acknowledge(s)
    r, rp = alice_reveal(s)
    return s, r, rp


def cube_root_table(n, e):
    """x -> x^e over units, inverted by enumeration."""
    return {pow(x, e, n): x for x in range(1, n) if gcd(x, n) == 1}


class TestRSAInstance:
    def test_widths_mod_15(self):
        inst, kp = make_instance("rsa", {"p": 3, "q": 5, "e": 3}, np.random.default_rng(0))
        assert (inst.k, inst.n, inst.tag_width) == (2, 2, 4)

    @pytest.mark.parametrize("p,q,e", [(3, 5, 3), (3, 11, 3), (3, 11, 7)])
    def test_inverse_exhaustive(self, p, q, e):
        inst, kp = make_instance("rsa", {"p": p, "q": q, "e": e}, np.random.default_rng(0))
        table = cube_root_table(p * q, e)
        for r_b in inst.challenge_domain():
            for r_a in range(1 << inst.n):
                v = (r_b << inst.n) | r_a
                if v >= p * q or gcd(v, p * q) != 1:
                    continue
                r, rp = inst.invert(kp, r_b, r_a)
                assert (r << inst.n) | rp == table[v]
                assert inst.challenge_of(r, rp) == r_b

    def test_worked_example(self):
        inst, kp = make_instance("rsa", {"p": 3, "q": 5, "e": 3}, np.random.default_rng(0))
        table = cube_root_table(15, 3)
        r_b = 0b10
        for r_a in range(4):
            v = (r_b << 2) | r_a
            if gcd(v, 15) != 1:
                continue
            r, rp = inst.invert(kp, r_b, r_a)
            assert (r << 2) | rp == table[v]
            assert inst.tag(3, r) == pow((r << 2) | 3, 3, 15)

    def test_challenge_domain_excludes_dead_prefixes(self):
        inst, _ = make_instance("rsa", {"p": 3, "q": 5}, np.random.default_rng(0))
        assert inst.challenge_domain() == [0, 1, 2, 3]
        inst, _ = make_instance("rsa", {"p": 5, "q": 7}, np.random.default_rng(0))
        # N = 35: L = 6, values 32..34 are the only ones with prefix 100
        assert 4 in inst.challenge_domain() and len(inst.challenge_domain()) == 5


class TestMcElieceInstance:
    def test_odd_length_rejected(self):
        with pytest.raises(ParameterError):
            make_instance("mceliece", {"code": "hamming74"}, np.random.default_rng(0))

    def test_challenge_weight(self):
        inst, _ = make_instance("mceliece", {}, np.random.default_rng(0))
        assert inst.half == 6 and inst.weight == 1
        assert sorted(inst.challenge_domain()) == [1 << i for i in range(6)]

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_weight_additivity(self, seed):
        rng = np.random.default_rng(seed)
        inst, kp = make_instance("mceliece", {}, rng)
        s, r, rp = honest(inst, kp, random_message(inst, rng), rng)
        assert r.weight == s.r_b.weight + s.r_a.weight
        assert inst.challenge_of(r.value, rp.value) == s.r_b.value


@pytest.mark.parametrize("kind", ["rsa", "mceliece"])
class TestSession:
    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_honest(self, kind, seed):
        rng = np.random.default_rng(seed)
        inst, kp = make_instance(kind, None, rng)
        psi = random_message(inst, rng)
        s, r, rp = honest(inst, kp, psi, rng)
        out = bob_verify(s, r, rp, rng)
        assert out.accepted and overlap(out.recovered_message, psi) >= 1 - 1e-9
        assert [e["step"] for e in s.transcript] == ["challenge", "signed_state", "receipt", "reveal", "verify"]

    def test_sign_keeps_basis_message(self, kind):
        rng = np.random.default_rng(1)
        inst, kp = make_instance(kind, None, rng)
        s = bob_challenge(inst, rng)
        st_ = alice_sign(kp, s, message(inst, {1: 1.0}), rng)
        assert st_.values("m") == {1}
        assert st_.values("tag") == {inst.tag(1, s.held[0].value)}

    def test_superposed_branches_tagged(self, kind):
        rng = np.random.default_rng(2)
        inst, kp = make_instance(kind, None, rng)
        s = bob_challenge(inst, rng)
        st_ = alice_sign(kp, s, message(inst, {1: 1.0, 2: 1.0}), rng)
        r = s.held[0].value
        assert set(st_.register_amplitudes()) == {(1, inst.tag(1, r)), (2, inst.tag(2, r))}

    def test_out_of_order(self, kind):
        rng = np.random.default_rng(3)
        inst, kp = make_instance(kind, None, rng)
        s = bob_challenge(inst, rng)
        with pytest.raises(ProtocolError):
            alice_reveal(s)
        with pytest.raises(ProtocolError):
            bob_acknowledge(s)
        with pytest.raises(ProtocolError):
            bob_verify(s, 0, 0, rng)
        alice_sign(kp, s, message(inst, {1: 1.0}), rng)
        with pytest.raises(ProtocolError):
            alice_sign(kp, s, message(inst, {1: 1.0}), rng)
        with pytest.raises(ProtocolError):
            alice_reveal(s)
        bob_acknowledge(s)
        with pytest.raises(ProtocolError):
            bob_acknowledge(s)

    def test_wrong_reveal_fails_challenge(self, kind):
        rng = np.random.default_rng(4)
        inst, kp = make_instance(kind, None, rng)
        s, r, rp = honest(inst, kp, message(inst, {1: 1.0}), rng)
        for bad in range(1 << inst.r_width):
            if inst.challenge_of(bad, rp.value) != s.r_b.value:
                break
        out = bob_verify(s, bad, rp, rng)
        assert not out.challenge_check and not out.accepted

    def test_tag_bit_flip_rejected(self, kind):
        rng = np.random.default_rng(5)
        inst, kp = make_instance(kind, None, rng)
        for bit in range(inst.tag_width):
            s, r, rp = honest(inst, kp, message(inst, {1: 1.0}), rng)
            s.signed_state = flip_register_bit(s.signed_state, "tag", bit)
            out = bob_verify(s, r, rp, rng)
            assert out.challenge_check and not out.tag_check and out.tag_outcome == 1 << bit

    def test_two_verifications_via_copy(self, kind):
        rng = np.random.default_rng(6)
        inst, kp = make_instance(kind, None, rng)
        psi = random_message(inst, rng)
        s, r, rp = honest(inst, kp, psi, rng)
        copied = copy_tag_register(s)
        assert copied.layout.names == ("m", "tag", "tag_copy1")
        first = bob_verify(s, r, rp, rng, tag_register="tag_copy1")
        assert first.accepted and first.recovered_message is None
        second = bob_verify(s, r, rp, rng)
        assert second.accepted and overlap(second.recovered_message, psi) >= 1 - 1e-9

    def test_copy_after_extraction_is_zero(self, kind):
        rng = np.random.default_rng(7)
        inst, kp = make_instance(kind, None, rng)
        s, r, rp = honest(inst, kp, message(inst, {1: 1.0}), rng)
        bob_verify(s, r, rp, rng)
        assert copy_tag_register(s).values("tag_copy1") == {0}

    def test_run_session_tampers(self, kind):
        inst, kp = make_instance(kind, None, np.random.default_rng(8))
        psi = message(inst, {1: 1.0})
        for tamper, expect in [(None, True), ("tag-bit:0", False), ("challenge", False), ("reveal", False)]:
            s, out = run_session(inst, kp, psi, np.random.default_rng(9), np.random.default_rng(10), tamper)
            assert out.accepted is expect, tamper
            replay = verify_from_transcript(kp.public, s.transcript, np.random.default_rng(10))
            assert replay.accepted is expect
            assert (replay.challenge_check, replay.tag_check) == (out.challenge_check, out.tag_check)


def test_parse_tamper():
    assert parse_tamper("tag-bit:3") == ("tag-bit", 3)
    assert parse_tamper("challenge") == ("challenge", 0)
    assert parse_tamper(None) is None
    for bad in ("tag-bit", "tag-bit:x", "reveal:1", "erase"):
        with pytest.raises(ParameterError):
            parse_tamper(bad)


def test_instance_for_public_key():
    inst, kp = make_instance("mceliece", {}, np.random.default_rng(0))
    assert isinstance(instance_for(kp.public), McElieceSignature)
    inst, kp = make_instance("rsa", {}, np.random.default_rng(0))
    assert isinstance(instance_for(kp.public), RSASignature)


def test_flip_bit_range():
    st_ = PureState.from_register("tag", 3, {0: 1.0})
    assert flip_register_bit(st_, "tag", 2).amplitudes == {4: 1.0}
    with pytest.raises(ParameterError):
        flip_register_bit(st_, "tag", 3)


def test_message_width_checked():
    rng = np.random.default_rng(0)
    inst, kp = make_instance("rsa", {}, rng)
    s = bob_challenge(inst, rng)
    with pytest.raises(ParameterError):
        alice_sign(kp, s, PureState.from_register("m", 5, {0: 1.0}), rng)
    assert s.phase == "challenge_sent"
    assert isinstance(s.r_b, BitWord)
