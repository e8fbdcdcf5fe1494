"""Quantum RSA, ElGamal, Goldwasser-Micali and elliptic-curve encryption."""
from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

from ..ecurve import DEFAULT_BASE, DEFAULT_CURVE, Curve, Point, point_order, scalar_mul
from ..errors import ParameterError
from ..gf2 import BitWord
from ..numtheory import Modulus, is_generator, is_prime, is_qr, mod_inv, primitive_roots
from ..qsim import (
    RegisterLayout,
    apply_uncompute,
    apply_xor_oracle,
)
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


def _pick(rng: np.random.Generator, options: Sequence[int]) -> int:
    if not options:
        raise ParameterError("no admissible parameter value")
    return int(options[int(rng.integers(len(options)))])


class RSA(TrapdoorScheme):
    """``g(m,r) = m XOR r``, ``f(m,r) = m^e mod N``; trapdoor ``s = e^-1 mod phi(N)``."""

    scheme_id = "rsa"
    decryption_case = CASE2_RECOVERS_R

    def keygen(self, params, rng):
        p, q = int(params.get("p", 3)), int(params.get("q", 5))
        if p == q:
            raise ParameterError("RSA needs distinct primes")
        mod = Modulus(p * q, p, q)
        phi = mod.phi
        e = params.get("e")
        if e is None:
            e = _pick(rng, [x for x in range(3, phi) if gcd(x, phi) == 1])
        e = int(e)
        if gcd(e, phi) != 1 or e < 2:
            raise ParameterError(f"e = {e} is not a unit modulo phi = {phi}")
        kp = KeyPair(PublicKey(self.scheme_id, {"N": mod.n, "e": e}), {"p": p, "q": q, "s": mod_inv(e, phi)})
        self.check_keys(kp)
        return kp

    def check_keys(self, kp):
        phi = Modulus(kp["N"], kp["p"], kp["q"]).phi
        if kp["e"] * kp["s"] % phi != 1:
            raise ParameterError("e * s != 1 mod phi(N)")

    def message_width(self, pk):
        return pk["N"].bit_length()

    def message_space(self, pk):
        n = pk["N"]
        return [m for m in range(1, n) if gcd(m, n) == 1]

    def randomness_width(self, pk):
        return self.message_width(pk)

    def randomness_domain(self, pk):
        return range(1 << self.randomness_width(pk))

    def cipher_layout(self, pk):
        w = self.message_width(pk)
        return RegisterLayout.of(("g", w), ("f", w))

    def encrypt(self, pk, message, r):
        w = self._check_message(pk, message)
        r = self._check_r(pk, r)
        n, e = pk["N"], pk["e"]
        st = message.extend("r", w, r).extend("f", w)
        st = apply_xor_oracle(st, lambda m: pow(m, e, n), [MESSAGE], "f")
        st = apply_xor_oracle(st, lambda rr: rr, ["r"], MESSAGE)
        _, st = st.discard("r")
        return CipherState(self.scheme_id, st.rename({MESSAGE: "g"}))

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        n, e, s = kp["N"], kp["e"], kp["s"]
        w = self.message_width(kp.public)
        st = cipher.state.extend("a", w)
        st = apply_xor_oracle(st, lambda f: pow(f, s, n), ["f"], "a")
        st = apply_xor_oracle(st, lambda a: a, ["a"], "g")
        r, st = st.discard("g")
        st = apply_uncompute(st, lambda a: pow(a, e, n), ["a"], "f")
        st = st.drop_zero("f").rename({"a": MESSAGE})
        return st, BitWord(w, r)

    def classical_encrypt(self, pk, m, r):
        return ClassicalCipher({"g": m ^ r, "f": pow(m, pk["e"], pk["N"])})

    def classical_decrypt(self, kp, cipher):
        return pow(cipher.registers["f"], kp["s"], kp["N"])


class ElGamal(TrapdoorScheme):
    """``f(m,r) = m beta^r mod p`` with ``alpha^r mod p`` sent in the clear; ``m`` rides along."""

    scheme_id = "elgamal"
    decryption_case = CASE1_G_OF_M

    def keygen(self, params, rng):
        p = int(params.get("p", 11))
        if not is_prime(p) or p < 5:
            raise ParameterError(f"p = {p} must be a prime >= 5")
        alpha = params.get("alpha")
        alpha = _pick(rng, primitive_roots(p)) if alpha is None else int(alpha)
        if not is_generator(alpha, p):
            raise ParameterError(f"{alpha} does not generate Z_{p}^*")
        s = params.get("s")
        s = int(rng.integers(1, p - 1)) if s is None else int(s)
        if not 1 <= s <= p - 2:
            raise ParameterError("s must lie in [1, p-2]")
        kp = KeyPair(PublicKey(self.scheme_id, {"p": p, "alpha": alpha, "beta": pow(alpha, s, p)}), {"s": s})
        self.check_keys(kp)
        return kp

    def check_keys(self, kp):
        if pow(kp["alpha"], kp["s"], kp["p"]) != kp["beta"]:
            raise ParameterError("beta != alpha^s mod p")

    def message_width(self, pk):
        return pk["p"].bit_length()

    def message_space(self, pk):
        return range(1, pk["p"])

    def randomness_width(self, pk):
        return (pk["p"] - 2).bit_length()

    def randomness_domain(self, pk):
        return range(1, pk["p"] - 1)

    def cipher_layout(self, pk):
        w = self.message_width(pk)
        return RegisterLayout.of(("g", w), ("f", w))

    def encrypt(self, pk, message, r):
        w = self._check_message(pk, message)
        r = self._check_r(pk, r)
        p, alpha, beta = pk["p"], pk["alpha"], pk["beta"]
        st = message.extend("r", self.randomness_width(pk), r).extend("f", w)
        st = apply_xor_oracle(st, lambda m, rr: m * pow(beta, rr, p) % p, [MESSAGE, "r"], "f")
        _, st = st.discard("r")
        return CipherState(self.scheme_id, st.rename({MESSAGE: "g"}), (pow(alpha, r, p),))

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        p = kp["p"]
        if len(cipher.classical) != 1 or not 1 <= cipher.classical[0] < p:
            raise ParameterError("ElGamal cipher needs alpha^r mod p as classical side information")
        mask = pow(cipher.classical[0], kp["s"], p)
        st = apply_uncompute(cipher.state, lambda g: g * mask % p, ["g"], "f")
        return st.drop_zero("f").rename({"g": MESSAGE}), None

    def classical_encrypt(self, pk, m, r):
        p = pk["p"]
        return ClassicalCipher({"g": m, "f": m * pow(pk["beta"], r, p) % p}, (pow(pk["alpha"], r, p),))

    def classical_decrypt(self, kp, cipher):
        p = kp["p"]
        mask = pow(cipher.classical[0], kp["s"], p)
        return cipher.registers["f"] * pow(mask, -1, p) % p


class GoldwasserMicali(TrapdoorScheme):
    """Bitwise ``c_i = t^{m_i} r_i^2 mod N`` plus the chained ``g`` that lets ``m`` be uncomputed.

    ``m_1`` is the most significant message bit; ``r`` packs ``r_1 .. r_k``
    as ``k``-bit chunks with ``r_1`` most significant.
    """

    scheme_id = "gm"
    decryption_case = CASE2_RECOVERS_R

    def keygen(self, params, rng):
        p, q = int(params.get("p", 3)), int(params.get("q", 5))
        if p == q or p == 2 or q == 2:
            raise ParameterError("GM needs distinct odd primes")
        mod = Modulus(p * q, p, q)
        k = int(params.get("k", 2))
        if k < 1:
            raise ParameterError("k must be >= 1")
        t = params.get("t")
        if t is None:
            t = _pick(rng, self.valid_t(mod))
        t = int(t)
        kp = KeyPair(PublicKey(self.scheme_id, {"N": mod.n, "t": t, "k": k}), {"p": p, "q": q})
        self.check_keys(kp)
        if not self.r_choices(kp.public):
            raise ParameterError(f"no r_i < 2^{k} is coprime to N = {mod.n}")
        return kp

    @staticmethod
    def valid_t(mod: Modulus) -> list[int]:
        """Units that are non-residues modulo both prime factors (Jacobi symbol +1)."""
        return [
            x for x in range(2, mod.n)
            if gcd(x, mod.n) == 1
            and pow(x, (mod.p - 1) // 2, mod.p) != 1
            and pow(x, (mod.q - 1) // 2, mod.q) != 1
        ]

    def check_keys(self, kp):
        mod = Modulus(kp["N"], kp["p"], kp["q"])
        if kp["t"] not in self.valid_t(mod):
            raise ParameterError(f"t = {kp['t']} is not a non-residue modulo both factors")

    def message_width(self, pk):
        return pk["k"]

    def r_choices(self, pk) -> list[int]:
        return [x for x in range(1, 1 << pk["k"]) if gcd(x, pk["N"]) == 1]

    def randomness_width(self, pk):
        return pk["k"] * pk["k"]

    def randomness_domain(self, pk):
        k = pk["k"]
        words = [0]
        for _ in range(k):
            words = [(w << k) | x for w in words for x in self.r_choices(pk)]
        return words

    def sample_randomness(self, pk, rng):
        k, choices = pk["k"], self.r_choices(pk)
        value = 0
        for _ in range(k):
            value = (value << k) | _pick(rng, choices)
        return BitWord(k * k, value)

    @staticmethod
    def unpack_r(pk, r: int) -> list[int]:
        k = pk["k"]
        return [(r >> (k * (k - i))) & ((1 << k) - 1) for i in range(1, k + 1)]

    def cipher_layout(self, pk):
        k, wc = pk["k"], pk["N"].bit_length()
        return RegisterLayout(
            tuple((f"g{i}", k) for i in range(1, k + 1)) + tuple((f"c{i}", wc) for i in range(1, k + 1))
        )

    def _bit(self, pk, m: int, i: int) -> int:
        return (m >> (pk["k"] - i)) & 1

    def _c(self, pk, m: int, ri: int, i: int) -> int:
        n = pk["N"]
        return pow(pk["t"], self._bit(pk, m, i), n) * ri * ri % n

    def encrypt(self, pk, message, r):
        self._check_message(pk, message)
        r = self._check_r(pk, r)
        k, wc, mod2k = pk["k"], pk["N"].bit_length(), 1 << pk["k"]
        rs = self.unpack_r(pk, r)
        st = message
        for i in range(1, k + 1):
            st = st.extend(f"r{i}", k, rs[i - 1])
        for i in range(1, k + 1):
            st = st.extend(f"g{i}", k)
        for i in range(1, k + 1):
            st = st.extend(f"c{i}", wc)
        for i in range(1, k + 1):
            st = apply_xor_oracle(st, lambda m, ri, i=i: self._c(pk, m, ri, i), [MESSAGE, f"r{i}"], f"c{i}")
        st = apply_xor_oracle(st, lambda m, r1: m ^ r1, [MESSAGE, "r1"], "g1")
        for i in range(2, k + 1):
            st = apply_xor_oracle(
                st, lambda m, rp, ri: (rp * m % mod2k) ^ ri, [MESSAGE, f"r{i - 1}", f"r{i}"], f"g{i}"
            )
        st = apply_uncompute(st, lambda g1, r1: g1 ^ r1, ["g1", "r1"], MESSAGE)
        st = st.drop_zero(MESSAGE)
        for i in range(1, k + 1):
            _, st = st.discard(f"r{i}")
        return CipherState(self.scheme_id, st)

    def _decode_bits(self, kp, cs: Sequence[int]) -> int:
        mod = Modulus(kp["N"], kp["p"], kp["q"])
        m = 0
        for c in cs:
            m = (m << 1) | (0 if is_qr(c, mod) else 1)
        return m

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        pk = kp.public
        k, mod2k = pk["k"], 1 << pk["k"]
        cnames = [f"c{i}" for i in range(1, k + 1)]
        st = cipher.state.extend(MESSAGE, k)
        for i in range(1, k + 1):
            st = st.extend(f"r{i}", k)
        st = apply_xor_oracle(st, lambda *cs: self._decode_bits(kp, cs), cnames, MESSAGE)
        st = apply_xor_oracle(st, lambda g1, m: g1 ^ m, ["g1", MESSAGE], "r1")
        for i in range(2, k + 1):
            st = apply_xor_oracle(
                st, lambda gi, rp, m: gi ^ (rp * m % mod2k), [f"g{i}", f"r{i - 1}", MESSAGE], f"r{i}"
            )
        st = apply_uncompute(st, lambda m, r1: m ^ r1, [MESSAGE, "r1"], "g1")
        for i in range(2, k + 1):
            st = apply_uncompute(
                st, lambda m, rp, ri: (rp * m % mod2k) ^ ri, [MESSAGE, f"r{i - 1}", f"r{i}"], f"g{i}"
            )
        for i in range(1, k + 1):
            st = apply_uncompute(st, lambda m, ri, i=i: self._c(pk, m, ri, i), [MESSAGE, f"r{i}"], f"c{i}")
        r = 0
        for i in range(1, k + 1):
            st = st.drop_zero(f"g{i}").drop_zero(f"c{i}")
        for i in range(1, k + 1):
            ri, st = st.discard(f"r{i}")
            r = (r << k) | ri
        return st, BitWord(k * k, r)

    def classical_encrypt(self, pk, m, r):
        k, mod2k = pk["k"], 1 << pk["k"]
        rs = self.unpack_r(pk, r)
        regs = {"g1": m ^ rs[0]}
        for i in range(2, k + 1):
            regs[f"g{i}"] = (rs[i - 2] * m % mod2k) ^ rs[i - 1]
        for i in range(1, k + 1):
            regs[f"c{i}"] = self._c(pk, m, rs[i - 1], i)
        return ClassicalCipher(regs)

    def classical_decrypt(self, kp, cipher):
        k = kp["k"]
        return self._decode_bits(kp, [cipher.registers[f"c{i}"] for i in range(1, k + 1)])


class EllipticCurve(TrapdoorScheme):
    """``f(m,r) = m XOR x(rQ)`` with ``rP`` sent as classical side information."""

    scheme_id = "ecc"
    decryption_case = CASE1_G_OF_R

    def keygen(self, params, rng):
        curve = params.get("curve", DEFAULT_CURVE)
        if not isinstance(curve, Curve):
            curve = Curve(*curve)
        base = params.get("P", DEFAULT_BASE)
        if not isinstance(base, Point):
            base = Point(*base)
        if base.is_infinity or not curve.contains(base):
            raise ParameterError(f"{base} is not a finite point of {curve}")
        order = point_order(curve, base)
        if order < 3:
            raise ParameterError("base point order too small")
        s = params.get("s")
        s = int(rng.integers(1, order)) if s is None else int(s)
        if not 1 <= s < order:
            raise ParameterError(f"s must lie in [1, {order})")
        pk = PublicKey(self.scheme_id, {"curve": curve, "P": base, "Q": scalar_mul(curve, s, base), "order": order})
        kp = KeyPair(pk, {"s": s})
        self.check_keys(kp)
        return kp

    def check_keys(self, kp):
        if scalar_mul(kp["curve"], kp["s"], kp["P"]) != kp["Q"]:
            raise ParameterError("Q != sP")

    def message_width(self, pk):
        return pk["curve"].p.bit_length()

    def randomness_width(self, pk):
        return (pk["order"] - 1).bit_length()

    def randomness_domain(self, pk):
        c, q = pk["curve"], pk["Q"]
        return [r for r in range(1, pk["order"]) if not scalar_mul(c, r, q).is_infinity]

    def cipher_layout(self, pk):
        return RegisterLayout.of(("f", self.message_width(pk)))

    def encrypt(self, pk, message, r):
        w = self._check_message(pk, message)
        r = self._check_r(pk, r)
        c, q = pk["curve"], pk["Q"]
        st = message.extend("r", self.randomness_width(pk), r).extend("x2", w)
        st = apply_xor_oracle(st, lambda rr: scalar_mul(c, rr, q).x, ["r"], "x2")
        st = apply_xor_oracle(st, lambda x2: x2, ["x2"], MESSAGE)
        _, st = st.discard("x2")
        _, st = st.discard("r")
        rp = scalar_mul(c, r, pk["P"])
        return CipherState(self.scheme_id, st.rename({MESSAGE: "f"}), (rp.x, rp.y))

    def _shared_x(self, kp, classical) -> int:
        c = kp["curve"]
        if len(classical) != 2:
            raise ParameterError("elliptic-curve cipher needs rP as classical side information")
        rp = Point(*classical)
        if not c.contains(rp):
            raise ParameterError(f"{rp} is not on the curve")
        shared = scalar_mul(c, kp["s"], rp)
        if shared.is_infinity:
            raise ParameterError("s * rP is the point at infinity")
        return shared.x

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        w = self.message_width(kp.public)
        x2 = self._shared_x(kp, cipher.classical)
        st = cipher.state.extend("x2", w, x2)
        st = apply_xor_oracle(st, lambda v: v, ["x2"], "f")
        _, st = st.discard("x2")
        return st.rename({"f": MESSAGE}), None

    def classical_encrypt(self, pk, m, r):
        c = pk["curve"]
        rp = scalar_mul(c, r, pk["P"])
        return ClassicalCipher({"f": m ^ scalar_mul(c, r, pk["Q"]).x}, (rp.x, rp.y))

    def classical_decrypt(self, kp, cipher):
        return cipher.registers["f"] ^ self._shared_x(kp, cipher.classical)
