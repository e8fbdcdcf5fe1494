"""Quantum McEliece, Niederreiter and Okamoto-Tanaka-Uchiyama encryption."""
from __future__ import annotations

from math import prod

import numpy as np

from ..errors import DecodingError, ParameterError
from ..gf2 import (
    BitWord,
    GF2Matrix,
    LinearCode,
    generalized_right_inverse,
    hamming74,
    random_invertible,
    random_permutation_matrix,
    signing_code,
    syndrome_decode,
    words_of_weight,
)
from ..numtheory import CwCode, cw_decode, cw_encode, dlog_bruteforce, is_generator, is_prime, primitive_roots
from ..qsim import (
    PureState,
    RegisterLayout,
    apply_uncompute,
    apply_xor_oracle,
    measure_register,
    outcome_probabilities,
)
from .base import CASE2_RECOVERS_R, MESSAGE, CipherState, ClassicalCipher, KeyPair, PublicKey, TrapdoorScheme

NAMED_CODES = {"hamming74": hamming74, "signing": signing_code}

DETERMINISTIC_TOL = 1e-9


def resolve_code(code) -> LinearCode:
    if isinstance(code, LinearCode):
        return code
    try:
        return NAMED_CODES[code]()
    except KeyError:
        raise ParameterError(f"unknown code {code!r}; known: {sorted(NAMED_CODES)}") from None


def _measure_deterministic(st: PureState, register: str, rng: np.random.Generator) -> tuple[BitWord, PureState]:
    """Measure a register that should be a tensor factor and check the outcome was certain."""
    probs = outcome_probabilities(st, register)
    outcome, st = measure_register(st, register, rng)
    if abs(probs[outcome.value] - 1.0) > DETERMINISTIC_TOL:
        raise DecodingError(f"register {register!r} is not in a definite state: {len(probs)} outcomes")
    return outcome, st


def _xor_constant(st: PureState, target: str, value: int) -> PureState:
    w = st.layout.width_of(target)
    st = st.extend("_const", w, value)
    st = apply_xor_oracle(st, lambda v: v, ["_const"], target)
    return st.discard("_const")[1]


def _weight_t_domain(n: int, t: int) -> list[int]:
    return [w.value for w in words_of_weight(n, t)]


class McEliece(TrapdoorScheme):
    """``f(m,r) = mG' XOR r`` with ``G' = SGP``; ``g`` is identically zero so only ``f`` is sent."""

    scheme_id = "mceliece"
    decryption_case = CASE2_RECOVERS_R

    def keygen(self, params, rng):
        code = resolve_code(params.get("code", "hamming74"))
        s = params.get("S")
        s = random_invertible(code.k, rng) if s is None else GF2Matrix(s)
        p = params.get("P")
        p = random_permutation_matrix(code.n, rng) if p is None else GF2Matrix(p)
        if s.shape != (code.k, code.k) or s.rank != code.k:
            raise ParameterError("S must be an invertible k x k matrix")
        if p.shape != (code.n, code.n) or p.rank != code.n or int(p.data.sum()) != code.n:
            raise ParameterError("P must be an n x n permutation matrix")
        g_pub = s @ code.generator @ p
        pk = PublicKey(self.scheme_id, {"G_pub": g_pub, "t": code.t, "n": code.n, "k": code.k})
        kp = KeyPair(pk, {"S": s, "P": p, "code": code})
        self.check_keys(kp)
        return kp

    def check_keys(self, kp):
        if kp["S"] @ kp["code"].generator @ kp["P"] != kp["G_pub"]:
            raise ParameterError("G' != SGP")

    def message_width(self, pk):
        return pk["k"]

    def randomness_width(self, pk):
        return pk["n"]

    def randomness_domain(self, pk):
        return _weight_t_domain(pk["n"], pk["t"])

    def cipher_layout(self, pk):
        return RegisterLayout.of(("f", pk["n"]))

    def encrypt(self, pk, message, r):
        self._check_message(pk, message)
        r = self._check_r(pk, r)
        g_pub = pk["G_pub"]
        g_inv = generalized_right_inverse(g_pub)
        st = message.extend("f", pk["n"])
        st = apply_xor_oracle(st, g_pub.mul_int, [MESSAGE], "f")
        st = apply_uncompute(st, g_inv.mul_int, ["f"], MESSAGE)
        st = st.drop_zero(MESSAGE)
        st = _xor_constant(st, "f", r)
        return CipherState(self.scheme_id, st)

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        code, s, p = kp["code"], kp["S"], kp["P"]
        n, k = code.n, code.k
        p_inv, s_inv = p.inverse(), s.inverse()
        g_inv = generalized_right_inverse(code.generator)
        check_t = code.check.T
        st = cipher.state.extend("y", n)
        st = apply_xor_oracle(st, p_inv.mul_int, ["f"], "y")
        st = apply_uncompute(st, p.mul_int, ["y"], "f").drop_zero("f")
        st = st.extend("z", n - k)
        st = apply_xor_oracle(st, check_t.mul_int, ["y"], "z")
        syn, st = _measure_deterministic(st, "z", rng)
        e = syndrome_decode(code, syn)
        st = _xor_constant(st, "y", e.value)
        st = st.discard("z")[1]
        st = st.extend("w", k)
        st = apply_xor_oracle(st, g_inv.mul_int, ["y"], "w")
        st = apply_uncompute(st, code.generator.mul_int, ["w"], "y").drop_zero("y")
        st = st.extend(MESSAGE, k)
        st = apply_xor_oracle(st, s_inv.mul_int, ["w"], MESSAGE)
        st = apply_uncompute(st, s.mul_int, [MESSAGE], "w").drop_zero("w")
        return st, BitWord(n, p.mul_int(e.value))

    def classical_encrypt(self, pk, m, r):
        return ClassicalCipher({"f": pk["G_pub"].mul_int(m) ^ r})

    def classical_decrypt(self, kp, cipher):
        code = kp["code"]
        y = kp["P"].inverse().mul_int(cipher.registers["f"])
        e = syndrome_decode(code, code.syndrome(BitWord(code.n, y)))
        ms = generalized_right_inverse(code.generator).mul_int(y ^ e.value)
        return kp["S"].inverse().mul_int(ms)


class Niederreiter(TrapdoorScheme):
    """``g(m,r) = m XOR r``, ``f(m,r) = mH'^T`` with ``H' = MHP`` and ``w(r) = t``."""

    scheme_id = "niederreiter"
    decryption_case = CASE2_RECOVERS_R

    def keygen(self, params, rng):
        code = resolve_code(params.get("code", "hamming74"))
        r = code.n - code.k
        m = params.get("M")
        m = random_invertible(r, rng) if m is None else GF2Matrix(m)
        p = params.get("P")
        p = random_permutation_matrix(code.n, rng) if p is None else GF2Matrix(p)
        if m.shape != (r, r) or m.rank != r:
            raise ParameterError("M must be an invertible (n-k) x (n-k) matrix")
        if p.shape != (code.n, code.n) or p.rank != code.n or int(p.data.sum()) != code.n:
            raise ParameterError("P must be an n x n permutation matrix")
        h_pub = m @ code.check @ p
        pk = PublicKey(self.scheme_id, {"H_pub": h_pub, "t": code.t, "n": code.n, "k": code.k})
        kp = KeyPair(pk, {"M": m, "P": p, "code": code})
        self.check_keys(kp)
        return kp

    def check_keys(self, kp):
        if kp["M"] @ kp["code"].check @ kp["P"] != kp["H_pub"]:
            raise ParameterError("H' != MHP")

    def message_width(self, pk):
        return pk["n"]

    def randomness_width(self, pk):
        return pk["n"]

    def randomness_domain(self, pk):
        return _weight_t_domain(pk["n"], pk["t"])

    def cipher_layout(self, pk):
        return RegisterLayout.of(("g", pk["n"]), ("f", pk["n"] - pk["k"]))

    def encrypt(self, pk, message, r):
        n = self._check_message(pk, message)
        r = self._check_r(pk, r)
        h_t = pk["H_pub"].T
        st = message.extend("r", n, r).extend("f", n - pk["k"])
        st = apply_xor_oracle(st, h_t.mul_int, [MESSAGE], "f")
        st = apply_xor_oracle(st, lambda v: v, ["r"], MESSAGE)
        st = st.discard("r")[1]
        return CipherState(self.scheme_id, st.rename({MESSAGE: "g"}))

    def _recover_r(self, kp, syn: int) -> BitWord:
        code = kp["code"]
        # s = e H^T M^T with e = rP^T, so strip M^T then decode
        plain = kp["M"].T.inverse().mul_int(syn)
        e = syndrome_decode(code, BitWord(code.n - code.k, plain))
        return BitWord(code.n, kp["P"].mul_int(e.value))

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        h_t = kp["H_pub"].T
        st = apply_xor_oracle(cipher.state, h_t.mul_int, ["g"], "f")
        syn, st = _measure_deterministic(st, "f", rng)
        r = self._recover_r(kp, syn.value)
        st = _xor_constant(st, "g", r.value)
        st = st.discard("f")[1]
        return st.rename({"g": MESSAGE}), r

    def classical_encrypt(self, pk, m, r):
        return ClassicalCipher({"g": m ^ r, "f": pk["H_pub"].T.mul_int(m)})

    def classical_decrypt(self, kp, cipher):
        h_t = kp["H_pub"].T
        g = cipher.registers["g"]
        r = self._recover_r(kp, h_t.mul_int(g) ^ cipher.registers["f"])
        return g ^ r.value


class OkamotoTanakaUchiyama(TrapdoorScheme):
    """Knapsack ``c = sum e_i b_i`` of the constant-weight encoding ``e`` of ``m``.

    ``g(m,r) = m XOR r`` carries the randomness; decryption recovers ``e``
    from which primes divide ``g^(c - kd) mod p``.
    """

    scheme_id = "otu"
    decryption_case = CASE2_RECOVERS_R

    def keygen(self, params, rng):
        primes = [int(x) for x in params.get("primes", (2, 3, 5, 7))]
        n = len(primes)
        k = int(params.get("k", 2))
        if not 1 <= k < n:
            raise ParameterError("need 1 <= k < n")
        if len(set(primes)) != n or not all(is_prime(x) for x in primes):
            raise ParameterError("p_1..p_n must be distinct primes")
        bound = prod(sorted(primes)[-k:])
        p = params.get("p")
        if p is None:
            p = int(rng.choice([x for x in range(bound + 1, 2 * bound + 2) if is_prime(x)]))
        p = int(p)
        if not is_prime(p):
            raise ParameterError(f"p = {p} is not prime")
        if p <= bound:
            raise ParameterError(f"p = {p} must exceed the product {bound} of the {k} largest p_i")
        g = params.get("g")
        g = int(rng.choice(primitive_roots(p))) if g is None else int(g)
        d = params.get("d")
        d = int(rng.integers(0, p - 1)) if d is None else int(d)
        b = tuple((d + dlog_bruteforce(g, pi, p)) % (p - 1) for pi in primes)
        pk = PublicKey(self.scheme_id, {"n": n, "k": k, "b": b})
        kp = KeyPair(pk, {"g": g, "d": d, "p": p, "primes": tuple(primes)})
        self.check_keys(kp)
        return kp

    def check_keys(self, kp):
        p, g, d = kp["p"], kp["g"], kp["d"]
        if not is_generator(g, p):
            raise ParameterError(f"g = {g} does not generate Z_{p}^*")
        for bi, pi in zip(kp["b"], kp["primes"]):
            if pow(g, (bi - d) % (p - 1), p) != pi % p:
                raise ParameterError("b_i != d + dlog_g(p_i) mod (p-1)")

    def cw(self, pk) -> CwCode:
        return CwCode(pk["n"], pk["k"])

    def message_width(self, pk):
        return max(1, (self.cw(pk).size - 1).bit_length())

    def message_space(self, pk):
        return range(self.cw(pk).size)

    def randomness_width(self, pk):
        return self.message_width(pk)

    def randomness_domain(self, pk):
        return range(1 << self.message_width(pk))

    def cipher_width(self, pk) -> int:
        return sum(sorted(pk["b"])[-pk["k"]:]).bit_length()

    def cipher_layout(self, pk):
        return RegisterLayout.of(("g", self.message_width(pk)), ("f", max(1, self.cipher_width(pk))))

    def _knapsack(self, pk, e: int) -> int:
        return sum(bi for i, bi in enumerate(pk["b"]) if (e >> i) & 1)

    def _encode(self, pk, m: int) -> int:
        return cw_encode(m, self.cw(pk)).value

    def _decode(self, kp, c: int) -> int:
        p = kp["p"]
        u = pow(kp["g"], (c - kp["k"] * kp["d"]) % (p - 1), p)
        return sum(1 << i for i, pi in enumerate(kp["primes"]) if u % pi == 0)

    def encrypt(self, pk, message, r):
        w = self._check_message(pk, message)
        r = self._check_r(pk, r)
        n = pk["n"]
        st = message.extend("r", w, r).extend("e", n).extend("f", self.cipher_layout(pk).width_of("f"))
        st = apply_xor_oracle(st, lambda m: self._encode(pk, m), [MESSAGE], "e")
        st = apply_xor_oracle(st, lambda e: self._knapsack(pk, e), ["e"], "f")
        st = apply_uncompute(st, lambda m: self._encode(pk, m), [MESSAGE], "e").drop_zero("e")
        st = apply_xor_oracle(st, lambda v: v, ["r"], MESSAGE)
        st = st.discard("r")[1]
        return CipherState(self.scheme_id, st.rename({MESSAGE: "g"}))

    def decrypt(self, kp, cipher, rng):
        self._check_cipher(kp, cipher)
        pk = kp.public
        w, n = self.message_width(pk), pk["n"]
        st = cipher.state.extend("e", n).extend(MESSAGE, w)
        st = apply_xor_oracle(st, lambda c: self._decode(kp, c), ["f"], "e")
        st = apply_xor_oracle(st, lambda e: cw_decode(BitWord(n, e), self.cw(pk)), ["e"], MESSAGE)
        st = apply_xor_oracle(st, lambda m: m, [MESSAGE], "g")
        r, st = st.discard("g")
        st = apply_uncompute(st, lambda e: self._knapsack(pk, e), ["e"], "f").drop_zero("f")
        st = apply_uncompute(st, lambda m: self._encode(pk, m), [MESSAGE], "e").drop_zero("e")
        return st, BitWord(w, r)

    def classical_encrypt(self, pk, m, r):
        return ClassicalCipher({"g": m ^ r, "f": self._knapsack(pk, self._encode(pk, m))})

    def classical_decrypt(self, kp, cipher):
        return cw_decode(BitWord(kp["n"], self._decode(kp, cipher.registers["f"])), self.cw(kp.public))
