from itertools import combinations
from math import comb, gcd

import pytest
from hypothesis import given, strategies as st

from qpkc.errors import ParameterError
from qpkc.gf2 import BitWord
from qpkc.numtheory import (
    CwCode,
    Modulus,
    cw_decode,
    cw_encode,
    dlog_bruteforce,
    is_generator,
    is_prime,
    is_qr,
    jacobi,
    mod_inv,
    mod_pow,
    multiplicative_order,
    primitive_roots,
)

SMALL_PRIMES = [p for p in range(3, 60) if all(p % d for d in range(2, p))]


def test_is_prime_against_sieve():
    sieve = [True] * 200
    sieve[0] = sieve[1] = False
    for i in range(2, 200):
        if sieve[i]:
            for j in range(i * i, 200, i):
                sieve[j] = False
    assert [n for n in range(200) if is_prime(n)] == [n for n in range(200) if sieve[n]]


def test_mod_pow_and_inverse():
    assert mod_pow(7, 3, 15) == 13  # 343 = 22 * 15 + 13
    assert mod_inv(3, 8) == 3
    with pytest.raises(ParameterError):
        mod_inv(6, 15)


def test_modulus_validation():
    assert Modulus(15, 3, 5).phi == 8
    with pytest.raises(ParameterError):
        Modulus(15, 3, 7)
    with pytest.raises(ParameterError):
        Modulus(16, 4, 4)
    with pytest.raises(ParameterError):
        Modulus(1 << 64)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_jacobi_is_legendre_for_primes(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(p):
        expected = 0 if a == 0 else (1 if a in squares else -1)
        assert jacobi(a, p) == expected


@given(st.sampled_from(SMALL_PRIMES), st.sampled_from(SMALL_PRIMES), st.integers(0, 10_000))
def test_jacobi_is_multiplicative_in_the_modulus(p, q, a):
    assert jacobi(a, p * q) == jacobi(a, p) * jacobi(a, q)


@pytest.mark.parametrize("p,q", [(3, 5), (3, 11), (5, 7), (7, 11)])
def test_is_qr_against_square_table(p, q):
    n = p * q
    squares = {x * x % n for x in range(n) if gcd(x, n) == 1}
    m = Modulus(n, p, q)
    for a in range(1, n):
        if gcd(a, n) == 1:
            assert is_qr(a, m) == (a in squares)


def test_is_qr_needs_factors():
    with pytest.raises(ParameterError):
        is_qr(4, Modulus(15))


def test_dlog_examples():
    assert dlog_bruteforce(2, 7, 11) == 7  # 2^7 = 128 = 11 * 11 + 7
    for p in (11, 23, 37):
        for g in primitive_roots(p):
            for x in range(p - 1):
                assert dlog_bruteforce(g, pow(g, x, p), p) == x


def test_dlog_missing():
    # 4 has order 3 mod 7 and generates {1, 2, 4}
    assert dlog_bruteforce(4, 2, 7) == 2
    with pytest.raises(ParameterError):
        dlog_bruteforce(4, 3, 7)


def test_primitive_roots():
    assert primitive_roots(11) == [2, 6, 7, 8]
    for p in (11, 23):
        for g in range(2, p):
            powers = {pow(g, k, p) for k in range(p - 1)}
            assert is_generator(g, p) == (len(powers) == p - 1)
            assert multiplicative_order(g, p) == len(powers)


def test_cw_worked_example():
    code = CwCode(4, 2)
    ranks = {cw_encode(m, code).to_string(): m for m in range(code.size)}
    # bit i-1 is e_i, so the string reads e_4 e_3 e_2 e_1
    assert ranks == {"0011": 5, "0101": 4, "1001": 3, "0110": 2, "1010": 1, "1100": 0}


@pytest.mark.parametrize("n", range(1, 11))
def test_cw_bijection(n):
    for k in range(n + 1):
        code = CwCode(n, k)
        words = {sum(1 << i for i in c) for c in combinations(range(n), k)}
        decoded = sorted(cw_decode(BitWord(n, w), code) for w in words)
        assert decoded == list(range(comb(n, k)))
        for m in range(code.size):
            assert cw_decode(cw_encode(m, code), code) == m


def test_cw_rejects_bad_input():
    code = CwCode(4, 2)
    with pytest.raises(ParameterError):
        cw_decode(BitWord(4, 0b0111), code)
    with pytest.raises(ParameterError):
        cw_encode(6, code)
