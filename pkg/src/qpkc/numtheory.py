"""Modular arithmetic, residuosity, discrete logs and constant-weight codes at desk scale."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd

from .errors import ParameterError
from .gf2 import BitWord

__all__ = [
    "Modulus",
    "CwCode",
    "is_prime",
    "mod_pow",
    "mod_inv",
    "jacobi",
    "is_qr",
    "dlog_bruteforce",
    "multiplicative_order",
    "is_generator",
    "primitive_roots",
    "cw_encode",
    "cw_decode",
]

# Largest modulus accepted anywhere; exhaustive algorithms assume far less.
MAX_MODULUS = 1 << 63


def is_prime(n: int) -> bool:
    """Trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Modulus:
    n: int
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        if not 1 <= self.n < MAX_MODULUS:
            raise ParameterError(f"modulus {self.n} outside [1, 2^63)")
        if (self.p is None) != (self.q is None):
            raise ParameterError("give both factors or neither")
        if self.p is not None:
            if self.p * self.q != self.n:
                raise ParameterError(f"{self.p} * {self.q} != {self.n}")
            if not (is_prime(self.p) and is_prime(self.q)):
                raise ParameterError("factors must be prime")

    @property
    def factored(self) -> bool:
        return self.p is not None

    @property
    def phi(self) -> int:
        if not self.factored:
            raise ParameterError("phi needs the factorization")
        if self.p == self.q:
            return self.p * (self.p - 1)
        return (self.p - 1) * (self.q - 1)


def _n(m: Modulus | int) -> int:
    return m.n if isinstance(m, Modulus) else int(m)


def mod_pow(base: int, exp: int, m: Modulus | int) -> int:
    n = _n(m)
    if n < 2:
        raise ParameterError("modulus must be >= 2")
    if exp < 0:
        raise ParameterError("negative exponent; use mod_inv")
    return pow(base, exp, n)


def mod_inv(a: int, m: Modulus | int) -> int:
    n = _n(m)
    if gcd(a, n) != 1:
        raise ParameterError(f"{a} is not invertible modulo {n}")
    return pow(a, -1, n)


def jacobi(a: int, n: int) -> int:
    if n < 3 or n % 2 == 0:
        raise ParameterError("Jacobi symbol needs an odd n >= 3")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _euler_residue(x: int, p: int) -> bool:
    if p == 2:
        return True
    return pow(x, (p - 1) // 2, p) == 1


def is_qr(x: int, m: Modulus) -> bool:
    """Quadratic residuosity modulo ``N = pq`` via Euler's criterion on both factors."""
    if not m.factored:
        raise ParameterError("residuosity test needs the factorization")
    if gcd(x, m.n) != 1:
        raise ParameterError(f"{x} is not coprime to {m.n}")
    return _euler_residue(x % m.p, m.p) and _euler_residue(x % m.q, m.q)


def dlog_bruteforce(g: int, h: int, p: int) -> int:
    """Smallest ``x >= 0`` with ``g^x = h (mod p)``, by exhaustive search."""
    if p >= 1 << 20:
        raise ParameterError("exhaustive discrete log limited to p < 2^20")
    h %= p
    acc = 1
    for x in range(p):
        if acc == h:
            return x
        acc = acc * g % p
        if acc == 1 and x > 0:
            break
    raise ParameterError(f"{h} is not a power of {g} modulo {p}")


def multiplicative_order(g: int, p: int) -> int:
    if gcd(g, p) != 1:
        raise ParameterError(f"{g} is not a unit modulo {p}")
    acc, k = g % p, 1
    while acc != 1:
        acc = acc * g % p
        k += 1
    return k


def is_generator(g: int, p: int) -> bool:
    return gcd(g, p) == 1 and multiplicative_order(g, p) == p - 1


def primitive_roots(p: int) -> list[int]:
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    return [g for g in range(2, p) if is_generator(g, p)] if p > 2 else [1]


@dataclass(frozen=True)
class CwCode:
    """Constant-weight words of length ``n`` and weight ``k``."""

    n: int
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ParameterError("need 0 <= k <= n")

    @property
    def size(self) -> int:
        return comb(self.n, self.k)


def cw_decode(e: BitWord, code: CwCode) -> int:
    """Rank of a weight-k word: sum over i of e_i * C(n-i, k - sum_{j<i} e_j).

    ``e_i`` (1-based) is bit ``i-1`` of the word.
    """
    if e.width != code.n:
        raise ParameterError(f"word width {e.width} != n = {code.n}")
    if e.weight != code.k:
        raise ParameterError(f"word weight {e.weight} != k = {code.k}")
    m, used = 0, 0
    for i in range(1, code.n + 1):
        if e.bit(i - 1):
            m += comb(code.n - i, code.k - used)
            used += 1
    return m


def cw_encode(m: int, code: CwCode) -> BitWord:
    if not 0 <= m < code.size:
        raise ParameterError(f"message {m} outside [0, {code.size})")
    value, left = 0, code.k
    for i in range(1, code.n + 1):
        skip = comb(code.n - i, left)
        if left and m >= skip:
            value |= 1 << (i - 1)
            m -= skip
            left -= 1
    return BitWord(code.n, value)
