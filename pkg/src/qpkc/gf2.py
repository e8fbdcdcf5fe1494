"""GF(2) words, matrices and small linear codes with exhaustive syndrome decoding.

Row-vector convention throughout: a word ``w`` of width ``n`` times a
``n x m`` matrix gives a word of width ``m``. Bit ``j`` of a word (LSB at
index 0) is coordinate ``j`` of the row vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DecodingError, DimensionError, RankError

__all__ = [
    "BitWord",
    "GF2Matrix",
    "LinearCode",
    "mat_mul",
    "generalized_right_inverse",
    "random_invertible",
    "random_permutation_matrix",
    "syndrome_decode",
    "hamming74",
    "signing_code",
    "random_code",
    "words_of_weight",
]


@dataclass(frozen=True)
class BitWord:
    """Fixed-width bit string stored as a non-negative integer."""

    width: int
    value: int = 0

    def __post_init__(self):
        if self.width < 0:
            raise DimensionError("width must be non-negative")
        if not 0 <= self.value < (1 << self.width):
            raise DimensionError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitWord":
        value = 0
        for i, b in enumerate(bits):
            if b & 1:
                value |= 1 << i
        return cls(len(bits), value)

    @classmethod
    def from_string(cls, s: str) -> "BitWord":
        """Parse an MSB-first binary string."""
        return cls(len(s), int(s, 2) if s else 0)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.width))

    def bit(self, i: int) -> int:
        return (self.value >> i) & 1

    @property
    def weight(self) -> int:
        return bin(self.value).count("1")

    def to_string(self) -> str:
        return format(self.value, f"0{self.width}b") if self.width else ""

    def concat(self, high: "BitWord") -> "BitWord":
        """Return the word whose low bits are ``self`` and high bits ``high``."""
        return BitWord(self.width + high.width, self.value | (high.value << self.width))

    def split(self, low_width: int) -> tuple["BitWord", "BitWord"]:
        """Inverse of :meth:`concat`: ``(low, high)``."""
        if not 0 <= low_width <= self.width:
            raise DimensionError("split point out of range")
        low = self.value & ((1 << low_width) - 1)
        return BitWord(low_width, low), BitWord(self.width - low_width, self.value >> low_width)

    def __xor__(self, other: "BitWord") -> "BitWord":
        if not isinstance(other, BitWord):
            return NotImplemented
        if other.width != self.width:
            raise DimensionError(f"width mismatch: {self.width} vs {other.width}")
        return BitWord(self.width, self.value ^ other.value)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return self.to_string()

    def to_json(self) -> dict:
        return {"width": self.width, "value": self.to_string()}

    @classmethod
    def from_json(cls, obj: dict) -> "BitWord":
        word = cls.from_string(obj["value"])
        if word.width != obj["width"]:
            raise DimensionError("declared width does not match value string")
        return word


def words_of_weight(n: int, w: int) -> Iterator[BitWord]:
    """All width-``n`` words of Hamming weight ``w``, in lexicographic support order."""
    for support in combinations(range(n), w):
        value = 0
        for i in support:
            value |= 1 << i
        yield BitWord(n, value)


class GF2Matrix:
    """Immutable dense bit matrix."""

    __slots__ = ("data", "__dict__")

    def __init__(self, data):
        arr = np.array(data, dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionError("GF2Matrix needs a 2-D array")
        arr %= 2
        arr.setflags(write=False)
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def hstack(cls, *blocks: "GF2Matrix") -> "GF2Matrix":
        return cls(np.hstack([b.data for b in blocks]))

    @property
    def T(self) -> "GF2Matrix":
        return GF2Matrix(self.data.T)

    @cached_property
    def row_ints(self) -> tuple[int, ...]:
        weights = 1 << np.arange(self.cols, dtype=object)
        return tuple(int(np.dot(row.astype(object), weights)) for row in self.data)

    def vec_mul(self, word: BitWord) -> BitWord:
        """Row vector ``word`` times this matrix."""
        if word.width != self.rows:
            raise DimensionError(f"word width {word.width} != matrix rows {self.rows}")
        return BitWord(self.cols, self.mul_int(word.value))

    def mul_int(self, value: int) -> int:
        acc = 0
        rows = self.row_ints
        i = 0
        while value:
            if value & 1:
                acc ^= rows[i]
            value >>= 1
            i += 1
        return acc

    @cached_property
    def rank(self) -> int:
        return len(_row_reduce(self.data)[1])

    @property
    def is_full_row_rank(self) -> bool:
        return self.rank == self.rows

    def inverse(self) -> "GF2Matrix":
        if self.rows != self.cols:
            raise DimensionError("only square matrices have a two-sided inverse")
        return generalized_right_inverse(self)

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        body = ",".join("".join(str(b) for b in row) for row in self.data)
        return f"GF2Matrix({self.rows}x{self.cols}: {body})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "data": ["".join(str(int(b)) for b in row) for row in self.data],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GF2Matrix":
        rows, cols = obj["rows"], obj["cols"]
        data = obj["data"]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionError("matrix JSON does not match declared shape")
        if rows == 0:
            return cls(np.zeros((0, cols), dtype=np.uint8))
        return cls([[int(c) for c in r] for r in data])


def mat_mul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    prod = a.data.astype(np.int64) @ b.data.astype(np.int64)
    return GF2Matrix(prod % 2)


def _row_reduce(data: np.ndarray) -> tuple[np.ndarray, list[int], np.ndarray]:
    """Reduced row echelon form with lowest-index pivots.

    Returns ``(rref, pivot_cols, transform)`` with ``transform @ data == rref``.
    """
    mat = np.array(data, dtype=np.uint8) % 2
    m, n = mat.shape
    transform = np.eye(m, dtype=np.uint8)
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        hits = np.nonzero(mat[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
            transform[[row, pivot]] = transform[[pivot, row]]
        for r in range(m):
            if r != row and mat[r, col]:
                mat[r] ^= mat[row]
                transform[r] ^= transform[row]
        pivots.append(col)
        row += 1
    return mat, pivots, transform


def generalized_right_inverse(g: GF2Matrix) -> GF2Matrix:
    """Deterministic ``X`` (n x k) with ``g @ X == I_k`` for a full-row-rank ``g``.

    Rows of ``X`` at the RREF pivot columns carry the elimination transform;
    all other rows are zero.
    """
    k, n = g.shape
    rref, pivots, transform = _row_reduce(g.data)
    if len(pivots) < k:
        raise RankError(f"matrix has rank {len(pivots)} < {k} rows")
    x = np.zeros((n, k), dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = transform[i]
    return GF2Matrix(x)


def random_invertible(k: int, rng: np.random.Generator) -> GF2Matrix:
    if k < 1:
        raise DimensionError("k must be >= 1")
    while True:
        m = GF2Matrix(rng.integers(0, 2, size=(k, k), dtype=np.uint8))
        if m.rank == k:
            return m


def random_permutation_matrix(n: int, rng: np.random.Generator) -> GF2Matrix:
    if n < 1:
        raise DimensionError("n must be >= 1")
    perm = rng.permutation(n)
    p = np.zeros((n, n), dtype=np.uint8)
    p[np.arange(n), perm] = 1
    return GF2Matrix(p)


class LinearCode:
    """Binary linear code with generator, parity check and a certified radius ``t``.

    Construction enumerates every error of weight <= t and checks that the
    syndromes are pairwise distinct; the resulting table is the decoder.
    """

    def __init__(self, generator: GF2Matrix, check: GF2Matrix, t: int):
        if generator.cols != check.cols:
            raise DimensionError("generator and check matrix lengths differ")
        if not generator.is_full_row_rank:
            raise RankError("generator must have full row rank")
        if check.rows != generator.cols - generator.rows:
            raise DimensionError("check matrix must have n-k rows")
        if np.any(mat_mul(generator, check.T).data):
            raise ValueError("generator @ check.T is not zero")
        self.generator = generator
        self.check = check
        self.t = t
        self._table = self._build_table()

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (self.generator, self.check, self.t) == (other.generator, other.check, other.t)

    def __hash__(self):
        return hash((self.generator, self.check, self.t))

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    def syndrome(self, word: BitWord) -> BitWord:
        return self.check.T.vec_mul(word)

    def _build_table(self) -> dict[int, int]:
        table: dict[int, int] = {}
        check_t = self.check.T
        for w in range(self.t + 1):
            for e in words_of_weight(self.n, w):
                s = check_t.mul_int(e.value)
                if s in table:
                    raise DecodingError(
                        f"syndrome collision at weight {w}: code does not correct {self.t} errors"
                    )
                table[s] = e.value
        return table

    def __repr__(self) -> str:
        return f"LinearCode([{self.n},{self.k}], t={self.t})"

    def to_json(self) -> dict:
        return {"generator": self.generator.to_json(), "check": self.check.to_json(), "t": self.t}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        return cls(GF2Matrix.from_json(obj["generator"]), GF2Matrix.from_json(obj["check"]), obj["t"])

    @classmethod
    def standard_form(cls, a: GF2Matrix, t: int) -> "LinearCode":
        """Code generated by ``[I_k | A]`` with check ``[A^T | I_{n-k}]``."""
        k, r = a.shape
        g = GF2Matrix.hstack(GF2Matrix.identity(k), a)
        h = GF2Matrix.hstack(a.T, GF2Matrix.identity(r))
        return cls(g, h, t)


def syndrome_decode(code: LinearCode, syndrome: BitWord) -> BitWord:
    if syndrome.width != code.n - code.k:
        raise DimensionError(f"syndrome width {syndrome.width} != n-k = {code.n - code.k}")
    try:
        return BitWord(code.n, code._table[syndrome.value])
    except KeyError:
        raise DecodingError(f"no error of weight <= {code.t} has syndrome {syndrome}") from None


def certified_radius(generator: GF2Matrix, check: GF2Matrix) -> int:
    """Largest ``t`` for which all errors of weight <= t have distinct syndromes."""
    n = generator.cols
    seen: set[int] = set()
    check_t = check.T
    t = -1
    for w in range(n + 1):
        for e in words_of_weight(n, w):
            s = check_t.mul_int(e.value)
            if s in seen:
                return t
            seen.add(s)
        t = w
    return t


_HAMMING74_A = [
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
]

# random_code(12, 4, 2, np.random.default_rng(0)), frozen so keys do not depend on search order
_SIGNING_A = [
    [1, 1, 1, 0, 0, 0, 1, 0],
    [1, 0, 1, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 1, 0, 0, 1],
    [1, 1, 1, 0, 1, 0, 0, 1],
]


def hamming74() -> LinearCode:
    """The [7,4] Hamming code in standard form, ``t = 1``."""
    return LinearCode.standard_form(GF2Matrix(_HAMMING74_A), 1)


def signing_code() -> LinearCode:
    """Even-length [12,4] code with ``t = 2`` used by the McEliece signature."""
    return LinearCode.standard_form(GF2Matrix(_SIGNING_A), 2)


def random_code(n: int, k: int, t: int, rng: np.random.Generator, max_tries: int = 10_000) -> LinearCode:
    """Search standard-form ``[n,k]`` codes until one certifies radius ``t``."""
    if not 0 < k < n:
        raise DimensionError("need 0 < k < n")
    for _ in range(max_tries):
        a = GF2Matrix(rng.integers(0, 2, size=(k, n - k), dtype=np.uint8))
        g = GF2Matrix.hstack(GF2Matrix.identity(k), a)
        h = GF2Matrix.hstack(a.T, GF2Matrix.identity(n - k))
        if certified_radius(g, h) >= t:
            return LinearCode(g, h, t)
    raise DecodingError(f"no [{n},{k}] code with t={t} found in {max_tries} tries")


def all_words(n: int) -> Iterable[BitWord]:
    return (BitWord(n, v) for v in range(1 << n))
