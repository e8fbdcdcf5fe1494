"""Short-Weierstrass curves over small prime fields, affine coordinates."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .numtheory import is_prime

__all__ = [
    "Curve",
    "Point",
    "INFINITY",
    "point_add",
    "point_neg",
    "scalar_mul",
    "curve_points",
    "point_order",
    "DEFAULT_CURVE",
    "DEFAULT_BASE",
]


@dataclass(frozen=True)
class Point:
    x: int | None = None
    y: int | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self) -> dict:
        if self.is_infinity:
            return {"inf": True, "x": None, "y": None}
        return {"inf": False, "x": self.x, "y": self.y}

    @classmethod
    def from_json(cls, obj: dict) -> "Point":
        if obj["inf"]:
            return INFINITY
        return cls(int(obj["x"]), int(obj["y"]))


INFINITY = Point()


@dataclass(frozen=True)
class Curve:
    """``y^2 = x^3 + a x + b (mod p)``."""

    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.p <= 3 or not is_prime(self.p):
            raise ParameterError(f"p = {self.p} must be a prime > 3")
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise ParameterError("singular curve: 4a^3 + 27b^2 = 0 mod p")

    def contains(self, pt: Point) -> bool:
        if pt.is_infinity:
            return True
        x, y = pt.x, pt.y
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x**3 + self.a * x + self.b)) % self.p == 0

    def to_json(self) -> dict:
        return {"p": self.p, "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, obj: dict) -> "Curve":
        return cls(int(obj["p"]), int(obj["a"]), int(obj["b"]))


def _require(c: Curve, *pts: Point) -> None:
    for pt in pts:
        if not c.contains(pt):
            raise ParameterError(f"{pt} is not on {c}")


def point_neg(c: Curve, pt: Point) -> Point:
    _require(c, pt)
    if pt.is_infinity:
        return pt
    return Point(pt.x, (-pt.y) % c.p)


def point_add(c: Curve, p1: Point, p2: Point) -> Point:
    _require(c, p1, p2)
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = c.p
    if p1.x == p2.x and (p1.y + p2.y) % p == 0:
        return INFINITY
    if p1 == p2:
        slope = (3 * p1.x * p1.x + c.a) * pow(2 * p1.y, -1, p) % p
    else:
        slope = (p2.y - p1.y) * pow(p2.x - p1.x, -1, p) % p
    x3 = (slope * slope - p1.x - p2.x) % p
    y3 = (slope * (p1.x - x3) - p1.y) % p
    return Point(x3, y3)


def scalar_mul(c: Curve, k: int, pt: Point) -> Point:
    """Double-and-add, least significant bit first."""
    _require(c, pt)
    if k < 0:
        raise ParameterError("scalar must be non-negative")
    result, addend = INFINITY, pt
    while k:
        if k & 1:
            result = point_add(c, result, addend)
        addend = point_add(c, addend, addend)
        k >>= 1
    return result


def curve_points(c: Curve) -> list[Point]:
    """Every point of the curve, infinity first, by enumeration."""
    squares: dict[int, list[int]] = {}
    for y in range(c.p):
        squares.setdefault(y * y % c.p, []).append(y)
    pts = [INFINITY]
    for x in range(c.p):
        rhs = (x**3 + c.a * x + c.b) % c.p
        pts.extend(Point(x, y) for y in squares.get(rhs, []))
    return pts


def point_order(c: Curve, pt: Point) -> int:
    _require(c, pt)
    k, acc = 1, pt
    while not acc.is_infinity:
        acc = point_add(c, acc, pt)
        k += 1
    return k


DEFAULT_CURVE = Curve(11, 1, 6)
DEFAULT_BASE = Point(2, 7)
