import pytest
from hypothesis import given, strategies as st

from qpkc.ecurve import (
    DEFAULT_BASE,
    DEFAULT_CURVE,
    INFINITY,
    Curve,
    Point,
    curve_points,
    point_add,
    point_neg,
    point_order,
    scalar_mul,
)
from qpkc.errors import ParameterError

CURVES = [Curve(11, 1, 6), Curve(13, 2, 3), Curve(17, 2, 2), Curve(23, 1, 1)]


def chord_oracle(c, p1, p2):
    """Group law by geometry: find the line through p1, p2 by search and its third intersection."""
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = c.p
    if p1.x == p2.x and (p1.y + p2.y) % p == 0:
        return INFINITY
    if p1 == p2:
        num, den = 3 * p1.x * p1.x + c.a, 2 * p1.y
    else:
        num, den = p2.y - p1.y, p2.x - p1.x
    slope = next(s for s in range(p) if (s * den - num) % p == 0)
    # cubic x^3 + a x + b - (slope (x - x1) + y1)^2 has roots x1, x2, x3 summing to slope^2
    x3 = (slope * slope - p1.x - p2.x) % p
    y_line = (slope * (x3 - p1.x) + p1.y) % p
    third = Point(x3, y_line)
    assert c.contains(third)
    return Point(x3, (-y_line) % p)


def repeated_add(c, k, pt):
    acc = INFINITY
    for _ in range(k):
        acc = chord_oracle(c, acc, pt)
    return acc


def test_default_curve_group():
    pts = curve_points(DEFAULT_CURVE)
    assert len(pts) == 13
    assert point_order(DEFAULT_CURVE, DEFAULT_BASE) == 13


def test_worked_example():
    c, base = DEFAULT_CURVE, DEFAULT_BASE
    q = scalar_mul(c, 3, base)
    assert q == Point(8, 3)
    assert scalar_mul(c, 2, q) == Point(7, 9)
    assert scalar_mul(c, 2, base) == Point(5, 2)


@pytest.mark.parametrize("c", CURVES, ids=lambda c: f"p{c.p}")
def test_addition_matches_chord_oracle(c):
    pts = curve_points(c)
    for p1 in pts:
        for p2 in pts:
            assert point_add(c, p1, p2) == chord_oracle(c, p1, p2)


@pytest.mark.parametrize("c", CURVES, ids=lambda c: f"p{c.p}")
def test_group_axioms(c):
    pts = curve_points(c)
    for p1 in pts:
        assert point_add(c, p1, point_neg(c, p1)) == INFINITY
        assert point_add(c, p1, INFINITY) == p1
    sample = pts[:: max(1, len(pts) // 8)]
    for p1 in sample:
        for p2 in sample:
            for p3 in sample:
                assert point_add(c, point_add(c, p1, p2), p3) == point_add(c, p1, point_add(c, p2, p3))


@given(st.sampled_from(CURVES), st.integers(0, 40), st.data())
def test_scalar_mul_matches_repeated_addition(c, k, data):
    pt = data.draw(st.sampled_from(curve_points(c)))
    assert scalar_mul(c, k, pt) == repeated_add(c, k, pt)


def test_hasse_bound():
    for c in CURVES:
        n = len(curve_points(c))
        assert abs(n - (c.p + 1)) <= 2 * c.p ** 0.5


def test_validation():
    with pytest.raises(ParameterError):
        Curve(15, 1, 1)
    with pytest.raises(ParameterError):
        Curve(11, 0, 0)
    with pytest.raises(ParameterError):
        point_add(DEFAULT_CURVE, Point(1, 1), DEFAULT_BASE)
    with pytest.raises(ParameterError):
        scalar_mul(DEFAULT_CURVE, -1, DEFAULT_BASE)


def test_json_round_trip():
    assert Point.from_json(DEFAULT_BASE.to_json()) == DEFAULT_BASE
    assert Point.from_json(INFINITY.to_json()) == INFINITY
    assert Curve.from_json(DEFAULT_CURVE.to_json()) == DEFAULT_CURVE
