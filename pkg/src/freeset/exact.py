"""Filtered exact geometric predicates.

Coordinates may be ``int``, ``float`` or ``Fraction``.  Float inputs go through
a static error filter first; when the filter cannot certify the sign the
computation is repeated with ``Fraction``, which is exact for any finite float.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence, Tuple, Union

Number = Union[int, float, Fraction]
Point = Tuple[Number, Number]

# Error bound for the 2x2 orientation determinant evaluated in doubles.
_CCW_ERRBOUND = (3.0 + 16.0 * 2.0 ** -53) * 2.0 ** -53


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def convert(x: Number, rational: bool) -> Number:
    """Cast to the working number type of an arithmetic mode."""
    return to_fraction(x) if rational else float(x)


def sign(x: Number) -> int:
    return (x > 0) - (x < 0)


def _all_float(*vals: Number) -> bool:
    for v in vals:
        t = type(v)
        if t is float:
            continue
        if isinstance(v, Fraction):
            return False
        if isinstance(v, int) and abs(v) > 2 ** 52:
            return False
    return True


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of triangle abc (+1 counter-clockwise)."""
    ax, ay = a
    bx, by = b
    cx, cy = c
    if _all_float(ax, ay, bx, by, cx, cy):
        l = (float(bx) - float(ax)) * (float(cy) - float(ay))
        r = (float(by) - float(ay)) * (float(cx) - float(ax))
        det = l - r
        bound = _CCW_ERRBOUND * (abs(l) + abs(r))
        if det > bound:
            return 1
        if -det > bound:
            return -1
    fa = (to_fraction(ax), to_fraction(ay))
    fb = (to_fraction(bx), to_fraction(by))
    fc = (to_fraction(cx), to_fraction(cy))
    det = (fb[0] - fa[0]) * (fc[1] - fa[1]) - (fb[1] - fa[1]) * (fc[0] - fa[0])
    return sign(det)


def dot_sign(o: Point, a: Point, b: Point) -> int:
    """Sign of (a-o).(b-o), computed exactly."""
    ox, oy = map(to_fraction, o)
    ax, ay = map(to_fraction, a)
    bx, by = map(to_fraction, b)
    return sign((ax - ox) * (bx - ox) + (ay - oy) * (by - oy))


def in_box(p: Point, a: Point, b: Point) -> bool:
    """Closed bounding-box test; exact because Python compares mixed numbers exactly."""
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    return orient(a, b, p) == 0 and in_box(p, a, b)


def segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Closed-segment intersection test (touching counts)."""
    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and in_box(q1, p1, p2):
        return True
    if o2 == 0 and in_box(q2, p1, p2):
        return True
    if o3 == 0 and in_box(p1, q1, q2):
        return True
    if o4 == 0 and in_box(p2, q1, q2):
        return True
    return False


def signed_area2(pts: Sequence[Point]) -> Fraction:
    """Twice the signed polygon area, exact."""
    total = Fraction(0)
    n = len(pts)
    for i in range(n):
        x0, y0 = map(to_fraction, pts[i])
        x1, y1 = map(to_fraction, pts[(i + 1) % n])
        total += x0 * y1 - x1 * y0
    return total


_ROT = {(1, 0): lambda x, y: (x, y), (0, -1): lambda x, y: (-y, x),
        (-1, 0): lambda x, y: (-x, -y), (0, 1): lambda x, y: (y, -x)}


def _half(c: Point, p: Point, start: Tuple[int, int]) -> int:
    # 0 if p - c lies in the half-turn [start, start + pi), else 1.  Only sign
    # comparisons are used, so the result is exact for any number type.
    sx = (p[0] > c[0]) - (p[0] < c[0])
    sy = (p[1] > c[1]) - (p[1] < c[1])
    rx, ry = _ROT[start](sx, sy)
    return 0 if ry > 0 or (ry == 0 and rx > 0) else 1


def ccw_sort(center: Point, items: Iterable[Tuple[object, Point]],
             start: Tuple[int, int] = (1, 0)) -> list:
    """Sort ``(key, point)`` pairs by counter-clockwise angle around ``center``.

    The sweep starts at the axis direction ``start`` (inclusive).  Points must
    differ from the center and no two may lie on the same ray.  Returns keys.
    """
    pts = list(items)

    def cmp(p, q):
        hp, hq = _half(center, p[1], start), _half(center, q[1], start)
        if hp != hq:
            return hp - hq
        return -orient(center, p[1], q[1])

    pts.sort(key=cmp_to_key(cmp))
    return [k for k, _ in pts]


def line_intercept(p: Point, q: Point) -> Fraction:
    """Exact y-coordinate where line pq meets x = 0 (p, q on opposite sides)."""
    px, py = map(to_fraction, p)
    qx, qy = map(to_fraction, q)
    return (py * qx - qy * px) / (qx - px)
