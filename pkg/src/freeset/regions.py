"""Convex feasible regions given by strict linear inequalities.

A constraint ``(a, b, c)`` means ``a*x + b*y + c > 0``.  Coefficients are kept
as exact ``Fraction`` values so that candidate points can be certified;
clipping runs in floats first and falls back to exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exact import Number, Point, to_fraction

Constraint = Tuple[Fraction, Fraction, Fraction]


def line_left(p: Point, q: Point) -> Constraint:
    """Points strictly left of the directed line p -> q."""
    px, py = map(to_fraction, p)
    qx, qy = map(to_fraction, q)
    a = -(qy - py)
    b = qx - px
    return (a, b, -(a * px + b * py))


def side_constraint(side: int) -> Constraint:
    return (Fraction(side), Fraction(0), Fraction(0))


def window_constraints(u: Point, lo: Number, hi: Number) -> List[Constraint]:
    """Points p on the far side of the axis from u whose segment to u meets
    the axis within [lo, hi]."""
    ux, uy = map(to_fraction, u)
    lo, hi = to_fraction(lo), to_fraction(hi)
    s = Fraction(-1 if ux > 0 else 1)
    return [(s * (uy - lo), -s * ux, s * lo * ux),
            (s * (hi - uy), s * ux, -s * hi * ux)]


def satisfied(p: Point, cons: Sequence[Constraint]) -> bool:
    x, y = to_fraction(p[0]), to_fraction(p[1])
    return all(a * x + b * y + c > 0 for a, b, c in cons)


def _clip(poly: List[Tuple], con, exact: bool) -> List[Tuple]:
    a, b, c = con
    if not exact:
        a, b, c = float(a), float(b), float(c)
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp = a * p[0] + b * p[1] + c
        fq = a * q[0] + b * q[1] + c
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def clip_polygon(box: Sequence[Tuple], cons: Sequence[Constraint], exact: bool = False) -> List[Tuple]:
    poly = [tuple(to_fraction(v) for v in p) for p in box] if exact else [
        (float(p[0]), float(p[1])) for p in box]
    for con in cons:
        poly = _clip(poly, con, exact)
        if len(poly) < 3:
            return []
    return poly


def centroid(poly: Sequence[Tuple]):
    area = 0
    cx = cy = 0
    k = len(poly)
    for i in range(k):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % k]
        cr = x0 * y1 - x1 * y0
        area += cr
        cx += (x0 + x1) * cr
        cy += (y0 + y1) * cr
    if area == 0:
        return (sum(p[0] for p in poly) / k, sum(p[1] for p in poly) / k)
    return (cx / (3 * area), cy / (3 * area))


def _round_dyadic(p: Tuple[Fraction, Fraction], bits: int) -> Tuple[Fraction, Fraction]:
    s = 2 ** bits
    return (Fraction(round(p[0] * s), s), Fraction(round(p[1] * s), s))


def interior_point(box: Sequence[Point], cons: Sequence[Constraint], rational: bool = False) -> Optional[Tuple]:
    """A certified point strictly inside the region, or None when it is empty.

    In float mode the point is a pair of floats; in rational mode a pair of
    dyadic fractions with as few bits as the certificate allows.
    """
    if not rational:
        poly = clip_polygon(box, cons, exact=False)
        if poly:
            c = centroid(poly)
            if satisfied(c, cons):
                return (float(c[0]), float(c[1]))
    poly = clip_polygon(box, cons, exact=True)
    if not poly:
        return None
    c = centroid(poly)
    if not satisfied(c, cons):  # pragma: no cover - exact centroid is interior
        return None
    if not rational:
        f = (float(c[0]), float(c[1]))
        return f if satisfied(f, cons) else None
    for bits in range(8, 2000, 8):
        r = _round_dyadic(c, bits)
        if satisfied(r, cons):
            return r
    return c


def bounding_box(points: Sequence[Point], pad: float = 0.0) -> List[Tuple]:
    xs = [to_fraction(p[0]) for p in points]
    ys = [to_fraction(p[1]) for p in points]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    w = max(x1 - x0, y1 - y0, Fraction(1, 2 ** 40)) * to_fraction(pad)
    return [(x0 - w, y0 - w), (x1 + w, y0 - w), (x1 + w, y1 + w), (x0 - w, y1 + w)]
