"""Deterministic SVG rendering of straight-line drawings.

The world y-axis points up; the picture is flipped into screen coordinates by
a single ``matrix`` transform on the drawing group, so raw coordinates appear
unchanged in the markup.  Every number is printed with six decimals and
elements are emitted in a fixed order (axis, edges sorted by key, vertices
sorted by id), which makes the output byte-stable for equal input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple
from xml.sax.saxutils import escape, quoteattr

from .drawing import StraightLineDrawing
from .embedding import Vertex


@dataclass(frozen=True)
class SvgStyle:
    width: int = 640
    height: int = 640
    margin: float = 0.08            # fraction of the extent added on each side
    edge_color: str = "#333333"
    edge_width: float = 1.2
    axis_color: str = "#1f77b4"
    vertex_color: str = "#ffffff"
    highlight_color: str = "#d62728"
    vertex_radius: float = 4.0      # screen pixels
    labels: bool = False
    highlight: Tuple[Vertex, ...] = ()


def _f(x) -> str:
    s = f"{float(x):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _vkey(v) -> tuple:
    # ints compare numerically, everything else by its text
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def _extent(points: Sequence[Tuple[float, float]]):
    if not points:
        return -1.0, 1.0, -1.0, 1.0
    xs = [p[0] for p in points] + [0.0]
    ys = [p[1] for p in points]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    w = max(x1 - x0, y1 - y0, 1e-9)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    return cx - w / 2, cx + w / 2, cy - w / 2, cy + w / 2


def render_svg(d: Optional[StraightLineDrawing], style: SvgStyle = SvgStyle(),
               highlight: Iterable[Vertex] = ()) -> bytes:
    """SVG 1.1 document for ``d`` (``None`` renders the axis alone)."""
    hl = set(style.highlight) | set(highlight)
    pts = {} if d is None else {v: (float(p[0]), float(p[1])) for v, p in d.coords.items()}
    x0, x1, y0, y1 = _extent(list(pts.values()))
    pad = style.margin * (x1 - x0)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    k = min(style.width / (x1 - x0), style.height / (y1 - y0))
    # screen = (k * x - k * x0, -k * y + k * y1)
    mtx = f"matrix({_f(k)} 0 0 {_f(-k)} {_f(-k * x0)} {_f(k * y1)})"
    r = style.vertex_radius / k
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{style.width}" '
        f'height="{style.height}" viewBox="0 0 {style.width} {style.height}">',
        f'<g transform="{mtx}">',
        f'<line class="axis" x1="0.000000" y1="{_f(y0)}" x2="0.000000" y2="{_f(y1)}" '
        f'stroke="{style.axis_color}" stroke-width="1" stroke-dasharray="6 4" '
        f'vector-effect="non-scaling-stroke"/>',
    ]
    if d is not None:
        for u, v in sorted(d.embedding.edges(), key=lambda e: (_vkey(e[0]), _vkey(e[1]))):
            (ax, ay), (bx, by) = pts[u], pts[v]
            out.append(f'<line class="edge" x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
                       f'stroke="{style.edge_color}" stroke-width="{_f(style.edge_width)}" '
                       f'vector-effect="non-scaling-stroke"/>')
        for v in sorted(pts, key=_vkey):
            x, y = pts[v]
            fill = style.highlight_color if v in hl else style.vertex_color
            cls = "vertex highlighted" if v in hl else "vertex"
            out.append(f'<circle class="{cls}" data-id={quoteattr(str(v))} cx="{_f(x)}" cy="{_f(y)}" '
                       f'r="{_f(r)}" fill="{fill}" stroke="{style.edge_color}" '
                       f'vector-effect="non-scaling-stroke"/>')
    out.append("</g>")
    if style.labels and d is not None:
        for v in sorted(pts, key=_vkey):
            x, y = pts[v]
            sx, sy = k * (x - x0) + 1.5 * style.vertex_radius, k * (y1 - y) - 1.5 * style.vertex_radius
            out.append(f'<text class="label" x="{_f(sx)}" y="{_f(sy)}" font-size="11" '
                       f'font-family="sans-serif">{escape(str(v))}</text>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
