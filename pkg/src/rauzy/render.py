"""SVG pictures of the polygon, the zippered rectangles and separatrix traces.

Coordinates are printed with 30 significant digits for layout only; nothing
geometric is decided from them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import xml.etree.ElementTree as ET

from .geometry import Abscissa
from .suspension import Surface, heights, polygon_vertices

TARGETS = ("polygon", "zippered", "trace")
SVG_NS = "http://www.w3.org/2000/svg"
DIGITS = 30
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


@dataclass(frozen=True)
class RenderSpec:
    target: str = "polygon"
    scale: Fraction = Fraction(100)
    vertex_labels: bool = True
    symbol_labels: bool = True
    connections: tuple = field(default=())

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown render target {self.target!r}")
        object.__setattr__(self, "scale", Fraction(str(self.scale)))
        if self.scale <= 0:
            raise ValueError("scale must be positive")


class _Canvas:
    def __init__(self, surface: Surface, scale: Fraction):
        self.basis = surface.basis
        self.scale = scale
        self.root = ET.Element("svg", {"xmlns": SVG_NS, "version": "1.1"})
        self.xs: list[float] = []
        self.ys: list[float] = []

    def _num(self, v, flip=False) -> str:
        if isinstance(v, Abscissa):
            q = v.interval(self.basis, 160).midpoint()
            text = _decimal(q * self.scale * (-1 if flip else 1))
        else:
            text = self.basis.to_decimal_string(v * (self.scale * (-1 if flip else 1)), DIGITS)
        (self.ys if flip else self.xs).append(float(text))
        return text

    def point(self, x, y) -> tuple[str, str]:
        return self._num(x), self._num(y, flip=True)

    def add(self, tag, parent=None, text=None, **attrs):
        el = ET.SubElement(parent if parent is not None else self.root, tag,
                           {k.replace("_", "-"): str(v) for k, v in attrs.items()})
        if text is not None:
            el.text = text
        return el

    def finish(self) -> str:
        pad = 20.0
        x0, x1 = min(self.xs) - pad, max(self.xs) + pad
        y0, y1 = min(self.ys) - pad, max(self.ys) + pad
        self.root.set("viewBox", f"{x0:.6f} {y0:.6f} {x1 - x0:.6f} {y1 - y0:.6f}")
        self.root.set("width", f"{x1 - x0:.3f}")
        self.root.set("height", f"{y1 - y0:.3f}")
        ET.indent(self.root)
        return ET.tostring(self.root, encoding="unicode", xml_declaration=True) + "\n"


def _decimal(q: Fraction) -> str:
    import decimal

    with decimal.localcontext() as ctx:
        ctx.prec = DIGITS
        return str(decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator))


def _draw_polygon(c: _Canvas, surface: Surface, spec: RenderSpec):
    poly = polygon_vertices(surface)
    colour = {a: PALETTE[i % len(PALETTE)] for i, a in enumerate(surface.alphabet)}
    sides = c.add("g", id="sides")
    labels = c.add("g", id="labels") if spec.symbol_labels else None
    for prefix, order, pts in (("a", surface.pair.top, poly.a_vertices),
                               ("b", surface.pair.bottom, poly.b_vertices)):
        for k, sym in enumerate(order):
            (x0, y0), (x1, y1) = c.point(*pts[k]), c.point(*pts[k + 1])
            c.add("line", sides, x1=x0, y1=y0, x2=x1, y2=y1, stroke=colour[sym],
                  stroke_width=2, **{"class": f"side side-{prefix}", "data-symbol": sym})
            if labels is not None:
                mx = (float(x0) + float(x1)) / 2
                my = (float(y0) + float(y1)) / 2 + (-6 if prefix == "a" else 14)
                c.add("text", labels, text=str(sym), x=f"{mx:.6f}", y=f"{my:.6f}",
                      font_size=12, text_anchor="middle", **{"class": "symbol-label"})
    verts = c.add("g", id="vertices")
    d = surface.d
    ids = [f"a{k}" for k in range(d + 1)] + [f"b{k}" for k in range(1, d)]
    for vid in ids:
        x, y = c.point(*poly.vertex(vid))
        c.add("circle", verts, cx=x, cy=y, r=3, fill="black", **{"class": "vertex", "data-vertex": vid})
        if spec.vertex_labels:
            c.add("text", verts, text=vid, x=x, y=y, dx=4, dy=-4, font_size=10,
                  **{"class": "vertex-label"})
    if spec.connections:
        g = c.add("g", id="connections")
        for conn in spec.connections:
            # drawn from the left endpoint; a connection that crosses sides
            # is shown unfolded, as one segment of its true length
            x, y = poly.vertex(conn.start)
            (px, py), (qx, qy) = c.point(x, y), c.point(x + conn.length, y)
            c.add("line", g, x1=px, y1=py, x2=qx, y2=qy, stroke="black", stroke_dasharray="2 4",
                  stroke_width=1.5, **{"class": "saddle-connection"})


def _draw_zippered(c: _Canvas, surface: Surface):
    z = heights(surface)
    g = c.add("g", id="rectangles")
    for i, (sym, left, right) in enumerate(z.extents):
        x0, y0 = c.point(left, z.heights[sym])
        x1, y1 = c.point(right, left * 0)
        c.add("rect", g, x=x0, y=y0, width=_decimal(Fraction(x1) - Fraction(x0)),
              height=_decimal(Fraction(y1) - Fraction(y0)), fill=PALETTE[i % len(PALETTE)],
              fill_opacity=0.3, stroke="black", **{"class": "rectangle", "data-symbol": sym})
        c.add("text", g, text=str(sym), x=x0, y=y1, dx=4, dy=-4, font_size=12,
              **{"class": "symbol-label"})


def _draw_trace(c: _Canvas, trace):
    g = c.add("g", id="trace")
    for (p, q) in trace.segments:
        (px, py), (qx, qy) = c.point(*p), c.point(*q)
        c.add("line", g, x1=px, y1=py, x2=qx, y2=qy, stroke="black", stroke_dasharray="2 4",
              stroke_width=1.5, **{"class": "trace-segment"})


def render_svg(surface: Surface, spec: RenderSpec | None = None, trace=None) -> str:
    spec = spec or RenderSpec()
    c = _Canvas(surface, spec.scale)
    if spec.target == "zippered":
        _draw_zippered(c, surface)
    else:
        _draw_polygon(c, surface, spec)
        if spec.target == "trace":
            if trace is None:
                raise ValueError("the trace target needs a trace")
            _draw_trace(c, trace)
    return c.finish()
