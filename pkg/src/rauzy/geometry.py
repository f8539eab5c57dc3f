"""Horizontal separatrices and saddle connections on the polygon, and the
minimality probe built on them.

The polygon lies between two x-monotone broken lines.  A rightward
horizontal ray at height ``y`` meets each side whose height range strictly
contains ``y`` at one point, and meets a vertex only when the vertex height
equals ``y`` exactly.  Heights stay exact symbolic reals throughout a trace
(re-entry is a translation).  Abscissas of side crossings are nonlinear in
the data and are kept as :class:`Abscissa` expressions whose order is
decided by outward-rounded interval evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonSimplePolygon, OrbitStops, PrecisionExhausted, RauzyUndefined
from .induction import backward_orbit, backward_type, completeness_report, forward_step_suspension
from .iet import TOP, BOTTOM
from .numeric import PRECISION_LADDER, Basis, Interval, SymbolicReal
from .suspension import Surface, is_simple, polygon_vertices, side_translation, singularity_classes

ORIGIN = "origin"
HIT = "hit_singularity"
SURVIVED = "survived"


class Abscissa:
    """``base + sum k * a * b / c`` with symbolic reals ``a, b, c``.

    Terms whose value is a rational multiple of a symbolic real are folded
    into ``base``, so rational data never leaves exact arithmetic.
    """

    __slots__ = ("base", "terms")

    def __init__(self, base=None, terms=None):
        self.base = SymbolicReal.coerce(base) if base is not None else SymbolicReal()
        self.terms = {}
        for key, k in (terms or {}).items():
            self._add_term(key, Fraction(k))

    def _add_term(self, key, k):
        a, b, c = key
        if c.is_rational():
            cv = c.coeff("1")
            if a.is_rational():
                self.base = self.base + b * (k * a.coeff("1") / cv)
                return
            if b.is_rational():
                self.base = self.base + a * (k * b.coeff("1") / cv)
                return
        v = self.terms.get(key, 0) + k
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def ratio(cls, base, a, b, c) -> "Abscissa":
        return cls(base, {(a, b, c): 1})

    def _combine(self, other, sign):
        out = Abscissa(self.base, dict(self.terms))
        if isinstance(other, Abscissa):
            out.base = out.base + other.base * sign
            for key, k in other.terms.items():
                out._add_term(key, k * sign)
        else:
            out.base = out.base + SymbolicReal.coerce(other) * sign
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return Abscissa(other) - self

    def __neg__(self):
        return Abscissa() - self

    def is_exact(self) -> bool:
        return not self.terms

    def exact(self) -> SymbolicReal:
        if self.terms:
            raise ValueError("abscissa is not a symbolic real")
        return self.base

    def __eq__(self, other):
        if not isinstance(other, Abscissa):
            other = Abscissa(other)
        return self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash((self.base, frozenset(self.terms.items())))

    def interval(self, basis: Basis, prec: int) -> Interval:
        total = basis.interval(self.base, prec)
        for (a, b, c), k in self.terms.items():
            ia, ib, ic = (basis.interval(v, prec) for v in (a, b, c))
            total = total + (ia * ib / ic).scaled(k)
        return total

    def sign(self, basis: Basis) -> int:
        if not self.terms:
            return basis.sign(self.base)
        for prec in PRECISION_LADDER:
            try:
                s = self.interval(basis, prec).sign()
            except ZeroDivisionError:
                continue
            if s is not None:
                return s
        raise PrecisionExhausted("cannot order two horizontal positions")

    def to_float(self, basis: Basis) -> float:
        return float(self.interval(basis, 128).midpoint())

    def __str__(self):
        if not self.terms:
            return str(self.base)
        parts = [str(self.base)] if self.base else []
        for (a, b, c), k in self.terms.items():
            parts.append(f"{k}*({a})*({b})/({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Abscissa({self})"


def _compare(basis, x, y) -> int:
    return (Abscissa(x) - y).sign(basis) if not isinstance(x, Abscissa) else (x - y).sign(basis)


# --------------------------------------------------------------------------
# tracing
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    symbol: str
    side: str  # top or bottom: the copy of the side that was hit
    point: tuple  # (Abscissa, SymbolicReal) on the hit side


@dataclass
class SeparatrixTrace:
    start: str
    start_point: tuple
    crossings: list = field(default_factory=list)
    segments: list = field(default_factory=list)  # ((x0, y), (x1, y))
    total_length: object = None
    outcome: str = SURVIVED
    end_vertex: str | None = None
    max_length: SymbolicReal | None = None
    along_side: str | None = None
    normalized_steps: int = 0

    def word(self) -> tuple:
        return tuple(c.symbol for c in self.crossings)

    def segment_lengths(self) -> list:
        return [q[0] - p[0] for p, q in self.segments]

    @property
    def hit(self) -> bool:
        return self.outcome == HIT


def _segments(surface: Surface, poly):
    """Every side as ``(symbol, side, start_vertex, end_vertex)``."""
    out = []
    for side, order, pts, prefix in ((TOP, surface.pair.top, poly.a_vertices, "a"),
                                     (BOTTOM, surface.pair.bottom, poly.b_vertices, "b")):
        for k, sym in enumerate(order):
            out.append((sym, side, (f"{prefix}{k}", pts[k]), (f"{prefix}{k + 1}", pts[k + 1])))
    return out


def _vertices(surface: Surface, poly):
    d = surface.d
    out = [(f"a{k}", poly.a_vertices[k]) for k in range(d + 1)]
    out += [(f"b{k}", poly.b_vertices[k]) for k in range(1, d)]
    return out


def start_kind(surface: Surface, start: str):
    """``"ray"``, ``"side"`` (the start lies on a horizontal side) or ``None``
    when no rightward separatrix enters the polygon at that corner."""
    if start in (ORIGIN, "a0", "b0"):
        return "ray"
    side, k = start[0], int(start[1:])
    d = surface.d
    if side not in "ab" or not 0 <= k <= d:
        raise ValueError(f"unknown vertex {start!r}")
    if k == d:
        return None
    order = surface.pair.top if side == "a" else surface.pair.bottom
    s = surface.basis.sign(surface.tau[order[k]])
    if s == 0:
        return "side"
    want = 1 if side == "a" else -1
    return "ray" if s == want else None


def simple_representative(surface: Surface, max_steps: int = 10000) -> tuple[Surface, int]:
    """The first forward iterate whose polygon is simple, and how many steps it took.

    Forward steps cut and paste the same surface and keep the origin, so
    separatrix lengths and connections are unchanged.
    """
    current = surface
    for n in range(max_steps + 1):
        if is_simple(current):
            return current, n
        try:
            current, _ = forward_step_suspension(current)
        except RauzyUndefined:
            break
    raise NonSimplePolygon("no forward iterate with a simple polygon was found")


def trace_horizontal(surface: Surface, start: str, max_length, *, max_crossings=None) -> SeparatrixTrace:
    """Follow the rightward horizontal separatrix leaving ``start``.

    ``start`` is ``"origin"`` or a vertex id ``a<k>`` / ``b<k>``.  The trace
    stops at the first vertex met exactly, once its length exceeds
    ``max_length``, or after ``max_crossings`` side crossings.

    On a non-simple polygon an origin trace is run on the first forward
    iterate with a simple polygon, except when only the first crossing is
    asked for: at height 0 the ray stays between the two broken lines up to
    the last sides whatever the shape.
    """
    max_length = SymbolicReal.coerce(max_length)
    basis = surface.basis
    if basis.sign(max_length) <= 0:
        raise ValueError("max_length must be positive")
    normalized = 0
    first_only_origin = max_crossings == 1 and start in (ORIGIN, "a0", "b0")
    if not first_only_origin and not is_simple(surface):
        if start not in (ORIGIN, "a0", "b0"):
            raise NonSimplePolygon("the polygon is not simple; vertex starts are not supported")
        surface, normalized = simple_representative(surface)
    if start in ("a0", "b0"):
        start = ORIGIN
    kind = start_kind(surface, start)
    if kind is None:
        raise ValueError(f"no rightward separatrix enters the polygon at {start}")
    poly = polygon_vertices(surface)
    vid = "a0" if start == ORIGIN else start
    p0 = poly.vertex(vid)
    trace = SeparatrixTrace(start, (Abscissa(p0[0]), p0[1]), max_length=max_length,
                            normalized_steps=normalized)

    if kind == "side":
        side, k = vid[0], int(vid[1:])
        order = surface.pair.top if side == "a" else surface.pair.bottom
        sym = order[k]
        length = surface.lengths[sym]
        end = poly.vertex(f"{side}{k + 1}")
        if basis.compare(length, max_length) > 0:
            x1 = Abscissa(p0[0] + max_length)
            trace.segments.append((trace.start_point, (x1, p0[1])))
            trace.total_length = Abscissa(max_length)
        else:
            trace.segments.append((trace.start_point, (Abscissa(end[0]), end[1])))
            trace.total_length = Abscissa(length)
            trace.outcome = HIT
            trace.end_vertex = f"{side}{k + 1}"
        trace.along_side = sym
        return trace

    segs = _segments(surface, poly)
    verts = _vertices(surface, poly)
    x, y = trace.start_point
    traced = Abscissa()
    entered = None  # (symbol, side) of the side the point currently lies on
    while True:
        best = None  # (x, ("vertex", vid) | ("side", sym, side, seg))
        for v, (vx, vy) in verts:
            if vy == y and _compare(basis, vx, x) > 0:
                if best is None or _compare(basis, vx, best[0]) < 0:
                    best = (Abscissa(vx), ("vertex", v))
        for sym, side, (_, (xs, ys)), (_, (xe, ye)) in segs:
            if (sym, side) == entered:
                continue
            lo, hi = (ys, ye) if basis.compare(ys, ye) < 0 else (ye, ys)
            if not (basis.compare(lo, y) < 0 and basis.compare(y, hi) < 0):
                continue
            cx = Abscissa.ratio(xs, y - ys, xe - xs, ye - ys)
            if _compare(basis, cx, x) <= 0:
                continue
            if best is None or _compare(basis, cx, best[0]) < 0:
                best = (cx, ("side", sym, side, (xs, ys)))
        if best is None:
            raise AssertionError("the horizontal ray left the polygon; is it simple?")
        bx, what = best
        reach = traced + (bx - x)
        if reach.sign(basis) > 0 and (reach - max_length).sign(basis) > 0:
            end = x + (max_length - traced)
            trace.segments.append(((x, y), (end, y)))
            trace.total_length = Abscissa(max_length)
            return trace
        trace.segments.append(((x, y), (bx, y)))
        traced = reach
        if what[0] == "vertex":
            trace.outcome = HIT
            trace.end_vertex = what[1]
            trace.total_length = traced
            return trace
        _, sym, side, _ = what
        trace.crossings.append(Crossing(sym, side, (bx, y)))
        if max_crossings is not None and len(trace.crossings) >= max_crossings:
            trace.total_length = traced
            return trace
        dx, dy = side_translation(surface, sym)
        if side == BOTTOM:
            dx, dy = -dx, -dy
        x, y = bx + dx, y + dy
        entered = (sym, BOTTOM if side == TOP else TOP)


def origin_winner(surface: Surface) -> str:
    """Symbol of the first side met by the rightward separatrix from the origin."""
    backward_type(surface)  # raises OrbitStops when the sum vanishes
    trace = trace_horizontal(surface, ORIGIN, surface.total_length() * 2, max_crossings=1)
    if not trace.crossings:
        raise AssertionError("origin trace met no side")
    return trace.crossings[0].symbol


# --------------------------------------------------------------------------
# saddle connections
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SaddleConnection:
    start: str
    end: str
    start_class: int
    end_class: int
    start_angle: int  # cone angles as multiples of pi
    end_angle: int
    length: SymbolicReal
    word: tuple
    along_side: str | None = None

    def signature(self) -> tuple:
        return (self.length, self.start_angle, self.end_angle)

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "start_class": self.start_class,
            "end_class": self.end_class,
            "start_angle_pi": self.start_angle,
            "end_angle_pi": self.end_angle,
            "length": self.length.to_json(),
            "word": list(self.word),
            "along_side": self.along_side,
        }


def start_corners(surface: Surface) -> list[str]:
    d = surface.d
    out = [ORIGIN]
    for side in "ab":
        for k in range(1, d):
            if start_kind(surface, f"{side}{k}") is not None:
                out.append(f"{side}{k}")
    return out


def enumerate_saddle_connections(surface: Surface, max_length) -> list[SaddleConnection]:
    """All horizontal saddle connections of length at most ``max_length``.

    Each connection has one left endpoint and leaves it along exactly one
    corner, so a rightward trace from every corner finds each connection
    once; horizontal sides are seen from both copies and kept once.
    """
    max_length = SymbolicReal.coerce(max_length)
    rep, _ = simple_representative(surface)
    classes = singularity_classes(rep)
    found = []
    seen_sides = set()
    for corner in start_corners(rep):
        trace = trace_horizontal(rep, corner, max_length)
        if not trace.hit:
            continue
        if trace.along_side is not None:
            if trace.along_side in seen_sides:
                continue
            seen_sides.add(trace.along_side)
        sv = "a0" if corner == ORIGIN else corner
        found.append(SaddleConnection(
            sv, trace.end_vertex,
            classes.class_of(sv), classes.class_of(trace.end_vertex),
            classes.angle_of(sv), classes.angle_of(trace.end_vertex),
            trace.total_length.exact(), trace.word(), trace.along_side,
        ))
    return found


def horizontal_sides(surface: Surface) -> list[tuple]:
    """Sides with zero vertical extent as ``(symbol, length, left_angle, right_angle)``."""
    classes = singularity_classes(surface.pair)
    out = []
    for sym in surface.alphabet:
        if surface.tau[sym].is_zero():
            k = surface.pair.pi0(sym)
            out.append((sym, surface.lengths[sym],
                        classes.angle_of(f"a{k - 1}"), classes.angle_of(f"a{k}")))
    return out


def _match(connections, sides) -> bool:
    pool = [(length, la, ra) for _, length, la, ra in sides]
    for c in connections:
        sig = c.signature()
        if sig not in pool:
            return False
        pool.remove(sig)
    return True


# --------------------------------------------------------------------------
# minimality probe
# --------------------------------------------------------------------------

MINIMAL = "minimal_evidence"
NONMINIMAL = "nonminimal_evidence"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MinimalityVerdict:
    """Bounded evidence about minimality of the horizontal flow.

    ``step`` is the first state at which every connection found is a side
    simultaneously; ``first_seen`` gives, per connection, the first state at
    which it is a side on its own.
    """

    verdict: str
    connections: tuple
    step: int | None
    first_seen: tuple
    missing: tuple
    frozen: tuple
    max_steps: int
    max_length: SymbolicReal
    steps_run: int
    stopped_at: int | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "bounds": {"max_steps": self.max_steps, "max_length": self.max_length.to_json()},
            "steps_run": self.steps_run,
            "stopped_at": self.stopped_at,
            "step": self.step,
            "connections": [c.to_json() for c in self.connections],
            "first_seen": list(self.first_seen),
            "missing": [c.to_json() for c in self.missing],
            "frozen": list(self.frozen),
        }


def minimality_probe(surface: Surface, max_steps: int, max_length) -> MinimalityVerdict:
    """Look for a backward iterate whose horizontal sides are exactly the
    horizontal connections found on ``surface``.

    Connections are matched to sides by length and by the cone angles at
    both ends.
    """
    max_length = SymbolicReal.coerce(max_length)
    conns = tuple(enumerate_saddle_connections(surface, max_length))

    def verdict(kind, step=None, first=None, missing=(), frozen=(), run=0, stopped=None):
        return MinimalityVerdict(kind, conns, step, tuple(first or (None,) * len(conns)),
                                 tuple(missing), tuple(frozen), max_steps, max_length, run, stopped)

    if not conns:
        return verdict(MINIMAL, 0, run=0)
    log = backward_orbit(surface, max_steps, checkpoint_every=1, track_max=False)
    first = [None] * len(conns)
    step = None
    for cp in log.checkpoints:
        state = Surface(cp.pair, cp.lengths, cp.tau, surface.basis, check=False)
        sides = horizontal_sides(state)
        if not sides:
            continue
        for i, c in enumerate(conns):
            if first[i] is None and _match([c], sides):
                first[i] = cp.step
        if step is None and _match(conns, sides):
            step = cp.step
            break
    run = len(log.steps)
    if step is not None:
        return verdict(MINIMAL, step, first, run=run, stopped=log.stopped_at)
    missing = [c for c, f in zip(conns, first) if f is None]
    if log.stopped_at is not None:
        return verdict(INCONCLUSIVE, None, first, missing, run=run, stopped=log.stopped_at)
    frozen = completeness_report(log).frozen
    if missing and frozen:
        return verdict(NONMINIMAL, None, first, missing, frozen, run=run)
    return verdict(INCONCLUSIVE, None, first, missing, frozen, run=run)


__all__ = [
    "Abscissa", "Crossing", "SeparatrixTrace", "trace_horizontal", "origin_winner",
    "simple_representative", "SaddleConnection", "enumerate_saddle_connections",
    "horizontal_sides", "MinimalityVerdict", "minimality_probe", "start_corners",
    "OrbitStops", "ORIGIN", "HIT", "SURVIVED", "MINIMAL", "NONMINIMAL", "INCONCLUSIVE",
]
