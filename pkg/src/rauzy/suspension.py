"""Suspension data over an IET and the flat surface it defines.

A :class:`Surface` is a triple (permutation pair, lengths, suspension
vector).  The suspension vector ``tau`` must lie in the open cone whose top
partial sums are positive and bottom partial sums negative; then the two
broken lines through the points ``sum (lambda_a + i tau_a)`` bound a polygon
whose equally labelled sides are glued by translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NonPositiveHeight, ValidationError
from .iet import PermutationPair, TranslationMatrix, apply_matrix, translation_matrix, validate_permutation
from .numeric import Basis, FormalProduct, SymbolicReal


def validate_suspension(pair: PermutationPair, tau: Mapping, basis: Basis | None = None):
    """``None`` if ``tau`` is in the suspension cone of ``pair``, else the
    first failing condition as ``(side, k)``."""
    basis = basis or Basis()
    for side, order, want in (("top", pair.top, 1), ("bottom", pair.bottom, -1)):
        acc = SymbolicReal()
        for k in range(1, pair.d):
            acc = acc + tau[order[k - 1]]
            if basis.sign(acc) != want:
                return side, k
    return None


class Surface:
    """A translation surface given by suspension data.

    Construction re-checks every invariant and raises
    :class:`~rauzy.errors.ValidationError` naming the first failure.
    """

    __slots__ = ("pair", "lengths", "tau", "basis")

    def __init__(self, pair: PermutationPair, lengths: Mapping, tau: Mapping,
                 basis: Basis | None = None, *, check: bool = True):
        self.pair = pair
        self.lengths = {a: SymbolicReal.coerce(lengths[a]) for a in pair.alphabet}
        self.tau = {a: SymbolicReal.coerce(tau[a]) for a in pair.alphabet}
        self.basis = basis or Basis()
        if check:
            self.validate()

    def validate(self):
        pair = self.pair
        k = validate_permutation(pair)
        if k is not None:
            raise ValidationError(f"reducible at {k}", ("reducible", k))
        for a in pair.alphabet:
            for v in (self.lengths[a], self.tau[a]):
                missing = [n for n in v.names() if n not in self.basis]
                if missing:
                    raise ValidationError(f"undeclared basis symbols {missing}", ("basis", missing))
        for a in pair.alphabet:
            if self.basis.sign(self.lengths[a]) <= 0:
                raise ValidationError(f"non-positive length for {a}", ("length", a))
        bad = validate_suspension(pair, self.tau, self.basis)
        if bad is not None:
            raise ValidationError(f"suspension condition violated at {bad}", ("suspension", bad))

    @property
    def d(self) -> int:
        return self.pair.d

    @property
    def alphabet(self) -> tuple:
        return self.pair.alphabet

    def replace(self, pair=None, lengths=None, tau=None, check=False) -> "Surface":
        return Surface(
            pair or self.pair,
            lengths if lengths is not None else self.lengths,
            tau if tau is not None else self.tau,
            self.basis,
            check=check,
        )

    def tau_sum(self) -> SymbolicReal:
        acc = SymbolicReal()
        for v in self.tau.values():
            acc = acc + v
        return acc

    def total_length(self) -> SymbolicReal:
        acc = SymbolicReal()
        for v in self.lengths.values():
            acc = acc + v
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, Surface)
            and self.pair == other.pair
            and self.lengths == other.lengths
            and self.tau == other.tau
        )

    def __hash__(self):
        return hash((self.pair, tuple(self.lengths.items()), tuple(self.tau.items())))

    def __repr__(self):
        lam = ", ".join(f"{a}: {self.lengths[a]}" for a in self.alphabet)
        tau = ", ".join(f"{a}: {self.tau[a]}" for a in self.alphabet)
        return f"Surface(top={self.pair.top}, bottom={self.pair.bottom}, lambda={{{lam}}}, tau={{{tau}}})"


# --------------------------------------------------------------------------
# polygon
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonRep:
    """Vertices ``a(k)`` of the top broken line and ``b(k)`` of the bottom one,
    ``k = 0..d``, as exact ``(x, y)`` pairs."""

    a_vertices: tuple
    b_vertices: tuple

    def vertex(self, vid: str):
        side, k = vid[0], int(vid[1:])
        return (self.a_vertices if side == "a" else self.b_vertices)[k]


def _broken_line(order, surface):
    x = y = SymbolicReal()
    pts = [(x, y)]
    for a in order:
        x = x + surface.lengths[a]
        y = y + surface.tau[a]
        pts.append((x, y))
    return tuple(pts)


def polygon_vertices(surface: Surface) -> PolygonRep:
    return PolygonRep(_broken_line(surface.pair.top, surface), _broken_line(surface.pair.bottom, surface))


def side_translation(surface: Surface, symbol) -> tuple[SymbolicReal, SymbolicReal]:
    """Vector carrying the top copy of side ``symbol`` onto its bottom copy."""
    poly = polygon_vertices(surface)
    ax, ay = poly.a_vertices[surface.pair.pi0(symbol) - 1]
    bx, by = poly.b_vertices[surface.pair.pi1(symbol) - 1]
    return bx - ax, by - ay


def _cross(u, v) -> FormalProduct:
    return u[0].times(v[1]) - u[1].times(v[0])


def is_simple(surface: Surface) -> bool:
    """True when the top broken line stays strictly above the bottom one.

    Both lines are graphs over ``[0, |lambda|]``, so it suffices to compare
    them at every interior breakpoint.
    """
    poly = polygon_vertices(surface)
    basis = surface.basis
    d = surface.d

    def above(point, line, want):
        px, py = point
        for k in range(1, d + 1):
            (x0, y0), (x1, y1) = line[k - 1], line[k]
            if basis.compare(px, x1) > 0:
                continue
            if basis.compare(px, x1) == 0:
                return basis.sign(y1 - py) == want
            side = _cross((x1 - x0, y1 - y0), (px - x0, py - y0)).sign(basis)
            # side < 0: point lies below the segment
            return side == -want
        return False

    for k in range(1, d):
        if not above(poly.b_vertices[k], poly.a_vertices, 1):
            return False
        if not above(poly.a_vertices[k], poly.b_vertices, -1):
            return False
    return True


def polygon_area(surface: Surface) -> FormalProduct:
    """Twice-free shoelace area of the polygon, as a formal product."""
    poly = polygon_vertices(surface)
    ring = list(poly.a_vertices) + list(reversed(poly.b_vertices[1:-1]))
    acc = FormalProduct()
    n = len(ring)
    for i in range(n):
        acc = acc + _cross(ring[i], ring[(i + 1) % n])
    # the ring runs clockwise, so the signed sum is minus twice the area
    return FormalProduct({k: -v / 2 for k, v in acc._terms.items()})


# --------------------------------------------------------------------------
# zippered rectangles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ZipperedRectangles:
    heights: dict
    extents: tuple  # (symbol, left, right) in top order

    def area(self, lengths) -> FormalProduct:
        acc = FormalProduct()
        for a, h in self.heights.items():
            acc = acc + lengths[a].times(h)
        return acc


def height_vector(pair: PermutationPair, tau) -> dict:
    return apply_matrix(translation_matrix(pair).transpose(), tau)


def heights(surface: Surface) -> ZipperedRectangles:
    h = height_vector(surface.pair, surface.tau)
    for a in surface.alphabet:
        if surface.basis.sign(h[a]) <= 0:
            raise NonPositiveHeight(f"height of {a} is {h[a]}, not positive")
    extents = []
    left = SymbolicReal()
    for a in surface.pair.top:
        right = left + surface.lengths[a]
        extents.append((a, left, right))
        left = right
    return ZipperedRectangles(h, tuple(extents))


def surface_area(surface: Surface) -> FormalProduct:
    """``sum lambda_a h_a`` as an unreduced bilinear expression."""
    h = height_vector(surface.pair, surface.tau)
    acc = FormalProduct()
    for a in surface.alphabet:
        acc = acc + surface.lengths[a].times(h[a])
    return acc


# --------------------------------------------------------------------------
# singularities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityClasses:
    """Partition of the vertex labels ``a0..ad, b0..bd``.

    ``angles[i]`` is the cone angle of class ``i`` as a multiple of pi.
    """

    classes: tuple
    angles: tuple

    def class_of(self, vid: str) -> int:
        for i, members in enumerate(self.classes):
            if vid in members:
                return i
        raise KeyError(vid)

    def angle_of(self, vid: str) -> int:
        return self.angles[self.class_of(vid)]

    def euler_characteristic(self, d: int) -> int:
        # one polygon face, d glued edge pairs
        return len(self.classes) - d + 1

    def genus(self, d: int) -> int:
        return (2 - self.euler_characteristic(d)) // 2


def singularity_classes(pair_or_surface) -> SingularityClasses:
    """Group polygon vertices by the side gluings and count cone angles.

    The classes depend only on the permutation.  The angle of a class is pi
    times the number of interior corners ``a(k)``, ``b(k)`` (``0 < k < d``)
    it contains: sweeping around such a corner crosses the vertical
    direction exactly once, and the two end corners never do.
    """
    pair = pair_or_surface.pair if isinstance(pair_or_surface, Surface) else pair_or_surface
    d = pair.d
    labels = [f"a{k}" for k in range(d + 1)] + [f"b{k}" for k in range(d + 1)]
    parent = {v: v for v in labels}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    union("a0", "b0")
    union(f"a{d}", f"b{d}")
    for sym in pair.alphabet:
        i, j = pair.pi0(sym), pair.pi1(sym)
        union(f"a{i - 1}", f"b{j - 1}")
        union(f"a{i}", f"b{j}")
    groups: dict = {}
    for v in labels:
        groups.setdefault(find(v), []).append(v)
    order = sorted(groups.values(), key=lambda g: labels.index(g[0]))
    classes = tuple(tuple(g) for g in order)
    angles = tuple(
        sum(1 for v in g if 0 < int(v[1:]) < d) for g in classes
    )
    return SingularityClasses(classes, angles)
