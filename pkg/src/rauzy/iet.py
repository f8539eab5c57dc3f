"""Interval exchange transformations: permutation pairs, the translation
matrix, the map itself, Keane's condition and the forward Rauzy-Veech step.

Permutations are stored as ranked orders.  ``pair.top[k]`` is the symbol
whose interval comes in position ``k + 1`` before the exchange and
``pair.bottom[k]`` the one in position ``k + 1`` after it, so the Rauzy
moves are list splices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NotAPermutation, OutOfDomain, RauzyUndefined
from .numeric import Basis, SymbolicReal

FORWARD = "forward"
BACKWARD = "backward"
TOP = "top"
BOTTOM = "bottom"


@dataclass(frozen=True)
class PermutationPair:
    top: tuple
    bottom: tuple
    alphabet: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "bottom", tuple(self.bottom))
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", self.top)
        else:
            object.__setattr__(self, "alphabet", tuple(self.alphabet))
        alpha = self.alphabet
        if len(alpha) < 2:
            raise NotAPermutation("an alphabet needs at least two symbols")
        if len(set(alpha)) != len(alpha):
            raise NotAPermutation(f"duplicate symbols in alphabet {alpha}")
        for name, order in (("top", self.top), ("bottom", self.bottom)):
            if len(order) != len(alpha) or set(order) != set(alpha):
                raise NotAPermutation(f"{name} order {order} is not a permutation of {alpha}")

    @classmethod
    def from_strings(cls, top: str, bottom: str) -> "PermutationPair":
        return cls(tuple(top.split()), tuple(bottom.split()))

    @property
    def d(self) -> int:
        return len(self.top)

    def pi0(self, symbol) -> int:
        """1-based position of ``symbol`` in the top order."""
        return self.top.index(symbol) + 1

    def pi1(self, symbol) -> int:
        return self.bottom.index(symbol) + 1

    def __str__(self):
        return " ".join(map(str, self.top)) + "\n" + " ".join(map(str, self.bottom))


@dataclass(frozen=True)
class StepRecord:
    direction: str
    kind: str
    winner: str
    loser: str

    def __post_init__(self):
        if self.winner == self.loser:
            raise ValueError("winner and loser must differ")


def validate_permutation(pair: PermutationPair) -> int | None:
    """``None`` when ``pair`` is irreducible, else the smallest ``k`` whose
    top and bottom prefixes of length ``k`` hold the same symbols."""
    seen_top: set = set()
    seen_bottom: set = set()
    for k in range(1, pair.d):
        seen_top.add(pair.top[k - 1])
        seen_bottom.add(pair.bottom[k - 1])
        if seen_top == seen_bottom:
            return k
    return None


def is_irreducible(pair: PermutationPair) -> bool:
    return validate_permutation(pair) is None


class TranslationMatrix:
    """Antisymmetric matrix with entries in {-1, 0, 1}, indexed by symbols."""

    def __init__(self, alphabet: Sequence, entries: Mapping):
        self.alphabet = tuple(alphabet)
        self._entries = dict(entries)

    def __getitem__(self, key) -> int:
        return self._entries.get(key, 0)

    def rows(self) -> list[list[int]]:
        return [[self[a, b] for b in self.alphabet] for a in self.alphabet]

    def transpose(self) -> "TranslationMatrix":
        return TranslationMatrix(self.alphabet, {(b, a): v for (a, b), v in self._entries.items()})

    def __eq__(self, other):
        return isinstance(other, TranslationMatrix) and self.rows() == other.rows()

    def __repr__(self):
        return f"TranslationMatrix({self.alphabet}, {self.rows()})"


def translation_matrix(pair: PermutationPair) -> TranslationMatrix:
    p0 = {a: i for i, a in enumerate(pair.top)}
    p1 = {a: i for i, a in enumerate(pair.bottom)}
    entries = {}
    for a in pair.alphabet:
        for b in pair.alphabet:
            if p0[a] < p0[b] and p1[a] > p1[b]:
                entries[a, b] = 1
            elif p0[a] > p0[b] and p1[a] < p1[b]:
                entries[a, b] = -1
    return TranslationMatrix(pair.alphabet, entries)


def apply_matrix(omega: TranslationMatrix, vector: Mapping[str, SymbolicReal]) -> dict:
    out = {}
    for a in omega.alphabet:
        acc = SymbolicReal()
        for b in omega.alphabet:
            c = omega[a, b]
            if c == 1:
                acc = acc + vector[b]
            elif c == -1:
                acc = acc - vector[b]
        out[a] = acc
    return out


def displacement_vector(pair: PermutationPair, lengths: Mapping[str, SymbolicReal]) -> dict:
    """Translation applied to each interval: ``delta = Omega . lambda``."""
    return apply_matrix(translation_matrix(pair), lengths)


def total_length(lengths: Mapping[str, SymbolicReal]) -> SymbolicReal:
    acc = SymbolicReal()
    for v in lengths.values():
        acc = acc + v
    return acc


def iet_apply(pair: PermutationPair, lengths, x, basis: Basis | None = None) -> SymbolicReal:
    basis = basis or Basis()
    x = SymbolicReal.coerce(x)
    lengths = {k: SymbolicReal.coerce(v) for k, v in lengths.items()}
    if basis.sign(x) < 0 or basis.compare(x, total_length(lengths)) >= 0:
        raise OutOfDomain(f"{x} is outside [0, |lambda|)")
    delta = displacement_vector(pair, lengths)
    left = SymbolicReal()
    for a in pair.top:
        right = left + lengths[a]
        if basis.compare(x, right) < 0:
            return x + delta[a]
        left = right
    raise AssertionError("unreachable: x below the total length")


# --------------------------------------------------------------------------
# Keane's condition
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class KeaneResult:
    status: str  # "independent-sufficient" | "no-violation-up-to-depth" | "violated"
    violation: tuple | None = None  # (n, a, b)
    depth: int | None = None


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def lengths_rationally_independent(lengths: Mapping[str, SymbolicReal]) -> bool:
    """Exact test, relying on the basis being independent over Q."""
    names = sorted({n for v in lengths.values() for n in v.names()})
    rows = [[v.coeff(n) for n in names] for v in lengths.values()]
    return bool(names) and _rank(rows) == len(rows)


def keane_check(pair: PermutationPair, lengths, depth: int, basis: Basis | None = None) -> KeaneResult:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    basis = basis or Basis()
    lengths = {k: SymbolicReal.coerce(v) for k, v in lengths.items()}
    if lengths_rationally_independent(lengths):
        return KeaneResult("independent-sufficient")
    # discontinuities: 0 and the interior endpoints of the top intervals
    points = [SymbolicReal()]
    acc = SymbolicReal()
    for a in pair.top[:-1]:
        acc = acc + lengths[a]
        points.append(acc)
    preimage_of_zero = None
    acc = SymbolicReal()
    for a in pair.top:
        if a == pair.bottom[0]:
            preimage_of_zero = acc
            break
        acc = acc + lengths[a]
    current = list(points)
    for n in range(1, depth + 1):
        current = [iet_apply(pair, lengths, x, basis) for x in current]
        for a, image in zip(points, current):
            for b in points:
                if image == b:
                    if n == 1 and a == preimage_of_zero and b.is_zero():
                        continue
                    return KeaneResult("violated", (n, a, b), depth)
    return KeaneResult("no-violation-up-to-depth", None, depth)


# --------------------------------------------------------------------------
# forward step on (pi, lambda)
# --------------------------------------------------------------------------

def forward_move(pair: PermutationPair, kind: str) -> tuple[PermutationPair, str, str]:
    """Permutation part of a forward step: ``(new_pair, winner, loser)``."""
    top, bottom = list(pair.top), list(pair.bottom)
    if kind == TOP:
        w, l = top[-1], bottom[-1]
        bottom.pop()
        bottom.insert(bottom.index(w) + 1, l)
    else:
        w, l = bottom[-1], top[-1]
        top.pop()
        top.insert(top.index(w) + 1, l)
    return PermutationPair(tuple(top), tuple(bottom), pair.alphabet), w, l


def forward_type(pair: PermutationPair, lengths, basis: Basis) -> str:
    s = basis.compare(lengths[pair.top[-1]], lengths[pair.bottom[-1]])
    if s == 0:
        raise RauzyUndefined(
            f"last intervals {pair.top[-1]} and {pair.bottom[-1]} have equal length"
        )
    return TOP if s > 0 else BOTTOM


def forward_rauzy_step(pair: PermutationPair, lengths, basis: Basis | None = None):
    """One step of Rauzy-Veech induction on ``(pi, lambda)``.

    The winner is the symbol of the longer last interval; its length drops
    by the loser's, and the loser is re-inserted just after the winner in
    the order where it was last.
    """
    basis = basis or Basis()
    lengths = {k: SymbolicReal.coerce(v) for k, v in lengths.items()}
    kind = forward_type(pair, lengths, basis)
    new_pair, w, l = forward_move(pair, kind)
    new_lengths = dict(lengths)
    new_lengths[w] = lengths[w] - lengths[l]
    return new_pair, new_lengths, StepRecord(FORWARD, kind, w, l)
