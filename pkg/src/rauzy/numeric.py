"""Exact scalars: rationals, symbolic reals over a basis of independent
reals, and rigorous sign determination by interval evaluation.

A :class:`SymbolicReal` is a finite rational combination of named basis
reals.  The basis is trusted to be linearly independent over Q, so a
combination is zero exactly when all its coefficients vanish.  Signs of
non-zero combinations are read off fixed-point intervals built from the
basis witnesses; the precision is doubled from 64 up to 4096 bits and
:class:`~rauzy.errors.PrecisionExhausted` is raised if zero is still not
excluded.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ParseError, PrecisionExhausted
from .kernel import combination_sign

PRECISION_LADDER = (64, 128, 256, 512, 1024, 2048, 4096)
MIN_WITNESS_DIGITS = 50
ONE = "1"

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d*)(?:\.(\d*))?\s*$")
_SQRT_RE = re.compile(r"^\s*sqrt\(\s*(\d+)\s*\)\s*$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$|^1$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``.  Ints and Fractions pass through.

    Floats are refused on purpose: every number at the boundary is exact.
    """
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rationals must be given as strings, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# basis
# --------------------------------------------------------------------------

def _significant_digits(intpart: str, fracpart: str) -> int:
    digits = (intpart + fracpart).lstrip("0")
    return len(digits)


@functools.lru_cache(maxsize=4096)
def _witness_bounds(witness: str, prec: int) -> tuple[int, int]:
    """Integers ``lo, hi`` with ``lo / 2**prec <= w <= hi / 2**prec``."""
    m = _SQRT_RE.match(witness)
    if m is not None:
        n = int(m.group(1)) << (2 * prec)
        r = math.isqrt(n)
        return (r, r) if r * r == n else (r, r + 1)
    if witness == ONE:
        return (1 << prec, 1 << prec)
    m = _DECIMAL_RE.match(witness)
    sign = -1 if m.group(1) == "-" else 1
    intpart, fracpart = m.group(2) or "0", m.group(3) or ""
    scale = 10 ** len(fracpart)
    mant = sign * int(intpart + fracpart)
    # a decimal witness is only trusted up to one unit in its last place
    lo = ((mant - 1) << prec) // scale
    hi = -((-(mant + 1) << prec) // scale)
    return lo, hi


class BasisSymbol:
    """A named real number, known through a witness.

    The witness is either a decimal string with at least 50 significant
    digits (trusted to one unit in the last place) or ``"sqrt(n)"`` for a
    non-square integer ``n``, which can be evaluated to any precision.  The
    reserved name ``"1"`` always has witness exactly 1.
    """

    __slots__ = ("name", "witness")

    def __init__(self, name: str, witness: str):
        if not isinstance(name, str) or not _NAME_RE.match(name):
            raise ParseError(f"invalid basis symbol name {name!r}")
        if not isinstance(witness, str):
            raise ParseError(f"witness for {name!r} must be a string")
        witness = witness.strip()
        if name == ONE:
            if witness != ONE:
                raise ParseError('the reserved basis symbol "1" has witness exactly 1')
        elif _SQRT_RE.match(witness):
            n = int(_SQRT_RE.match(witness).group(1))
            if math.isqrt(n) ** 2 == n:
                raise ParseError(f"witness {witness!r} for {name!r} is rational")
        else:
            m = _DECIMAL_RE.match(witness)
            if m is None or not (m.group(2) or m.group(3)):
                raise ParseError(f"witness for {name!r} is not a decimal: {witness!r}")
            if _significant_digits(m.group(2) or "", m.group(3) or "") < MIN_WITNESS_DIGITS:
                raise ParseError(
                    f"witness for {name!r} needs at least {MIN_WITNESS_DIGITS} significant digits"
                )
        self.name = name
        self.witness = witness

    def bounds(self, prec: int) -> tuple[int, int]:
        return _witness_bounds(self.witness, prec)

    def __eq__(self, other):
        return (
            isinstance(other, BasisSymbol)
            and self.name == other.name
            and self.witness == other.witness
        )

    def __hash__(self):
        return hash((self.name, self.witness))

    def __repr__(self):
        return f"BasisSymbol({self.name!r}, {self.witness!r})"


class Basis:
    """An ordered set of basis symbols; ``"1"`` is always present and first."""

    def __init__(self, symbols: Iterable[BasisSymbol] = ()):
        table = {ONE: BasisSymbol(ONE, ONE)}
        for sym in symbols:
            if sym.name in table and table[sym.name] != sym:
                raise ParseError(f"duplicate basis symbol {sym.name!r}")
            table[sym.name] = sym
        self._symbols = table
        self._bounds_cache: dict = {}

    @classmethod
    def from_witnesses(cls, witnesses: Mapping[str, str] | None = None) -> "Basis":
        return cls(BasisSymbol(k, v) for k, v in (witnesses or {}).items())

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._symbols)

    def witnesses(self) -> dict[str, str]:
        """Witness strings of the non-reserved symbols, in insertion order."""
        return {k: s.witness for k, s in self._symbols.items() if k != ONE}

    def __contains__(self, name):
        return name in self._symbols

    def __getitem__(self, name) -> BasisSymbol:
        return self._symbols[name]

    def __eq__(self, other):
        return isinstance(other, Basis) and self._symbols == other._symbols

    def __hash__(self):
        return hash(tuple(self._symbols.values()))

    def __repr__(self):
        return f"Basis({self.witnesses()!r})"

    def merged(self, other: "Basis") -> "Basis":
        return Basis(list(self._symbols.values()) + list(other._symbols.values()))

    def bounds_table(self, names: tuple[str, ...]):
        """Return ``bounds(prec) -> (lows, highs)`` aligned with ``names``."""
        key = tuple(names)
        fn = self._bounds_cache.get(key)
        if fn is None:
            missing = [n for n in key if n not in self._symbols]
            if missing:
                raise KeyError(f"basis symbols not declared: {missing}")
            syms = [self._symbols[n] for n in key]

            @functools.lru_cache(maxsize=None)
            def fn(prec):
                pairs = [s.bounds(prec) for s in syms]
                return [p[0] for p in pairs], [p[1] for p in pairs]

            self._bounds_cache[key] = fn
        return fn

    # -- evaluation -------------------------------------------------------

    def sign(self, x: "SymbolicReal") -> int:
        """Exact sign of ``x``; 0 iff the coefficient map is empty."""
        if not x._terms:
            return 0
        names = tuple(x._terms)
        coeffs = _integer_coefficients(x._terms.values())
        return combination_sign(coeffs, self.bounds_table(names), PRECISION_LADDER)

    def compare(self, x: "SymbolicReal", y: "SymbolicReal") -> int:
        return self.sign(x - y)

    def interval(self, x: "SymbolicReal", prec: int) -> "Interval":
        if not x._terms:
            return Interval(0, 0, prec)
        names = tuple(x._terms)
        lows, highs = self.bounds_table(names)(prec)
        lo = hi = Fraction(0)
        for c, l, h in zip(x._terms.values(), lows, highs):
            if c > 0:
                lo += c * l
                hi += c * h
            else:
                lo += c * h
                hi += c * l
        return Interval(math.floor(lo), math.ceil(hi), prec)

    def midpoint(self, x: "SymbolicReal", rel_bits: int = 64) -> Fraction:
        """A rational within ``2**-rel_bits`` relative error of ``x``.

        Precision grows along the ladder, so values with heavy cancellation
        between large coefficients still come out right.
        """
        if not x._terms:
            return Fraction(0)
        mid = Fraction(0)
        for prec in PRECISION_LADDER:
            iv = self.interval(x, prec)
            mid = Fraction(iv.lo + iv.hi, 2 << prec)
            if iv.sign() and (iv.hi - iv.lo) << rel_bits <= min(abs(iv.lo), abs(iv.hi)):
                return mid
        raise PrecisionExhausted("value not resolved at maximum precision")

    def to_float(self, x: "SymbolicReal") -> float:
        return float(self.midpoint(x, 60))

    def to_decimal_string(self, x: "SymbolicReal", digits: int = 30) -> str:
        """Midpoint decimal, for display and layout only."""
        return _fraction_to_decimal(self.midpoint(x, int(digits * 3.33) + 8), digits)


def _fraction_to_decimal(q: Fraction, digits: int) -> str:
    import decimal

    with decimal.localcontext() as ctx:
        ctx.prec = digits
        return str(decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator))


def _integer_coefficients(values) -> list[int]:
    values = list(values)
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in values]


# --------------------------------------------------------------------------
# symbolic reals
# --------------------------------------------------------------------------

class SymbolicReal:
    """Immutable finite rational combination of basis symbols."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[str, object] | None = None):
        clean = {}
        for name, c in (terms or {}).items():
            c = c if isinstance(c, Fraction) else parse_rational(c)
            if c:
                clean[name] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "SymbolicReal":
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q) -> "SymbolicReal":
        q = parse_rational(q)
        return cls._raw({ONE: q} if q else {})

    @classmethod
    def symbol(cls, name: str, coeff=1) -> "SymbolicReal":
        c = parse_rational(coeff)
        return cls._raw({name: c} if c else {})

    @classmethod
    def coerce(cls, value) -> "SymbolicReal":
        if isinstance(value, SymbolicReal):
            return value
        if isinstance(value, Mapping):
            return cls(value)
        return cls.rational(value)

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> dict[str, Fraction]:
        return dict(self._terms)

    def coeff(self, name: str) -> Fraction:
        return self._terms.get(name, Fraction(0))

    def names(self) -> tuple[str, ...]:
        return tuple(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(k == ONE for k in self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, SymbolicReal):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def _combine(self, other: "SymbolicReal", scale: Fraction) -> "SymbolicReal":
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + scale * c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SymbolicReal._raw(out)

    def __add__(self, other):
        if not isinstance(other, SymbolicReal):
            if isinstance(other, (int, Fraction)):
                other = SymbolicReal.rational(other)
            else:
                return NotImplemented
        return self._combine(other, Fraction(1))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, SymbolicReal):
            if isinstance(other, (int, Fraction)):
                other = SymbolicReal.rational(other)
            else:
                return NotImplemented
        return self._combine(other, Fraction(-1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SymbolicReal._raw({k: -c for k, c in self._terms.items()})

    def __mul__(self, q):
        if isinstance(q, SymbolicReal):
            return NotImplemented
        q = parse_rational(q)
        if not q:
            return SymbolicReal._raw({})
        return SymbolicReal._raw({k: c * q for k, c in self._terms.items()})

    __rmul__ = __mul__

    def times(self, other: "SymbolicReal") -> "FormalProduct":
        """Formal (unreduced) product, used for exact bilinear identities."""
        out: dict = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = (a, b) if a <= b else (b, a)
                v = out.get(key, 0) + ca * cb
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return FormalProduct(out)

    # -- text forms --------------------------------------------------------

    def to_json(self) -> dict[str, str]:
        return {k: format_rational(self._terms[k]) for k in _ordered_names(self._terms)}

    @classmethod
    def from_json(cls, obj) -> "SymbolicReal":
        if isinstance(obj, str):
            return cls.rational(parse_rational(obj))
        if not isinstance(obj, Mapping):
            raise ParseError(f"symbolic real must be an object of coefficients, got {obj!r}")
        terms = {}
        for k, v in obj.items():
            if not isinstance(k, str) or not _NAME_RE.match(k):
                raise ParseError(f"invalid basis symbol name {k!r}")
            terms[k] = parse_rational(v)
        return cls(terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k in _ordered_names(self._terms):
            c = self._terms[k]
            mag = format_rational(abs(c))
            if k == ONE:
                body = mag
            elif abs(c) == 1:
                body = k
            else:
                body = f"{mag}*{k}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def __repr__(self):
        return f"SymbolicReal({self.to_json()!r})"


def _ordered_names(terms) -> list[str]:
    return sorted(terms, key=lambda k: (k != ONE, k))


class FormalProduct:
    """Sum of formal monomials ``c * s * t`` over pairs of basis symbols.

    Monomials are never reduced (``sqrt2*sqrt2`` stays as it is), so
    structural equality is a sufficient, not necessary, test of equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other: "FormalProduct") -> "FormalProduct":
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return FormalProduct(out)

    def __sub__(self, other: "FormalProduct") -> "FormalProduct":
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) - v
        return FormalProduct(out)

    def __neg__(self):
        return FormalProduct({k: -v for k, v in self._terms.items()})

    def __eq__(self, other):
        return isinstance(other, FormalProduct) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def interval(self, basis: Basis, prec: int) -> "Interval":
        total = Interval(0, 0, prec)
        for (a, b), c in self._terms.items():
            ia = basis.interval(SymbolicReal.symbol(a), prec)
            ib = basis.interval(SymbolicReal.symbol(b), prec)
            total = total + (ia * ib).scaled(c)
        return total

    def sign(self, basis: Basis) -> int:
        if not self._terms:
            return 0
        for prec in PRECISION_LADDER:
            s = self.interval(basis, prec).sign()
            if s is not None:
                return s
        raise PrecisionExhausted("cannot decide the sign of a product expression")

    def __repr__(self):
        return f"FormalProduct({self._terms!r})"


# --------------------------------------------------------------------------
# fixed-point intervals
# --------------------------------------------------------------------------

class Interval:
    """Closed interval ``[lo, hi] / 2**prec`` with integer endpoints.

    Every operation rounds outward, so the true value is always enclosed.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: int, hi: int, prec: int):
        self.lo = lo
        self.hi = hi
        self.prec = prec

    def _check(self, other):
        if self.prec != other.prec:
            raise ValueError("mixing intervals of different precision")

    def __add__(self, other):
        self._check(other)
        return Interval(self.lo + other.lo, self.hi + other.hi, self.prec)

    def __sub__(self, other):
        self._check(other)
        return Interval(self.lo - other.hi, self.hi - other.lo, self.prec)

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.prec)

    def __mul__(self, other):
        self._check(other)
        p = self.prec
        prods = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(prods) >> p, -((-max(prods)) >> p), p)

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        p = self.prec
        one = 1 << (2 * p)
        if self.lo > 0:
            return Interval(one // self.hi, -(-one // self.lo), p)
        return -(-self).reciprocal()

    def __truediv__(self, other):
        return self * other.reciprocal()

    def scaled(self, q) -> "Interval":
        q = Fraction(q)
        a, b = q * self.lo, q * self.hi
        if a > b:
            a, b = b, a
        return Interval(math.floor(a), math.ceil(b), self.prec)

    def sign(self):
        """+1 / -1 when zero is excluded, ``None`` when it is not."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def contains(self, q) -> bool:
        q = Fraction(q) * (1 << self.prec)
        return self.lo <= q <= self.hi

    def midpoint(self) -> Fraction:
        return Fraction(self.lo + self.hi, 2 << self.prec)

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi}, prec={self.prec})"


# --------------------------------------------------------------------------
# operation-level API
# --------------------------------------------------------------------------

def symreal_sign(x: SymbolicReal, basis: Basis) -> int:
    return basis.sign(x)


def symreal_arith(x: SymbolicReal, y: SymbolicReal, op: str, scale=1) -> SymbolicReal:
    """``x + scale*y`` (op ``"add"``) or ``x - scale*y`` (op ``"sub"``)."""
    scale = parse_rational(scale)
    if op == "add":
        return x._combine(y, scale)
    if op == "sub":
        return x._combine(y, -scale)
    raise ValueError(f"unknown op {op!r}")
