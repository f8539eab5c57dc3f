import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rauzy.errors import ParseError, PrecisionExhausted
from rauzy.numeric import (
    PRECISION_LADDER,
    Basis,
    BasisSymbol,
    SymbolicReal,
    format_rational,
    parse_rational,
    symreal_arith,
    symreal_sign,
)

from conftest import BASIS, sr

SQRT2_60 = "1.414213562373095048801688724209698078569671875376948073176679"

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**9)
names = st.sampled_from(["1", "sqrt2", "sqrt3", "sqrt5"])
symreals = st.dictionaries(names, rationals, max_size=4).map(SymbolicReal)


def test_sign_examples():
    assert symreal_sign(SymbolicReal(), BASIS) == 0
    assert symreal_sign(sr({"1": 2, "sqrt2": -1}), BASIS) == 1
    assert symreal_sign(sr({"1": 1, "sqrt2": 0}), BASIS) == 1
    assert sr({"1": 1, "sqrt2": 0}).terms == {"1": 1}


def test_arith_examples():
    assert symreal_arith(sr(2), sr(Fraction(1, 2)), "add", 1) == sr(Fraction(5, 2))
    assert symreal_arith(sr({"sqrt2": 1}), sr({"sqrt2": 1}), "sub", 1).terms == {}
    got = symreal_arith(sr(1), sr({"sqrt2": 1}), "add", -2)
    assert got.terms == {"1": 1, "sqrt2": -2}


def test_close_combination_needs_high_precision():
    # 665857/470832 approximates sqrt2 to about 1e-12
    x = sr({"sqrt2": 470832, "1": -665857})
    assert symreal_sign(x, BASIS) == -1


def test_decimal_witness_agrees_with_sqrt_witness():
    dec = Basis.from_witnesses({"r": SQRT2_60})
    x = sr({"r": 470832, "1": -665857})
    assert symreal_sign(x, dec) == -1


def test_precision_exhausted_on_hidden_relation():
    # two names for the same real: a relation the basis contract forbids
    b = Basis.from_witnesses({"p": SQRT2_60, "q": SQRT2_60})
    with pytest.raises(PrecisionExhausted):
        b.sign(sr({"p": 1, "q": -1}))


def test_witness_validation():
    with pytest.raises(ParseError):
        BasisSymbol("x", "1.4142")
    with pytest.raises(ParseError):
        BasisSymbol("x", "sqrt(4)")
    with pytest.raises(ParseError):
        BasisSymbol("1", "2")
    with pytest.raises(ParseError):
        BasisSymbol("bad name", SQRT2_60)
    assert BasisSymbol("x", SQRT2_60).witness == SQRT2_60


def test_parse_rational_forms():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-7") == -7
    for bad in ("1.5", "1/0", "", "a/b", 1.5, True):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_text_form():
    x = sr({"1": 2, "sqrt2": -1})
    assert str(x) == "2 - sqrt2"
    assert x.to_json() == {"1": "2", "sqrt2": "-1"}
    assert SymbolicReal.from_json({"sqrt2": "1/3"}) == sr({"sqrt2": Fraction(1, 3)})


@given(symreals)
def test_sign_zero_iff_empty(x):
    assert (symreal_sign(x, BASIS) == 0) == (not x.terms)


@given(symreals)
def test_self_subtraction_is_zero(x):
    assert symreal_sign(symreal_arith(x, x, "sub", 1), BASIS) == 0


@given(symreals, st.sampled_from(PRECISION_LADDER[:4]))
@settings(max_examples=60)
def test_interval_brackets_decimal_evaluation(x, prec):
    getcontext().prec = 80
    roots = {"1": Decimal(1), "sqrt2": Decimal(2).sqrt(), "sqrt3": Decimal(3).sqrt(),
             "sqrt5": Decimal(5).sqrt()}
    value = sum((Decimal(c.numerator) / Decimal(c.denominator) * roots[n] for n, c in x.terms.items()),
                Decimal(0))
    iv = BASIS.interval(x, prec)
    scale = Decimal(2) ** prec
    slack = Decimal(10) ** -60
    assert Decimal(iv.lo) / scale - slack <= value <= Decimal(iv.hi) / scale + slack


@given(rationals)
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q
    assert format_rational(parse_rational(format_rational(q))) == format_rational(q)


@given(symreals, symreals)
def test_sign_is_antisymmetric(x, y):
    assert BASIS.compare(x, y) == -BASIS.compare(y, x)


def test_sqrt_witness_bounds_are_tight():
    lo, hi = BASIS["sqrt2"].bounds(64)
    assert lo * lo <= 2 << 128 <= hi * hi
    assert hi - lo <= 1
    assert math.isqrt(2 << 128) == lo


def test_float_of_cancelling_value():
    # (sqrt2 - 1)^400 = a + b*sqrt2 with |a|, |b| near 2^507
    a, b = 1, 0
    for _ in range(400):
        a, b = -a + 2 * b, a - b
    x = sr({"1": a, "sqrt2": b})
    expect = (math.sqrt(2) - 1) ** 400
    assert math.isclose(BASIS.to_float(x), expect, rel_tol=1e-12)
    assert BASIS.to_decimal_string(x, 12).startswith(f"{expect:.6e}"[:7])
