import math
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from rauzy.iet import PermutationPair, is_irreducible
from rauzy.numeric import Basis, SymbolicReal
from rauzy.suspension import Surface, validate_suspension

SURFACES = Path(__file__).resolve().parent.parent / "surfaces"

BASIS = Basis.from_witnesses({"sqrt2": "sqrt(2)", "sqrt3": "sqrt(3)", "sqrt5": "sqrt(5)",
                              "sqrt7": "sqrt(7)"})
HALF = Fraction(1, 2)


def sr(value):
    if isinstance(value, dict):
        return SymbolicReal(value)
    return SymbolicReal.coerce(value)


def make_surface(top, bottom, lam, tau, basis=BASIS, check=True):
    pair = PermutationPair(tuple(top.split()), tuple(bottom.split()))
    return Surface(pair, {a: sr(v) for a, v in zip(pair.top, lam)},
                   {a: sr(v) for a, v in zip(pair.top, tau)}, basis, check=check)


def frozen_bc(tau_d=None):
    return make_surface("A B C D", "D C B A", [1] * 4,
                        [2, HALF, -HALF, tau_d if tau_d is not None else {"sqrt2": -1}])


def saddle_ac():
    return make_surface("A B C D", "D C B A", [1] * 4, [{"sqrt2": 1}, HALF, -HALF, -1])


def independent_surface():
    return make_surface("A B C D", "D C B A", [1] * 4,
                        [1, {"sqrt2": Fraction(1, 4)}, {"sqrt3": Fraction(-1, 4)}, {"sqrt5": -1}])


def abc_minimal():
    return make_surface("A B C", "C B A", [1] * 3, [{"sqrt2": 1}, 0, -1])


def random_pair(rng, d):
    names = [chr(ord("A") + i) for i in range(d)]
    while True:
        bottom = names[:]
        rng.shuffle(bottom)
        pair = PermutationPair(tuple(names), tuple(bottom))
        if is_irreducible(pair):
            return pair


def random_surface(rng, d=None, irrational=False, zero_symbol=False, rational_only=True):
    """A random valid surface near the canonical suspension ``pi1 - pi0``.

    With ``irrational`` one symbol's entry gets a sqrt2 term so the backward
    orbit never stops; with ``zero_symbol`` one entry is forced to zero.
    """
    d = d or rng.randint(2, 6)
    while True:
        pair = random_pair(rng, d)
        lam = {a: sr(Fraction(rng.randint(1, 40), rng.randint(1, 12))) for a in pair.alphabet}
        tau = {}
        for a in pair.alphabet:
            base = Fraction(pair.pi1(a) - pair.pi0(a))
            tau[a] = sr(base + Fraction(rng.randint(-30, 30), rng.randint(40, 120)))
        if irrational:
            a = rng.choice(pair.alphabet)
            tau[a] = tau[a] + sr({"sqrt2": Fraction(rng.randint(1, 9), rng.randint(20, 60))})
        if zero_symbol:
            # the first symbol of either order can never carry a zero entry
            free = [a for a in pair.alphabet if a not in (pair.top[0], pair.bottom[0])]
            if not free:
                continue
            tau[rng.choice(free)] = SymbolicReal()
        if validate_suspension(pair, tau, BASIS) is not None:
            continue
        s = Surface(pair, lam, tau, BASIS)
        if s.tau_sum().is_zero():
            continue
        return s


@st.composite
def surfaces(draw, dmin=2, dmax=6, **kw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    d = draw(st.integers(min_value=dmin, max_value=dmax))
    return random_surface(random.Random(seed), d, **kw)


@pytest.fixture
def rng():
    return random.Random(20261016)
