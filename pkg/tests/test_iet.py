import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rauzy.errors import NotAPermutation, OutOfDomain, RauzyUndefined
from rauzy.iet import (
    BOTTOM,
    TOP,
    PermutationPair,
    StepRecord,
    displacement_vector,
    forward_rauzy_step,
    iet_apply,
    is_irreducible,
    keane_check,
    total_length,
    translation_matrix,
    validate_permutation,
)
from rauzy.numeric import SymbolicReal

from conftest import BASIS, random_pair, sr

SWAP = PermutationPair.from_strings("A B", "B A")
REV4 = PermutationPair.from_strings("A B C D", "D C B A")
REV3 = PermutationPair.from_strings("A B C", "C B A")


def lengths(pair, values):
    return {a: sr(v) for a, v in zip(pair.alphabet, values)}


# -- oracles --------------------------------------------------------------

def simulated_offsets(pair, lam):
    """Offset of each interval, read off where it lands after the exchange."""
    out = {}
    before = Fraction(0)
    starts = {}
    for a in pair.top:
        starts[a] = before
        before += lam[a]
    after = Fraction(0)
    for a in pair.bottom:
        out[a] = after - starts[a]
        after += lam[a]
    return out


def rational_iet(pair, lam):
    off = simulated_offsets(pair, lam)

    def T(x):
        left = Fraction(0)
        for a in pair.top:
            if x < left + lam[a]:
                return x + off[a]
            left += lam[a]
        raise ValueError(x)

    return T


def first_return(T, x, bound):
    y = T(x)
    while y >= bound:
        y = T(y)
    return y


# -- permutations -----------------------------------------------------------

def test_validate_examples():
    assert validate_permutation(SWAP) is None
    assert validate_permutation(REV4) is None
    assert validate_permutation(PermutationPair.from_strings("A B C", "A C B")) == 1


def test_not_a_permutation():
    with pytest.raises(NotAPermutation):
        PermutationPair(("A", "B"), ("A", "A"))
    with pytest.raises(NotAPermutation):
        PermutationPair(("A", "B"), ("B", "C"))
    with pytest.raises(NotAPermutation):
        PermutationPair(("A",), ("A",))


def test_step_record_needs_distinct_symbols():
    with pytest.raises(ValueError):
        StepRecord("forward", TOP, "A", "A")


# -- translation matrix and displacement --------------------------------------

def test_translation_matrix_examples():
    om = translation_matrix(SWAP)
    assert om.rows() == [[0, 1], [-1, 0]]
    for pair in (REV4, REV3):
        rows = translation_matrix(pair).rows()
        d = pair.d
        assert rows == [[(1 if j > i else -1 if j < i else 0) for j in range(d)] for i in range(d)]


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
@settings(max_examples=100)
def test_translation_matrix_antisymmetric(seed, d):
    pair = random_pair(random.Random(seed), d)
    om = translation_matrix(pair)
    for a in pair.alphabet:
        assert om[a, a] == 0
        for b in pair.alphabet:
            assert om[a, b] == -om[b, a]


def test_displacement_examples():
    assert displacement_vector(SWAP, lengths(SWAP, [2, 1])) == {"A": sr(1), "B": sr(-2)}
    assert displacement_vector(REV3, lengths(REV3, [1, 1, 1])) == {"A": sr(2), "B": sr(0), "C": sr(-2)}


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
@settings(max_examples=100)
def test_displacement_matches_simulation(seed, d):
    rng = random.Random(seed)
    pair = random_pair(rng, d)
    lam = {a: Fraction(rng.randint(1, 50), rng.randint(1, 9)) for a in pair.alphabet}
    delta = displacement_vector(pair, {a: sr(v) for a, v in lam.items()})
    expect = simulated_offsets(pair, lam)
    assert delta == {a: sr(v) for a, v in expect.items()}
    assert sum(delta[a].coeff("1") * lam[a] for a in pair.alphabet) == 0


# -- the map ---------------------------------------------------------------------

def test_iet_apply_examples():
    lam = lengths(SWAP, [2, 1])
    assert iet_apply(SWAP, lam, Fraction(1, 2)) == sr(Fraction(3, 2))
    assert iet_apply(SWAP, lam, Fraction(5, 2)) == sr(Fraction(1, 2))
    assert iet_apply(SWAP, lam, 0) == sr(1)
    for x in (-1, 3, Fraction(7, 2)):
        with pytest.raises(OutOfDomain):
            iet_apply(SWAP, lam, x)


def test_iet_apply_symbolic():
    lam = {"A": sr(1), "B": sr({"sqrt2": 1})}
    assert iet_apply(SWAP, lam, Fraction(1, 2), BASIS) == sr({"1": Fraction(1, 2), "sqrt2": 1})


# -- Keane's condition ----------------------------------------------------------------

def brute_keane(pair, lam, depth):
    T = rational_iet(pair, lam)
    pts = [Fraction(0)]
    acc = Fraction(0)
    for a in pair.top[:-1]:
        acc += lam[a]
        pts.append(acc)
    pre0 = next(x for x in pts if T(x) == 0)
    cur = list(pts)
    for n in range(1, depth + 1):
        cur = [T(x) for x in cur]
        for a, img in zip(pts, cur):
            if img in pts and not (n == 1 and a == pre0 and img == 0):
                return n, a, img
    return None


def test_keane_examples():
    assert keane_check(SWAP, {"A": sr(1), "B": sr({"sqrt2": 1})}, 5, BASIS).status == "independent-sufficient"
    r = keane_check(SWAP, lengths(SWAP, [1, 1]), 3)
    assert r.status == "violated"
    assert r.violation == brute_keane(SWAP, {"A": 1, "B": 1}, 3) == (1, 0, 1)
    r = keane_check(SWAP, lengths(SWAP, [2, 1]), 2)
    assert r.status == "violated"
    assert r.violation == brute_keane(SWAP, {"A": 2, "B": 1}, 2) == (2, 0, 2)


@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
@settings(max_examples=60)
def test_keane_matches_brute_force(seed, d):
    rng = random.Random(seed)
    pair = random_pair(rng, d)
    lam = {a: Fraction(rng.randint(1, 12), rng.randint(1, 4)) for a in pair.alphabet}
    r = keane_check(pair, {a: sr(v) for a, v in lam.items()}, 6)
    expect = brute_keane(pair, lam, 6)
    if expect is None:
        assert r.status == "no-violation-up-to-depth"
    else:
        assert r.status == "violated"
        n, a, b = r.violation
        assert (n, a.coeff("1"), b.coeff("1")) == expect


# -- forward step -------------------------------------------------------------------------

def test_forward_examples():
    pair, lam, rec = forward_rauzy_step(SWAP, lengths(SWAP, [2, 1]))
    assert (rec.kind, rec.winner, rec.loser) == (BOTTOM, "A", "B")
    assert pair == SWAP and lam == lengths(SWAP, [1, 1])
    pair, lam, rec = forward_rauzy_step(SWAP, lengths(SWAP, [1, 2]))
    assert (rec.kind, rec.winner) == (TOP, "B")
    assert pair == SWAP and lam == lengths(SWAP, [1, 1])
    with pytest.raises(RauzyUndefined):
        forward_rauzy_step(SWAP, lengths(SWAP, [1, 1]))


def test_forward_reinserts_loser_after_winner():
    pair, _, rec = forward_rauzy_step(REV4, lengths(REV4, [1, 1, 1, 2]))
    assert rec.winner == "D" and rec.loser == "A"
    assert pair.top == ("A", "B", "C", "D") and pair.bottom == ("D", "A", "C", "B")


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
@settings(max_examples=100)
def test_forward_step_is_first_return(seed, d):
    rng = random.Random(seed)
    pair = random_pair(rng, d)
    lam = {a: Fraction(rng.randint(1, 60), rng.randint(1, 7)) for a in pair.alphabet}
    if lam[pair.top[-1]] == lam[pair.bottom[-1]]:
        return
    new_pair, new_lam, rec = forward_rauzy_step(pair, {a: sr(v) for a, v in lam.items()})
    new_lam = {a: v.coeff("1") for a, v in new_lam.items()}
    assert is_irreducible(new_pair)
    short = min(lam[pair.top[-1]], lam[pair.bottom[-1]])
    assert sum(new_lam.values()) == sum(lam.values()) - short
    T = rational_iet(pair, lam)
    S = rational_iet(new_pair, new_lam)
    bound = sum(new_lam.values())
    for k in range(40):
        x = bound * Fraction(k, 40) + Fraction(1, 997)
        if x < bound:
            assert S(x) == first_return(T, x, bound)
