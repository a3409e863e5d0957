import itertools
import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shuffle_lab.free_algebra import FormalSum, concat
from shuffle_lab.shuffle import (
    half_shuffle,
    half_shuffle_chain,
    shuffle,
    shuffle_many,
    shuffle_power,
    shuffle_words,
)


def fs(text, d=4):
    return FormalSum.parse(text, d)


def recursive_shuffle(u: bytes, v: bytes) -> Counter:
    """(va) sh (wb) = (va sh w) b + (v sh wb) a, straight from the definition."""
    if not u:
        return Counter({v: 1})
    if not v:
        return Counter({u: 1})
    out = Counter()
    for w, c in recursive_shuffle(u, v[:-1]).items():
        out[w + v[-1:]] += c
    for w, c in recursive_shuffle(u[:-1], v).items():
        out[w + u[-1:]] += c
    return out


def recursive_half_shuffle(u: bytes, v: bytes) -> Counter:
    """w > i = wi,  w > vi = (w > v + v > w) i."""
    if len(v) == 1:
        return Counter({u + v: 1})
    head, last = v[:-1], v[-1:]
    out = Counter()
    for w, c in (recursive_half_shuffle(u, head) + recursive_half_shuffle(head, u)).items():
        out[w + last] += c
    return out


def interleavings(u: bytes, v: bytes) -> Counter:
    """Brute force: every binary mask saying which word each position draws from."""
    n = len(u) + len(v)
    out = Counter()
    for mask in itertools.product((0, 1), repeat=n):
        if sum(mask) != len(v):
            continue
        iu, iv, w = 0, 0, []
        for m in mask:
            if m:
                w.append(v[iv])
                iv += 1
            else:
                w.append(u[iu])
                iu += 1
        out[bytes(w)] += 1
    return out


def brute_shuffle(a: FormalSum, b: FormalSum) -> FormalSum:
    out = Counter()
    for u, cu in a.items():
        for v, cv in b.items():
            for w, m in interleavings(u, v).items():
                out[w] += cu * cv * m
    return FormalSum(dict(out), a.d)


D = 3
nonempty_words = st.lists(st.integers(1, D), min_size=1, max_size=3).map(bytes)
small_sums = st.dictionaries(
    st.lists(st.integers(1, D), max_size=3).map(bytes), st.integers(-3, 3), max_size=4
).map(lambda t: FormalSum(t, D))


def test_12_sh_34():
    assert shuffle(fs("12"), fs("34")) == fs("1234 + 1324 + 1342 + 3124 + 3142 + 3412")


def test_unit_is_neutral():
    u = fs("1243 - 2*3")
    assert shuffle(FormalSum.unit(4), u) == u
    assert shuffle(u, FormalSum.unit(4)) == u


def test_letter_with_itself():
    assert shuffle(fs("1"), fs("1")) == fs("2*11")


def test_matches_recursive_definition():
    rng = random.Random(11)
    for _ in range(200):
        u = bytes(rng.randint(1, 3) for _ in range(rng.randint(0, 4)))
        v = bytes(rng.randint(1, 3) for _ in range(rng.randint(0, 4)))
        assert shuffle_words(u, v) == dict(recursive_shuffle(u, v))


def test_multiplicities_sum_to_binomial():
    for m in range(5):
        for n in range(5):
            u, v = bytes([1] * m), bytes([2] * n)
            res = shuffle_words(u, v)
            assert sum(res.values()) == math.comb(m + n, m)
            assert len(res) <= math.comb(m + n, m)
            assert all(c > 0 for c in res.values())


def test_half_shuffle_examples():
    assert half_shuffle(fs("12"), fs("3")) == fs("123")
    assert half_shuffle(fs("12"), fs("34")) == fs("1234 + 1324 + 3124")
    assert half_shuffle(fs("1"), fs("2")) + half_shuffle(fs("2"), fs("1")) == shuffle(fs("1"), fs("2"))


def test_half_shuffle_matches_recursion():
    rng = random.Random(5)
    for _ in range(200):
        u = bytes(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
        v = bytes(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
        got = half_shuffle(FormalSum({u: 1}, 3), FormalSum({v: 1}, 3))
        assert got == FormalSum(dict(recursive_half_shuffle(u, v)), 3)


def test_half_shuffle_rejects_empty_word():
    with pytest.raises(ValueError):
        half_shuffle(FormalSum.unit(4), fs("1"))
    with pytest.raises(ValueError):
        half_shuffle(fs("1"), fs("2 + ()"))


def test_chain():
    assert half_shuffle_chain([fs("12")]) == fs("12")
    assert half_shuffle_chain([fs("1"), fs("2")]) == fs("12")
    expected = FormalSum(dict(recursive_half_shuffle(b"\x01\x01", b"\x02\x02")), 4)
    expected_words = Counter()
    for w, c in expected.items():
        for x, m in recursive_half_shuffle(w, b"\x03\x03").items():
            expected_words[x] += c * m
    assert half_shuffle_chain([fs("11"), fs("22"), fs("33")]) == FormalSum(dict(expected_words), 4)
    with pytest.raises(ValueError):
        half_shuffle_chain([])


def test_shuffle_many_and_power():
    assert shuffle_many([fs("12")]) == fs("12")
    assert shuffle_many([], d=4) == FormalSum.unit(4)
    ws = [fs("11"), fs("22"), fs("33")]
    chains = FormalSum.zero(4)
    for order in itertools.permutations(ws):
        chains = chains + half_shuffle_chain(order)
    assert shuffle_many(ws) == chains
    a = fs("12 - 21")
    assert shuffle_power(a, 0) == FormalSum.unit(4)
    assert shuffle_power(a, 1) == a
    assert shuffle_power(a, 2) == shuffle(a, a)


def test_shuffle_square_of_area_form():
    a = fs("12 - 21", 2)
    expected = brute_shuffle(a, a)
    assert shuffle_power(a, 2) == expected
    # frozen from the brute-force interleaving oracle
    assert expected == FormalSum.parse("4*1122 - 4*1221 - 4*2112 + 4*2211", 2)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_power_binary_exponentiation_matches_repeated(k):
    a = fs("1 - 2 + 12", 2)
    repeated = FormalSum.unit(2)
    for _ in range(k):
        repeated = shuffle(repeated, a)
    assert shuffle_power(a, k) == repeated


@settings(max_examples=80, deadline=None)
@given(small_sums, small_sums)
def test_shuffle_against_brute_force(a, b):
    assert shuffle(a, b) == brute_shuffle(a, b)


@settings(max_examples=80, deadline=None)
@given(small_sums, small_sums, small_sums)
def test_commutative_and_associative(a, b, c):
    assert shuffle(a, b) == shuffle(b, a)
    assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))


@settings(max_examples=100, deadline=None)
@given(nonempty_words, nonempty_words)
def test_symmetrization(u, v):
    a, b = FormalSum({u: 1}, D), FormalSum({v: 1}, D)
    assert half_shuffle(a, b) + half_shuffle(b, a) == shuffle(a, b)


@settings(max_examples=100, deadline=None)
@given(nonempty_words, nonempty_words, nonempty_words)
def test_dendriform(u, v, w):
    a, b, c = (FormalSum({x: 1}, D) for x in (u, v, w))
    assert half_shuffle(a, half_shuffle(b, c)) == half_shuffle(shuffle(a, b), c)


@settings(max_examples=40, deadline=None)
@given(st.lists(nonempty_words, min_size=1, max_size=4))
def test_shuffle_via_half_shuffle_chains(ws):
    sums = [FormalSum({w: 1}, D) for w in ws]
    rhs = FormalSum.zero(D)
    for order in itertools.permutations(sums):
        rhs = rhs + half_shuffle_chain(order)
    assert shuffle_many(sums) == rhs


def test_half_shuffle_last_letter_from_right():
    res = half_shuffle(fs("123"), fs("44"))
    assert all(w[-1] == 4 for w in res)
    assert res == concat(shuffle(fs("123"), fs("4")), fs("4"))
