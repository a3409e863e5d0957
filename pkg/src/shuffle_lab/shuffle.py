"""Shuffle product, right half-shuffle and their iterates."""

from __future__ import annotations

from functools import lru_cache, reduce
from itertools import combinations
from operator import itemgetter
from typing import Sequence

from .free_algebra import FormalSum

__all__ = [
    "half_shuffle",
    "half_shuffle_chain",
    "shuffle",
    "shuffle_many",
    "shuffle_power",
    "shuffle_words",
]


@lru_cache(maxsize=None)
def _interleavings(m: int, n: int) -> tuple:
    """One itemgetter per way of interleaving a length-``m`` word with a
    length-``n`` word.  Each getter picks letters out of the concatenation
    ``u + v`` in the order they appear in the shuffled word."""
    getters = []
    for first in combinations(range(m + n), m):
        chosen = set(first)
        i, j = 0, m
        idx = []
        for k in range(m + n):
            if k in chosen:
                idx.append(i)
                i += 1
            else:
                idx.append(j)
                j += 1
        getters.append(itemgetter(*idx))
    return tuple(getters)


def shuffle_words(u: bytes, v: bytes) -> dict[bytes, int]:
    """Shuffle of two words as a ``word -> multiplicity`` map."""
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    uv = u + v
    out: dict[bytes, int] = {}
    for g in _interleavings(len(u), len(v)):
        w = bytes(g(uv))
        out[w] = out.get(w, 0) + 1
    return out


def _shuffle_into(out: dict, u: bytes, cu, v: bytes, cv) -> None:
    c = cu * cv
    if not u:
        out[v] = out.get(v, 0) + c
        return
    if not v:
        out[u] = out.get(u, 0) + c
        return
    uv = u + v
    get = out.get
    for g in _interleavings(len(u), len(v)):
        w = bytes(g(uv))
        out[w] = get(w, 0) + c


def shuffle(a: FormalSum, b: FormalSum) -> FormalSum:
    """Bilinear shuffle product ``a ⧢ b``.

    Computed by enumerating the positions taken by the letters of the first
    word rather than by the defining recursion.

    >>> str(shuffle(FormalSum.word("12", 4), FormalSum.word("34", 4)))
    '1234 + 1324 + 1342 + 3124 + 3142 + 3412'
    """
    a._check(b)
    out: dict = {}
    for u, cu in a.items():
        for v, cv in b.items():
            _shuffle_into(out, u, cu, v, cv)
    return FormalSum._raw(out, a.d)


def _require_nonempty(s: FormalSum, name: str) -> None:
    if b"" in set(s):
        raise ValueError(f"half-shuffle is only defined for non-empty words; {name} has a 𝟙 component")


def half_shuffle(a: FormalSum, b: FormalSum) -> FormalSum:
    """Right half-shuffle ``a ≻ b``: the last letter of the result comes from ``b``.

    On words, ``w ≻ i = wi`` and ``w ≻ vi = (w ⧢ v) i``.
    """
    a._check(b)
    _require_nonempty(a, "left operand")
    _require_nonempty(b, "right operand")
    out: dict = {}
    for v, cv in b.items():
        head, last = v[:-1], v[-1:]
        part: dict = {}
        for u, cu in a.items():
            _shuffle_into(part, u, cu, head, cv)
        for w, c in part.items():
            key = w + last
            out[key] = out.get(key, 0) + c
    return FormalSum._raw(out, a.d)


def half_shuffle_chain(ws: Sequence[FormalSum]) -> FormalSum:
    """Left-bracketed chain ``((w1 ≻ w2) ≻ ...) ≻ wk``."""
    if not ws:
        raise ValueError("half_shuffle_chain needs at least one operand")
    for k, w in enumerate(ws):
        _require_nonempty(w, f"operand {k}")
    return reduce(half_shuffle, ws)


def shuffle_many(ws: Sequence[FormalSum], d: int | None = None) -> FormalSum:
    """Iterated shuffle ``w1 ⧢ ... ⧢ wk``; the empty list gives 𝟙 (``d`` required)."""
    if not ws:
        if d is None:
            raise ValueError("shuffle of an empty list needs the alphabet size d")
        return FormalSum.unit(d)
    return reduce(shuffle, ws)


def shuffle_power(a: FormalSum, k: int) -> FormalSum:
    """``a`` shuffled with itself ``k`` times; ``k = 0`` gives 𝟙."""
    if k < 0:
        raise ValueError("shuffle power must be non-negative")
    if k == 0:
        return FormalSum.unit(a.d)
    if k < 4:
        out = a
        for _ in range(k - 1):
            out = shuffle(out, a)
        return out
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else shuffle(result, base)
        k >>= 1
        if k:
            base = shuffle(base, base)
    return result
