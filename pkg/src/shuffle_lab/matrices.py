"""Square matrices over a commutative ring: Leibniz determinant, Pfaffians,
symmetric/antisymmetric parts, and the shuffle-algebra matrices ``W_d``, ``Z_d``.

Matrix code is written once against :class:`Ring`.  Two rings are provided:
:data:`RATIONALS` (``Fraction`` entries, ordinary product) and
:func:`shuffle_ring` (``FormalSum`` entries, shuffle product).  Ring elements
must support ``+``, unary ``-``, ``-`` and multiplication by a ``Fraction``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import permutations
from operator import mul
from typing import Any, Callable, Iterator, Sequence

from .free_algebra import FormalSum, perm_sign
from .shuffle import half_shuffle_chain, shuffle

__all__ = [
    "AlgMatrix",
    "RATIONALS",
    "Rank1Check",
    "Ring",
    "andreief_rhs",
    "anti_part",
    "block_concat_form",
    "build_W",
    "build_Z",
    "det",
    "det_skew_plus_rank1",
    "letter_vector",
    "perfect_matchings",
    "pfaffian",
    "pfaffian_by_permutations",
    "shuffle_ring",
    "sym_part",
]

THREADS_ENV = "SHUFFLE_LAB_THREADS"


@dataclass(frozen=True)
class Ring:
    name: str
    zero: Any
    one: Any
    mul: Callable[[Any, Any], Any]


RATIONALS = Ring("QQ", Fraction(0), Fraction(1), mul)


@lru_cache(maxsize=None)
def shuffle_ring(d: int) -> Ring:
    """Formal sums over ``{1..d}`` with the shuffle product."""
    return Ring(f"Sh({d})", FormalSum.zero(d), FormalSum.unit(d), shuffle)


class AlgMatrix:
    """Immutable square matrix with entries in ``ring``."""

    __slots__ = ("rows", "ring")

    def __init__(self, rows: Sequence[Sequence[Any]], ring: Ring):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows
        self.ring = ring

    @classmethod
    def rational(cls, rows: Sequence[Sequence[Any]]) -> "AlgMatrix":
        return cls([[Fraction(x) for x in r] for r in rows], RATIONALS)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "AlgMatrix":
        return AlgMatrix(list(zip(*self.rows)), self.ring)

    def map(self, f: Callable[[Any], Any]) -> "AlgMatrix":
        return AlgMatrix([[f(x) for x in r] for r in self.rows], self.ring)

    def __add__(self, other: "AlgMatrix") -> "AlgMatrix":
        self._check(other)
        return AlgMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring
        )

    def __sub__(self, other: "AlgMatrix") -> "AlgMatrix":
        self._check(other)
        return AlgMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring
        )

    def scale(self, c) -> "AlgMatrix":
        c = Fraction(c)
        return self.map(lambda x: x * c)

    def _check(self, other: "AlgMatrix") -> None:
        if other.n != self.n:
            raise ValueError("matrix size mismatch")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring.name} vs {other.ring.name}")

    def is_skew(self) -> bool:
        return all(
            self.rows[i][j] == -self.rows[j][i] for i in range(self.n) for j in range(i, self.n)
        )

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"AlgMatrix[{self.ring.name}]({body})"


def sym_part(m: AlgMatrix) -> AlgMatrix:
    return (m + m.transpose()).scale(Fraction(1, 2))


def anti_part(m: AlgMatrix) -> AlgMatrix:
    return (m - m.transpose()).scale(Fraction(1, 2))


@lru_cache(maxsize=None)
def _signed_permutations(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple((p, perm_sign(p)) for p in permutations(range(n)))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _leibniz_chunk(rows, ring: Ring, perms) -> Any:
    total = ring.zero
    for p, sign in perms:
        factors = [rows[i][j] for i, j in enumerate(p)]
        if any(not f for f in factors):
            continue
        term = reduce(ring.mul, factors)
        total = total + term if sign > 0 else total - term
    return total


def det(m: AlgMatrix) -> Any:
    """Leibniz determinant ``sum_sigma sign(sigma) prod_i m[i, sigma(i)]``.

    The sum over permutations is split across worker processes when the
    ``SHUFFLE_LAB_THREADS`` environment variable is greater than one.
    """
    ring = m.ring
    if m.n == 0:
        return ring.one
    perms = _signed_permutations(m.n)
    workers = min(_workers(), len(perms))
    if workers <= 1 or m.n < 5:
        return _leibniz_chunk(m.rows, ring, perms)
    chunks = [perms[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_leibniz_chunk, [m.rows] * workers, [ring] * workers, chunks))
    # Fixed chunk order; exact arithmetic makes the result order-independent anyway.
    return reduce(lambda a, b: a + b, parts)


def perfect_matchings(points: Sequence[int]) -> Iterator[tuple[int, list[tuple[int, int]]]]:
    """Yield ``(sign, pairs)`` for every perfect matching of ``points``.

    The sign is that of the permutation ``i1 j1 i2 j2 ...`` listing the pairs
    with ``i_k < j_k`` and ``i_1 < i_2 < ...``.
    """
    if not points:
        yield 1, []
        return
    first, rest = points[0], points[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        sign = -1 if k % 2 else 1
        for s, pairs in perfect_matchings(remaining):
            yield sign * s, [(first, partner)] + pairs


def _check_skew_even(m: AlgMatrix) -> None:
    if m.n % 2:
        raise ValueError("Pfaffian needs an even-dimensional matrix")
    if not m.is_skew():
        raise ValueError("Pfaffian needs a skew-symmetric matrix")


def pfaffian(m: AlgMatrix) -> Any:
    """Pfaffian as a signed sum over perfect matchings, ``(n-1)!!`` terms."""
    _check_skew_even(m)
    ring = m.ring
    total = ring.zero
    for sign, pairs in perfect_matchings(tuple(range(m.n))):
        factors = [m.rows[i][j] for i, j in pairs]
        if any(not f for f in factors):
            continue
        term = reduce(ring.mul, factors, ring.one)
        total = total + term if sign > 0 else total - term
    return total


def pfaffian_by_permutations(m: AlgMatrix) -> Any:
    """Pfaffian as the normalized sum over all of ``S_n``:
    ``1/(2^k k!) sum_pi sign(pi) prod_i a[pi(2i-1), pi(2i)]`` with ``n = 2k``.
    """
    _check_skew_even(m)
    ring = m.ring
    k = m.n // 2
    total = ring.zero
    for p, sign in _signed_permutations(m.n):
        factors = [m.rows[p[2 * i]][p[2 * i + 1]] for i in range(k)]
        if any(not f for f in factors):
            continue
        term = reduce(ring.mul, factors, ring.one)
        total = total + term if sign > 0 else total - term
    return total * Fraction(1, 2**k * math.factorial(k))


@dataclass(frozen=True)
class Rank1Check:
    """Both sides of ``det(A + lambda v v^T)`` for skew ``A``."""

    direct: Any
    via_minors: Any
    branch: str

    @property
    def agree(self) -> bool:
        return self.direct == self.via_minors


def _outer(v: Sequence[Any], lam: Any, ring: Ring) -> list[list[Any]]:
    return [[ring.mul(lam, ring.mul(a, b)) for b in v] for a in v]


def _replace_row(m: AlgMatrix, i: int, row: Sequence[Any]) -> AlgMatrix:
    rows = list(m.rows)
    rows[i] = tuple(row)
    return AlgMatrix(rows, m.ring)


def det_skew_plus_rank1(a: AlgMatrix, v: Sequence[Any], lam: Any, columns: bool = False) -> Rank1Check:
    """``det(A + lam v v^T)`` computed directly and via the skew + rank-one rule.

    Even size: the determinant equals ``det(A)``.  Odd size: it equals
    ``sum_i det(R_i)`` where ``R_i`` is ``A`` with row ``i`` replaced by row
    ``i`` of ``lam v v^T`` (column ``i`` if ``columns`` is set).
    """
    if not a.is_skew():
        raise ValueError("A must be skew-symmetric")
    if len(v) != a.n:
        raise ValueError("vector length does not match the matrix size")
    ring = a.ring
    outer = AlgMatrix(_outer(v, lam, ring), ring)
    direct = det(a + outer)
    if a.n % 2 == 0:
        return Rank1Check(direct, det(a), "even")
    src = outer.transpose() if columns else outer
    base = a.transpose() if columns else a
    total = ring.zero
    for i in range(a.n):
        total = total + det(_replace_row(base, i, src.rows[i]))
    return Rank1Check(direct, total, "odd-columns" if columns else "odd-rows")


def letter_vector(d: int) -> list[FormalSum]:
    return [FormalSum.letter(i, d) for i in range(1, d + 1)]


def build_W(d: int) -> AlgMatrix:
    """The ``d x d`` matrix over the shuffle algebra with entry ``(i, j)`` the word ``ij``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return AlgMatrix(
        [[FormalSum._raw({bytes([i, j]): 1}, d) for j in range(1, d + 1)] for i in range(1, d + 1)],
        shuffle_ring(d),
    )


def build_Z(d: int) -> AlgMatrix:
    """``2 Anti[W_d]`` bordered by the column of letters and the row of negated letters."""
    if d < 1 or d % 2 == 0:
        raise ValueError("Z_d is defined for odd d")
    ring = shuffle_ring(d)
    body = anti_part(build_W(d)).scale(2)
    letters = letter_vector(d)
    rows = [list(r) + [letters[i]] for i, r in enumerate(body.rows)]
    rows.append([-x for x in letters] + [ring.zero])
    return AlgMatrix(rows, ring)


def andreief_rhs(d: int) -> FormalSum:
    """``sum_{sigma,tau} sign(sigma) sign(tau) [s1 t1 ≻ s2 t2 ≻ ... ≻ sd td]``
    with ``si = sigma(i)``, ``ti = tau(i)`` and left-bracketed half-shuffles."""
    if d < 1:
        raise ValueError("d must be at least 1")
    total = FormalSum.zero(d)
    perms = _signed_permutations(d)
    for s, ss in perms:
        for t, st in perms:
            blocks = [FormalSum._raw({bytes([s[i] + 1, t[i] + 1]): 1}, d) for i in range(d)]
            total = total + half_shuffle_chain(blocks).scale(ss * st)
    return total


def block_concat_form(d: int) -> FormalSum:
    """``sum_sigma sign(sigma) sum_tau prod_i tau(i) sigma(tau(i))`` with the
    concatenation product: signed concatenations of the two-letter blocks
    ``i sigma(i)`` in every order."""
    if d < 1:
        raise ValueError("d must be at least 1")
    out: dict[bytes, int] = {}
    perms = _signed_permutations(d)
    for s, ss in perms:
        for t, _ in perms:
            w = b"".join(bytes([t[i] + 1, s[t[i]] + 1]) for i in range(d))
            out[w] = out.get(w, 0) + ss
    return FormalSum._raw(out, d)
