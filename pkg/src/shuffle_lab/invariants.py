"""Rectangular standard Young tableaux and the invariants ``inv(T)``.

``inv(T)`` is the signed sum, over the column stabilizer of ``T``, of the
row-reading word of ``T`` acted on by position permutation.  The column
stabilizer is the product of the symmetric groups on the entry sets of the
columns, so it does not matter which convention is used for the position
action here; it does matter for the sign-equivariance checks against the
subgroup ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Sequence

from .free_algebra import FormalSum, Permutation, act, perm_sign

__all__ = [
    "SubgroupH",
    "Tableau",
    "check_sign_equivariance",
    "column_stabilizer",
    "h_generators",
    "inv",
    "row_word",
    "t_one",
    "t_two",
]


@dataclass(frozen=True)
class Tableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise ValueError("tableau must have at least one box")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("only rectangular tableaux are supported")
        entries = sorted(x for r in rows for x in r)
        if entries != list(range(1, len(entries) + 1)):
            raise ValueError("tableau entries must be exactly 1..n")
        for r in rows:
            if any(a >= b for a, b in zip(r, r[1:])):
                raise ValueError(f"row {r} is not strictly increasing")
        for c in range(width):
            col = [r[c] for r in rows]
            if any(a >= b for a, b in zip(col, col[1:])):
                raise ValueError(f"column {c + 1} is not strictly increasing")

    @classmethod
    def parse(cls, text: str) -> "Tableau":
        """Parse ``"1,2;3,4"`` (rows separated by ``;``, entries by ``,``)."""
        try:
            rows = [tuple(int(x) for x in row.split(",")) for row in text.strip().split(";")]
        except ValueError:
            raise ValueError(f"malformed tableau {text!r}") from None
        return cls(tuple(rows))

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def size(self) -> int:
        return self.height * self.width

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[c] for r in self.rows) for c in range(self.width)]

    def __str__(self) -> str:
        return ";".join(",".join(map(str, r)) for r in self.rows)


def t_one(d: int) -> Tableau:
    """The single column ``1, 2, ..., d``."""
    return Tableau(tuple((i,) for i in range(1, d + 1)))


def t_two(d: int) -> Tableau:
    """The ``d x 2`` tableau with rows ``(1,2), (3,4), ..., (2d-1,2d)``."""
    return Tableau(tuple((2 * i - 1, 2 * i) for i in range(1, d + 1)))


def row_word(t: Tableau) -> bytes:
    """Letter ``i`` at position ``l`` iff ``l`` lies in row ``i`` of ``t``."""
    out = bytearray(t.size)
    for i, row in enumerate(t.rows, start=1):
        for entry in row:
            out[entry - 1] = i
    return bytes(out)


def column_stabilizer(t: Tableau) -> Iterable[tuple[Permutation, int]]:
    """Yield ``(sigma, sign(sigma))`` for every permutation mapping each
    column's entry set to itself."""
    cols = t.columns()
    n = t.size
    choices = [list(permutations(range(len(c)))) for c in cols]
    for pick in product(*choices):
        images = list(range(1, n + 1))
        sign = 1
        for col, p in zip(cols, pick):
            for k, target in enumerate(p):
                images[col[k] - 1] = col[target]
            sign *= perm_sign(p)
        yield Permutation(images), sign


def inv(t: Tableau) -> FormalSum:
    """Invariant basis element attached to the rectangular tableau ``t``.

    >>> str(inv(Tableau.parse("1,2;3,4")))
    '1122 - 1221 - 2112 + 2211'
    """
    d = t.height
    base = FormalSum._raw({row_word(t): 1}, d)
    out: dict = {}
    for sigma, sign in column_stabilizer(t):
        for w, c in act(sigma, base).items():
            out[w] = out.get(w, 0) + sign * c
    return FormalSum._raw(out, d)


@dataclass(frozen=True)
class SubgroupH:
    """Subgroup of ``S_{2d}`` generated by ``(1,3), (3,5), ..., (2,4), (4,6), ...``."""

    d: int
    generators: tuple[Permutation, ...]

    @property
    def degree(self) -> int:
        return 2 * self.d


def h_generators(d: int) -> SubgroupH:
    if d < 2:
        raise ValueError("H is only defined for d >= 2")
    n = 2 * d
    odd = [Permutation.transposition(n, i, i + 2) for i in range(1, n - 2, 2)]
    even = [Permutation.transposition(n, i, i + 2) for i in range(2, n - 1, 2)]
    return SubgroupH(d, tuple(odd + even))


def _words_in_generators(gens: Sequence[Permutation], max_length: int):
    n = len(gens[0])
    frontier = {Permutation.identity(n)}
    seen = set(frontier)
    for _ in range(max_length):
        nxt = set()
        for p in frontier:
            for g in gens:
                q = g * p
                if q not in seen:
                    seen.add(q)
                    nxt.add(q)
        frontier = nxt
    return seen


def check_sign_equivariance(
    s: FormalSum, h: SubgroupH, exhaustive: bool = False, max_length: int = 4
) -> bool:
    """True iff ``act(g, s) == sign(g) * s`` for every generator ``g`` of ``h``.

    With ``exhaustive=True`` every element of ``h`` expressible as a product of
    at most ``max_length`` generators is checked instead.
    """
    if not s.is_homogeneous(h.degree):
        raise ValueError(f"expected a homogeneous element of degree {h.degree}")
    elements = _words_in_generators(h.generators, max_length) if exhaustive else h.generators
    return all(act(g, s) == s.scale(g.sign()) for g in elements)
