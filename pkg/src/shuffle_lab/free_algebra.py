"""Words, exact-rational formal sums and the position action of permutations.

A word over the alphabet ``{1, ..., d}`` is stored as a ``bytes`` object whose
byte values are the letters; the empty word is ``b""``.  Byte order coincides
with letter order, so the canonical (length, lexicographic) ordering of words
is just ``(len(w), w)``.

Coefficients are kept as ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise.  Both are exact; keeping integers out of
``Fraction`` avoids a large constant factor in the shuffle inner loops.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

Coefficient = Union[int, Fraction]
WordLike = Union[bytes, str, Sequence[int]]

__all__ = [
    "AlphabetError",
    "FormalSum",
    "Permutation",
    "act",
    "concat",
    "first_difference",
    "format_word",
    "parse_word",
    "perm_sign",
    "permute_positions",
    "to_word",
]

MAX_LETTER = 255


class AlphabetError(ValueError):
    """Raised when formal sums over different alphabets are combined, or a
    letter falls outside the declared alphabet."""


_LETTER_RE = re.compile(r"\[(\d+)\]|(\d)")


def parse_word(text: str) -> bytes:
    """Parse ``"1223"`` or ``"1[10]2"`` into a word.  ``"()"`` is the empty word."""
    text = text.strip()
    if text in ("", "()"):
        return b""
    letters = []
    pos = 0
    for m in _LETTER_RE.finditer(text):
        if m.start() != pos:
            raise ValueError(f"malformed word {text!r}")
        letters.append(int(m.group(1) or m.group(2)))
        pos = m.end()
    if pos != len(text):
        raise ValueError(f"malformed word {text!r}")
    return to_word(letters)


def to_word(w: WordLike) -> bytes:
    if isinstance(w, bytes):
        return w
    if isinstance(w, str):
        return parse_word(w)
    letters = list(w)
    for a in letters:
        if not isinstance(a, int) or not 1 <= a <= MAX_LETTER:
            raise ValueError(f"invalid letter {a!r}")
    return bytes(letters)


def format_word(w: bytes) -> str:
    if not w:
        return "()"
    return "".join(str(a) if a < 10 else f"[{a}]" for a in w)


def _normalize(c) -> Coefficient:
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _normalize(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def _format_coefficient(c: Coefficient) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class FormalSum:
    """A finite linear combination of words with exact rational coefficients.

    Instances are immutable.  Arithmetic between sums over different alphabet
    sizes raises :class:`AlphabetError`.

    >>> s = FormalSum({"12": 1, "21": -1}, d=2)
    >>> str(s)
    '12 - 21'
    >>> s.coefficient("21")
    Fraction(-1, 1)
    """

    __slots__ = ("_terms", "_d", "_hash")

    def __init__(self, terms: Mapping[WordLike, object] | None = None, d: int = 1):
        if not isinstance(d, int) or not 1 <= d <= MAX_LETTER:
            raise ValueError(f"alphabet size must be in 1..{MAX_LETTER}, got {d!r}")
        clean: dict[bytes, Coefficient] = {}
        for w, c in (terms or {}).items():
            key = to_word(w)
            if key and max(key) > d:
                raise AlphabetError(f"word {format_word(key)} is not over the alphabet 1..{d}")
            c = _normalize(c)
            clean[key] = clean.get(key, 0) + c
        self._terms = {w: _normalize(c) for w, c in clean.items() if c != 0}
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, d: int) -> "FormalSum":
        # Trusted constructor: letters already validated, zeros possibly present.
        obj = cls.__new__(cls)
        obj._terms = {w: _normalize(c) for w, c in terms.items() if c != 0}
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, d: int) -> "FormalSum":
        return cls._raw({}, d)

    @classmethod
    def unit(cls, d: int) -> "FormalSum":
        """The empty word, written 𝟙."""
        return cls._raw({b"": 1}, d)

    @classmethod
    def word(cls, w: WordLike, d: int, coefficient=1) -> "FormalSum":
        return cls({w: coefficient}, d)

    @classmethod
    def letter(cls, i: int, d: int) -> "FormalSum":
        return cls({bytes([i]): 1}, d)

    @classmethod
    def parse(cls, text: str, d: int) -> "FormalSum":
        """Parse the text serialization, e.g. ``"12 - 21"`` or ``"1/2*12 + 1/2*21"``."""
        return cls(_parse_terms(text), d)

    @property
    def d(self) -> int:
        return self._d

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[bytes]:
        return iter(self._terms)

    def items(self) -> Iterable[Tuple[bytes, Coefficient]]:
        return self._terms.items()

    def sorted_items(self) -> list[Tuple[bytes, Coefficient]]:
        return sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))

    def coefficient(self, w: WordLike) -> Fraction:
        return Fraction(self._terms.get(to_word(w), 0))

    def degrees(self) -> set[int]:
        return {len(w) for w in self._terms}

    def max_degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def is_homogeneous(self, n: int | None = None) -> bool:
        degs = self.degrees()
        if n is None:
            return len(degs) <= 1
        return degs <= {n}

    def _check(self, other: "FormalSum") -> None:
        if not isinstance(other, FormalSum):
            raise TypeError(f"expected FormalSum, got {type(other).__name__}")
        if other._d != self._d:
            raise AlphabetError(f"alphabet mismatch: d={self._d} vs d={other._d}")

    def __add__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return FormalSum._raw(out, self._d)

    def __neg__(self) -> "FormalSum":
        return FormalSum._raw({w: -c for w, c in self._terms.items()}, self._d)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "FormalSum":
        c = _normalize(c)
        if c == 0:
            return FormalSum.zero(self._d)
        return FormalSum._raw({w: c * v for w, v in self._terms.items()}, self._d)

    def __mul__(self, c):
        # Only scalar multiplication; the algebra products are explicit functions.
        if isinstance(c, (int, Rational)) and not isinstance(c, bool):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._d == other._d and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._d, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"FormalSum({str(self)!r}, d={self._d})"

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        """Canonical text form: ``c1*w1 + c2*w2 ...``, unit coefficients omitted."""
        if not self._terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.sorted_items()):
            neg = c < 0
            mag = -c if neg else c
            body = format_word(w) if mag == 1 else f"{_format_coefficient(mag)}*{format_word(w)}"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"{'-' if neg else '+'} {body}")
        return " ".join(parts)

    def to_json_obj(self) -> list[dict]:
        out = []
        for w, c in self.sorted_items():
            f = Fraction(c)
            out.append({"word": list(w), "num": str(f.numerator), "den": str(f.denominator)})
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: list[dict], d: int) -> "FormalSum":
        terms: dict[bytes, Coefficient] = {}
        for t in obj:
            w = to_word(t["word"])
            terms[w] = terms.get(w, 0) + Fraction(int(t["num"]), int(t["den"]))
        return cls(terms, d)

    @classmethod
    def from_json(cls, text: str, d: int) -> "FormalSum":
        return cls.from_json_obj(json.loads(text), d)


_TERM_RE = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(\(\)|(?:\[\d+\]|\d)+)\s*"
)


def _parse_terms(text: str) -> dict[bytes, Fraction]:
    text = text.replace("−", "-").replace("𝟙", "()").strip()
    if text == "0":
        return {}
    terms: dict[bytes, Fraction] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos or (not first and m.group(1) is None):
            raise ValueError(f"malformed formal sum {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        w = parse_word(m.group(3))
        terms[w] = terms.get(w, 0) + sign * coeff
        pos = m.end()
        first = False
    if first:
        raise ValueError(f"malformed formal sum {text!r}")
    return terms


def concat(a: FormalSum, b: FormalSum) -> FormalSum:
    """Concatenation product, extended bilinearly."""
    a._check(b)
    out: dict[bytes, Coefficient] = {}
    for u, cu in a.items():
        for v, cv in b.items():
            w = u + v
            out[w] = out.get(w, 0) + cu * cv
    return FormalSum._raw(out, a.d)


def first_difference(a: FormalSum, b: FormalSum):
    """Return ``(word, coeff_a, coeff_b)`` for the smallest word (canonical
    order) on which ``a`` and ``b`` differ, or ``None`` if they are equal."""
    a._check(b)
    diff = [w for w in set(a) | set(b) if a.coefficient(w) != b.coefficient(w)]
    if not diff:
        return None
    w = min(diff, key=lambda x: (len(x), x))
    return w, a.coefficient(w), b.coefficient(w)


class Permutation:
    """A permutation of ``{1, ..., n}`` in one-line notation.

    Composition follows function composition: ``(s * t)(i) == s(t(i))``.
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(1, n + 1))
        for cyc in cycles:
            for k, a in enumerate(cyc):
                img[a - 1] = cyc[(k + 1) % len(cyc)]
        return cls(img)

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        return cls.from_cycles(n, (i, j))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other) != len(self):
            raise ValueError("cannot compose permutations of different degree")
        return Permutation(self.images[t - 1] for t in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, s in enumerate(self.images, start=1):
            inv[s - 1] = i
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, len(self) + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        # Each cycle of length L contributes L - 1 transpositions.
        parity = sum(len(c) - 1 for c in self.cycles()) % 2
        return -1 if parity else 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return f"Permutation.identity({len(self)})"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


def perm_sign(p: Sequence[int]) -> int:
    """Sign of a 0-based one-line permutation."""
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permute_positions(sigma: Permutation, w: WordLike) -> bytes:
    """Move the letter at position ``l`` to position ``sigma(l)``.

    This is a left action: ``permute_positions(s * t, w) ==
    permute_positions(s, permute_positions(t, w))``.
    """
    w = to_word(w)
    if len(sigma) != len(w):
        raise ValueError(f"permutation of degree {len(sigma)} cannot act on a word of length {len(w)}")
    out = bytearray(len(w))
    for pos, target in enumerate(sigma.images):
        out[target - 1] = w[pos]
    return bytes(out)


def act(sigma: Permutation, s: FormalSum) -> FormalSum:
    """Linear extension of :func:`permute_positions`; ``s`` must be homogeneous
    of degree ``len(sigma)``."""
    out: dict[bytes, Coefficient] = {}
    for w, c in s.items():
        v = permute_positions(sigma, w)
        out[v] = out.get(v, 0) + c
    return FormalSum._raw(out, s.d)
