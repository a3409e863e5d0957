"""Piecewise-linear paths and their truncated iterated-integral signatures.

Level ``n`` of a signature is stored densely as an ``n``-dimensional numpy
array of shape ``(d,) * n``; the entry at index ``(w1-1, ..., wn-1)`` is the
iterated integral of the word ``w1...wn``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .free_algebra import FormalSum, WordLike, to_word
from .invariants import inv, t_one

__all__ = [
    "CGMReport",
    "PLPath",
    "TruncatedSignature",
    "chen_concat",
    "pair",
    "path_signature",
    "random_path",
    "segment_signature",
    "verify_cgm",
]

REL_TOL = 1e-9
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class PLPath:
    """Piecewise-linear path through ``points`` (shape ``(m, d)``, ``m >= 2``)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] < 1:
            raise ValueError("a path needs at least two points of a common dimension d >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("path coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def increments(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    @classmethod
    def from_increments(cls, increments: Sequence[Sequence[float]], start=None) -> "PLPath":
        inc = np.asarray(increments, dtype=float)
        origin = np.zeros(inc.shape[1]) if start is None else np.asarray(start, dtype=float)
        return cls(np.vstack([origin, origin + np.cumsum(inc, axis=0)]))

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase) -> "PLPath":
        """Read one point per row; a non-numeric first row is treated as a header."""
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls._from_rows(list(csv.reader(fh)))
        return cls._from_rows(list(csv.reader(source)))

    @classmethod
    def _from_rows(cls, rows: list[list[str]]) -> "PLPath":
        rows = [r for r in rows if r and any(c.strip() for c in r)]
        if rows and not _is_numeric_row(rows[0]):
            rows = rows[1:]
        if not rows:
            raise ValueError("CSV contains no points")
        width = len(rows[0])
        points = []
        for lineno, r in enumerate(rows, start=1):
            if len(r) != width:
                raise ValueError(f"ragged CSV: row {lineno} has {len(r)} columns, expected {width}")
            try:
                points.append([float(c) for c in r])
            except ValueError:
                raise ValueError(f"non-numeric cell in CSV row {lineno}: {r}") from None
        return cls(np.array(points))


def _is_numeric_row(row: list[str]) -> bool:
    try:
        [float(c) for c in row]
    except ValueError:
        return False
    return True


def random_path(d: int, segments: int, rng: np.random.Generator) -> PLPath:
    """Path from the origin with increments uniform in ``[-1, 1]^d``."""
    return PLPath.from_increments(rng.uniform(-1.0, 1.0, size=(segments, d)))


@dataclass(frozen=True)
class TruncatedSignature:
    d: int
    levels: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def level(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, w: WordLike) -> float:
        w = to_word(w)
        if len(w) > self.level:
            raise ValueError(f"word of length {len(w)} exceeds truncation level {self.level}")
        if w and max(w) > self.d:
            raise ValueError(f"letter outside the alphabet 1..{self.d}")
        return float(self.levels[len(w)][tuple(a - 1 for a in w)])

    def level2_matrix(self) -> np.ndarray:
        if self.level < 2:
            raise ValueError("signature truncated below level 2")
        return np.array(self.levels[2])

    def items(self) -> Iterable[tuple[tuple[int, ...], float]]:
        """All ``(word, value)`` pairs in canonical (length, lexicographic) order."""
        for n, arr in enumerate(self.levels):
            for idx in np.ndindex(*arr.shape):
                yield tuple(i + 1 for i in idx), float(arr[idx])


def segment_signature(increment: Sequence[float], level: int) -> TruncatedSignature:
    """Signature of a straight segment: level ``n`` is ``increment^{⊗n} / n!``."""
    if level < 0:
        raise ValueError("truncation level must be non-negative")
    delta = np.asarray(increment, dtype=float)
    levels = [np.array(1.0)]
    for n in range(1, level + 1):
        levels.append(np.multiply.outer(levels[-1], delta) / n)
    return TruncatedSignature(delta.shape[0], tuple(levels))


def chen_concat(s1: TruncatedSignature, s2: TruncatedSignature) -> TruncatedSignature:
    """Signature of the concatenated path: level ``n`` is
    ``sum_k s1[k] ⊗ s2[n-k]``."""
    if s1.d != s2.d or s1.level != s2.level:
        raise ValueError("signatures must share dimension and truncation level")
    levels = []
    for n in range(s1.level + 1):
        acc = np.zeros((s1.d,) * n)
        for k in range(n + 1):
            acc = acc + np.multiply.outer(s1.levels[k], s2.levels[n - k])
        levels.append(acc)
    return TruncatedSignature(s1.d, tuple(levels))


def path_signature(path: PLPath, level: int) -> TruncatedSignature:
    sig = None
    for inc in path.increments():
        seg = segment_signature(inc, level)
        sig = seg if sig is None else chen_concat(sig, seg)
    return sig


def pair(s: FormalSum, sig: TruncatedSignature) -> float:
    """Linear pairing ``<s, sig>``."""
    if s.d > sig.d:
        raise ValueError(f"formal sum over d={s.d} cannot be paired with a {sig.d}-dimensional signature")
    if s.max_degree() > sig.level:
        raise ValueError(f"degree {s.max_degree()} exceeds truncation level {sig.level}")
    return math.fsum(float(c) * float(sig.levels[len(w)][tuple(a - 1 for a in w)]) for w, c in s.items())


@dataclass(frozen=True)
class CGMReport:
    d: int
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    nonnegative: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def verify_cgm(path: PLPath, tol: float = REL_TOL, abs_floor: float = ABS_FLOOR) -> CGMReport:
    """Compare the determinant of the level-2 signature matrix with
    ``2^-d <inv(t_{1,d}), sig>^2``."""
    d = path.d
    sig = path_signature(path, max(d, 2))
    lhs = float(np.linalg.det(sig.level2_matrix()))
    rhs = pair(inv(t_one(d)), sig) ** 2 / 2**d
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 0 else 0.0
    passed = abs_err <= max(tol * scale, abs_floor)
    return CGMReport(d, lhs, rhs, abs_err, rel_err, tol, passed, lhs >= -max(tol * scale, abs_floor))
