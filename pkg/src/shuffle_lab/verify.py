"""Verification drivers for the identities exposed by the ``verify`` command.

Each driver returns a :class:`Report`.  Argument combinations that make no
sense (wrong parity, unsupported ``d``) raise :class:`UsageError`.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .free_algebra import FormalSum, first_difference, format_word
from .invariants import check_sign_equivariance, h_generators, inv, t_one, t_two
from .matrices import (
    RATIONALS,
    AlgMatrix,
    andreief_rhs,
    anti_part,
    block_concat_form,
    build_W,
    build_Z,
    det,
    det_skew_plus_rank1,
    letter_vector,
    pfaffian,
    pfaffian_by_permutations,
    sym_part,
)
from .shuffle import half_shuffle_chain, shuffle, shuffle_many, shuffle_power
from .signatures import random_path, verify_cgm

__all__ = ["IDENTITIES", "Report", "UsageError", "run"]

SHOW_TERMS = 64
SLOW_FROM = 5


class UsageError(ValueError):
    pass


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class Report:
    identity: str
    d: int
    checks: list[Check] = field(default_factory=list)
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **detail) -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return passed

    def compare(self, name: str, lhs: FormalSum, rhs: FormalSum) -> bool:
        diff = first_difference(lhs, rhs)
        right = describe(rhs)
        if diff is None:
            right.pop("expansion", None)
        ok = self.add(name, diff is None, lhs=describe(lhs), rhs=right)
        if diff is not None and self.counterexample is None:
            w, a, b = diff
            self.counterexample = {"check": name, "word": format_word(w), "lhs": str(a), "rhs": str(b)}
        return ok

    def as_dict(self) -> dict:
        return {
            "identity": self.identity,
            "d": self.d,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "counterexample": self.counterexample,
        }

    def to_text(self) -> str:
        lines = [f"identity: {self.identity}  d={self.d}  -> {'VERIFIED' if self.passed else 'FAILED'}"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}")
            for k, v in c.detail.items():
                if isinstance(v, dict):
                    inner = ", ".join(f"{a}={b}" for a, b in v.items() if a != "expansion")
                    lines.append(f"      {k}: {inner}")
                    if "expansion" in v:
                        lines.append(f"        = {v['expansion']}")
                else:
                    lines.append(f"      {k}: {v}")
        if self.counterexample:
            ce = self.counterexample
            lines.append(f"  counterexample ({ce['check']}): word {ce['word']}: lhs {ce['lhs']} != rhs {ce['rhs']}")
        return "\n".join(lines)


def describe(s: FormalSum) -> dict:
    text = s.to_text()
    out: dict[str, Any] = {"terms": len(s), "sha256": hashlib.sha256(text.encode()).hexdigest()[:16]}
    if len(s) <= SHOW_TERMS:
        out["expansion"] = text
    return out


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _require_range(d: int, lo: int, hi: int, slow: bool) -> None:
    _require(lo <= d <= hi, f"d must be in {lo}..{hi} for this identity")
    _require(d < SLOW_FROM or slow, f"d={d} is expensive; pass --slow to run it")


def verify_main(d: int, slow: bool = False, **_) -> Report:
    _require_range(d, 1, 5, slow)
    rep = Report("main", d)
    lhs = det(build_W(d))
    rep.compare("det_sh(W_d) = block concatenation form", lhs, block_concat_form(d))
    rep.compare("det_sh(W_d) = inv(t_2,d)", lhs, inv(t_two(d)))
    rep.compare("det_sh(W_d) = 2^-d inv(t_1,d)^sh2", lhs, shuffle_power(inv(t_one(d)), 2).scale(Fraction(1, 2**d)))
    return rep


def verify_andreief(d: int, slow: bool = False, **_) -> Report:
    _require_range(d, 1, 4, slow)
    rep = Report("andreief", d)
    rep.compare("det_sh(W_d) = signed half-shuffle chains", det(build_W(d)), andreief_rhs(d))
    return rep


def _words(d: int, max_len: int) -> list[FormalSum]:
    out = []
    for n in range(1, max_len + 1):
        for letters in itertools.product(range(1, d + 1), repeat=n):
            out.append(FormalSum._raw({bytes(letters): 1}, d))
    return out


def _chain_expansion(ws: list[FormalSum]) -> tuple[FormalSum, FormalSum]:
    lhs = shuffle_many(ws)
    rhs = FormalSum.zero(ws[0].d)
    for order in itertools.permutations(ws):
        rhs = rhs + half_shuffle_chain(order)
    return lhs, rhs


def verify_halfshuffle_expansion(d: int, seed: int = 0, cases: int = 200, slow: bool = False, **_) -> Report:
    _require(1 <= d <= 4, "d must be in 1..4 for this identity")
    rep = Report("halfshuffle-expansion", d)
    words = _words(d, 2)
    tested = 0
    for k in (1, 2, 3):
        for tup in itertools.product(words, repeat=k):
            lhs, rhs = _chain_expansion(list(tup))
            tested += 1
            if lhs != rhs:
                rep.compare(f"exhaustive k={k}", lhs, rhs)
                return rep
    rep.add("exhaustive k<=3, word length<=2", True, tuples=tested)
    rng = random.Random(seed)
    for i in range(cases):
        ws = [
            FormalSum._raw({bytes(rng.randint(1, d) for _ in range(rng.randint(1, 3))): 1}, d)
            for _ in range(4)
        ]
        lhs, rhs = _chain_expansion(ws)
        if lhs != rhs:
            rep.compare(f"random k=4 case {i}", lhs, rhs)
            return rep
    rep.add("random k=4", True, cases=cases, seed=seed)
    return rep


def verify_h_action(d: int, slow: bool = False, **_) -> Report:
    _require_range(d, 2, 5, slow)
    rep = Report("h-action", d)
    h = h_generators(d)
    gens = [repr(g) for g in h.generators]
    rep.add("h * inv(t_2,d) = sign(h) inv(t_2,d)", check_sign_equivariance(inv(t_two(d)), h), generators=gens)
    sq = shuffle_power(inv(t_one(d)), 2)
    rep.add("h * inv(t_1,d)^sh2 = sign(h) inv(t_1,d)^sh2", check_sign_equivariance(sq, h), generators=gens)
    return rep


def verify_debruijn_even(d: int, slow: bool = False, **_) -> Report:
    _require(d % 2 == 0, "de Bruijn even case needs even d")
    _require_range(d, 2, 6, slow)
    rep = Report("debruijn-even", d)
    pf = pfaffian(anti_part(build_W(d)))
    rep.compare("inv(t_1,d) = 2^(d/2) Pf_sh(Anti[W_d])", inv(t_one(d)), pf.scale(2 ** (d // 2)))
    return rep


def verify_debruijn_odd(d: int, slow: bool = False, **_) -> Report:
    _require(d % 2 == 1, "de Bruijn odd case needs odd d")
    _require_range(d, 1, 5, slow)
    rep = Report("debruijn-odd", d)
    rep.compare("inv(t_1,d) = Pf_sh(Z_d)", inv(t_one(d)), pfaffian(build_Z(d)))
    return rep


def random_skew(n: int, rng: random.Random, bound: int = 9) -> AlgMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = Fraction(rng.randint(-bound, bound), rng.randint(1, 4))
            rows[i][j], rows[j][i] = x, -x
    return AlgMatrix(rows, RATIONALS)


def verify_det_pf(d: int, seed: int = 0, cases: int = 50, slow: bool = False, **_) -> Report:
    _require_range(d, 1, 5, slow)
    rep = Report("det-pf", d)
    rng = random.Random(seed)
    for n in (2, 4, 6):
        ok = True
        for _ in range(cases):
            a = random_skew(n, rng)
            pf = pfaffian(a)
            ok &= pf == pfaffian_by_permutations(a) and det(a) == pf * pf
        rep.add(f"rational skew {n}x{n}: Pf matches oracle, det = Pf^2", ok, cases=cases, seed=seed)
    m = anti_part(build_W(d)) if d % 2 == 0 else build_Z(d)
    label = "Anti[W_d]" if d % 2 == 0 else "Z_d"
    pf = pfaffian(m)
    rep.compare(f"Pf_sh({label}): matchings = normalized permutation sum", pf, pfaffian_by_permutations(m))
    rep.compare(f"det_sh({label}) = Pf_sh({label})^sh2", det(m), shuffle(pf, pf))
    return rep


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def verify_det_skew_rank1(d: int, seed: int = 0, cases: int = 50, slow: bool = False, **_) -> Report:
    _require(1 <= d <= 6, "d must be in 1..6 for this identity")
    rep = Report("det-skew-rank1", d)
    rng = random.Random(seed)
    ok = True
    for _ in range(cases):
        a = random_skew(d, rng)
        v = [_random_rational(rng) for _ in range(d)]
        ok &= det_skew_plus_rank1(a, v, _random_rational(rng)).agree
    rep.add(f"rational skew {d}x{d} + lambda v v^T", ok, cases=cases, seed=seed)
    if d <= 4:
        anti = anti_part(build_W(d))
        half = FormalSum.unit(d).scale(Fraction(1, 2))
        chk = det_skew_plus_rank1(anti, letter_vector(d), half)
        rep.compare("det_sh(W_d) = det_sh(Anti[W_d] + 1/2 v sh v^T)", det(build_W(d)), chk.direct)
        rep.compare(f"shuffle ring, {chk.branch} branch", chk.direct, chk.via_minors)
    return rep


def verify_sym_w(d: int, slow: bool = False, **_) -> Report:
    _require_range(d, 1, 9, slow)
    rep = Report("sym-w", d)
    sym = sym_part(build_W(d))
    letters = letter_vector(d)
    ok = all(
        sym[i, j] == shuffle(letters[i], letters[j]).scale(Fraction(1, 2))
        for i in range(d)
        for j in range(d)
    )
    rep.add("Sym[W_d][i][j] = 1/2 (i sh j)", ok)
    return rep


def verify_cgm_suite(d: int, seed: int = 0, paths: int = 100, tol: float = 1e-9, segments: int = 6, **_) -> Report:
    _require(1 <= d <= 6, "d must be in 1..6 for this identity")
    rep = Report("cgm", d)
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = 0
    negative = 0
    for _ in range(paths):
        r = verify_cgm(random_path(d, segments, rng), tol=tol)
        worst = max(worst, r.rel_err)
        failures += not r.passed
        negative += not r.nonnegative
    rep.add(
        "det(level-2 signature) = 2^-d <inv(t_1,d), sig>^2",
        failures == 0,
        paths=paths,
        segments=segments,
        seed=seed,
        tol=tol,
        max_rel_err=f"{worst:.3e}",
        failures=failures,
    )
    rep.add("det(level-2 signature) >= -tol", negative == 0, violations=negative)
    return rep


IDENTITIES: dict[str, Callable[..., Report]] = {
    "main": verify_main,
    "andreief": verify_andreief,
    "halfshuffle-expansion": verify_halfshuffle_expansion,
    "h-action": verify_h_action,
    "debruijn-even": verify_debruijn_even,
    "debruijn-odd": verify_debruijn_odd,
    "det-pf": verify_det_pf,
    "det-skew-rank1": verify_det_skew_rank1,
    "sym-w": verify_sym_w,
    "cgm": verify_cgm_suite,
}


def run(identity: str, d: int, **options) -> Report:
    if identity not in IDENTITIES:
        raise UsageError(f"unknown identity {identity!r}")
    return IDENTITIES[identity](d, **options)
