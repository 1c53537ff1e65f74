"""Product measures on the space of 0-1 sequences.

Exact computation with the coordinate-wise product measure induced by a
probability sequence: cylinder probabilities, truncated summable-level
covers and their masses, translation by finite-support points with the
associated mass-ratio bound, tail closure under all such translations,
hit counting, the Hellinger-series dichotomy between two product measures,
empirical coordinate densities, and extension-witness sums over an edge
schedule.

All masses and products accumulate through prod01 (log space past 40
factors); comparisons elsewhere use relative tolerance 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from ._num import prod01
from .probseq import (Constant, GeometricToZero, Interleave, InverseLog,
                      OneMinus, Opaque, ProbSeq, Table)


@dataclass(frozen=True)
class CylinderConstraint:
    """Finite assignment of bits to coordinates."""

    assignments: tuple  # sorted (coordinate, bit) pairs

    def __post_init__(self):
        coords = [c for c, _ in self.assignments]
        if len(coords) != len(set(coords)):
            raise ValueError("a coordinate may be assigned only once")
        if list(self.assignments) != sorted(self.assignments):
            raise ValueError("assignments must be sorted by coordinate")
        for c, bit in self.assignments:
            if c < 0 or bit not in (0, 1):
                raise ValueError(f"invalid assignment ({c},{bit})")

    @classmethod
    def of(cls, mapping: dict) -> "CylinderConstraint":
        return cls(tuple(sorted(mapping.items())))


def cylinder_prob(seq: ProbSeq, constraint: CylinderConstraint) -> float:
    """Product of p_i over coordinates pinned to 1 and (1-p_i) over zeros."""
    factors = []
    for coord, bit in constraint.assignments:
        p = seq.eval(coord)
        factors.append(p if bit else 1.0 - p)
    return prod01(factors)


@dataclass(frozen=True)
class RationalPoint:
    """0-1 sequence with finite support (coordinates holding a 1)."""

    support: frozenset

    def __post_init__(self):
        for c in self.support:
            if c < 0:
                raise ValueError("support coordinates must be nonnegative")

    @classmethod
    def of(cls, coords: Iterable[int]) -> "RationalPoint":
        return cls(frozenset(coords))


@dataclass(frozen=True)
class NullCover:
    """Per-level sets of fixed-length bit strings up to a truncation."""

    levels: tuple  # sorted (n, sorted tuple of strings) pairs

    def __post_init__(self):
        seen = set()
        for n, strings in self.levels:
            if n in seen:
                raise ValueError("duplicate level")
            seen.add(n)
            if list(strings) != sorted(set(strings)):
                raise ValueError("level strings must be sorted and unique")
            for s in strings:
                if len(s) != n or set(s) - {"0", "1"}:
                    raise ValueError(f"bad string {s!r} at level {n}")
        if list(self.levels) != sorted(self.levels):
            raise ValueError("levels must be sorted")

    @classmethod
    def of(cls, mapping: dict) -> "NullCover":
        levels = tuple(sorted(
            (n, tuple(sorted(set(strings))))
            for n, strings in mapping.items() if strings))
        return cls(levels)

    def as_dict(self) -> dict:
        return {n: set(strings) for n, strings in self.levels}

    def min_level(self) -> Optional[int]:
        return self.levels[0][0] if self.levels else None

    def truncation(self) -> int:
        return self.levels[-1][0] if self.levels else 0


def cover_mass(cover: NullCover, seq: ProbSeq) -> float:
    """Sum over levels and member strings of the string's cylinder mass."""
    total = 0.0
    for n, strings in cover.levels:
        probs = [seq.eval(i) for i in range(n)]
        for s in strings:
            total += prod01(
                [probs[i] if s[i] == "1" else 1.0 - probs[i] for i in range(n)])
    return total


def translate_cover(cover: NullCover, q: RationalPoint,
                    seq: ProbSeq) -> tuple:
    """Translate every level by q (coordinatewise xor); returns the translated
    cover and the factor C bounding the mass ratio.

    C is the product over q's support of max(p_i, 1-p_i)/min(p_i, 1-p_i);
    the translated mass never exceeds C times the original.
    """
    if q.support:
        top = max(q.support)
        for n, _ in cover.levels:
            if top >= n:
                raise ValueError(
                    f"support coordinate {top} reaches past level {n}")
    ratio = 1.0
    for i in sorted(q.support):
        p = seq.eval(i)
        ratio *= max(p, 1.0 - p) / min(p, 1.0 - p)
    translated = {}
    for n, strings in cover.levels:
        flipped = set()
        for s in strings:
            bits = list(s)
            for i in q.support:
                bits[i] = "1" if bits[i] == "0" else "0"
            flipped.add("".join(bits))
        translated[n] = flipped
    return NullCover.of(translated), ratio


def tail_closure(cover: NullCover, support_bound: int,
                 seq: ProbSeq) -> tuple:
    """Union of all translates with support inside {0..support_bound-1}.

    Returns the merged cover and the bound: the sum over translates of
    C_q times the original mass.
    """
    if support_bound < 0:
        raise ValueError("support bound must be nonnegative")
    min_level = cover.min_level()
    if min_level is not None and support_bound > min_level:
        raise ValueError("support bound exceeds the shortest level")
    base = cover_mass(cover, seq)
    merged = {n: set(strings) for n, strings in cover.levels}
    bound = base  # the empty translate
    for size in range(1, support_bound + 1):
        import itertools as _it
        for coords in _it.combinations(range(support_bound), size):
            q = RationalPoint.of(coords)
            shifted, ratio = translate_cover(cover, q, seq)
            bound += ratio * base
            for n, strings in shifted.levels:
                merged.setdefault(n, set()).update(strings)
    return NullCover.of(merged), bound


def hits(cover: NullCover, x: str, upto: int) -> int:
    """Number of levels n <= upto whose set contains the prefix x[:n]."""
    if len(x) < upto:
        raise ValueError("prefix shorter than the requested range")
    if set(x) - {"0", "1"}:
        raise ValueError("prefix must be a 0-1 string")
    count = 0
    for n, strings in cover.levels:
        if n <= upto and x[:n] in set(strings):
            count += 1
    return count


def cover_text(cover: NullCover) -> str:
    lines = []
    for n, strings in cover.levels:
        for s in strings:
            lines.append(f"{n} {s}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_cover(text: str) -> NullCover:
    mapping: dict = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        parts = ln.split(None, 1)
        n = int(parts[0])
        s = parts[1] if len(parts) > 1 else ""
        mapping.setdefault(n, set()).add(s)
    return NullCover.of(mapping)


# --- dichotomy between two product measures -----------------------------------

EQUIVALENT = "equivalent"
SINGULAR = "singular"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class KakutaniVerdict:
    status: str
    s_n: float
    upto: int

    def as_dict(self) -> dict:
        return {"schema": "graphdraw/kakutani/v1", "status": self.status,
                "s_n": self.s_n, "n": self.upto}


def _profile(seq: ProbSeq):
    """Asymptotic shape: ('const', c), ('zero'|'one', 'geom'|'invlog'),
    ('pair', even, odd), or None when unknown.

    Shapes are stable under arithmetic thinning, so an interleave can be
    compared against an atomic profile branchwise.
    """
    if isinstance(seq, Constant):
        return ("const", float(seq.c))
    if isinstance(seq, GeometricToZero):
        return ("zero", "geom")
    if isinstance(seq, InverseLog):
        return ("zero", "invlog")
    if isinstance(seq, OneMinus):
        p = _profile(seq.inner)
        if p is None:
            return None
        if p[0] == "const":
            return ("const", 1.0 - p[1])
        if p[0] == "zero":
            return ("one", p[1])
        if p[0] == "one":
            return ("zero", p[1])
        return ("pair", _mirror(p[1]), _mirror(p[2]))
    if isinstance(seq, Interleave):
        a, b = _profile(seq.d0), _profile(seq.d1)
        if a is None or b is None:
            return None
        return ("pair", a, b)
    if isinstance(seq, Table):
        return _profile(seq.tail)
    return None


def _mirror(profile):
    if profile is None:
        return None
    if profile[0] == "const":
        return ("const", 1.0 - profile[1])
    if profile[0] == "zero":
        return ("one", profile[1])
    if profile[0] == "one":
        return ("zero", profile[1])
    return ("pair", _mirror(profile[1]), _mirror(profile[2]))


def _atomic_verdict(p, q) -> str:
    if p[0] == "const" and q[0] == "const":
        return EQUIVALENT if p[1] == q[1] else SINGULAR
    if p[0] == "const" or q[0] == "const":
        # One side stays separated from {0,1}, the other collapses.
        return SINGULAR
    if p[0] != q[0]:
        return SINGULAR
    # Both collapse to the same endpoint: geometric tails are square-root
    # summable against each other; inverse-log tails cancel; mixing the two
    # kinds leaves a divergent 1/log series.
    return EQUIVALENT if p[1] == q[1] else SINGULAR


def _profile_verdict(p, q) -> str:
    if p is None or q is None:
        return UNDETERMINED
    if p[0] == "pair" or q[0] == "pair":
        pe, po = (p[1], p[2]) if p[0] == "pair" else (p, p)
        qe, qo = (q[1], q[2]) if q[0] == "pair" else (q, q)
        v1 = _profile_verdict(pe, qe)
        v2 = _profile_verdict(po, qo)
        if SINGULAR in (v1, v2):
            return SINGULAR
        if v1 == v2 == EQUIVALENT:
            return EQUIVALENT
        return UNDETERMINED
    return _atomic_verdict(p, q)


def kakutani(p: ProbSeq, q: ProbSeq, upto: int) -> KakutaniVerdict:
    """Mutual absolute continuity vs singularity of the two product measures.

    S_N = sum over n < N of (sqrt(p_n)-sqrt(q_n))^2 +
    (sqrt(1-p_n)-sqrt(1-q_n))^2 is always reported; the verdict is decided
    symbolically from the family shapes and stays undetermined otherwise.
    """
    s = 0.0
    for n in range(upto):
        a, b = p.eval(n), q.eval(n)
        s += (math.sqrt(a) - math.sqrt(b)) ** 2
        s += (math.sqrt(1.0 - a) - math.sqrt(1.0 - b)) ** 2
    if p == q:
        return KakutaniVerdict(EQUIVALENT, s, upto)
    status = _profile_verdict(_profile(p), _profile(q))
    return KakutaniVerdict(status, s, upto)


def empirical_density(x: str, n: int) -> float:
    """Fraction of ones among the first n coordinates."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(x) < n:
        raise ValueError("prefix shorter than n")
    return x[:n].count("1") / n


def witness_sum(sched, a_side: Iterable[int], b_side: Iterable[int],
                upto: int) -> float:
    """Sum over vertices v < upto outside A and B of
    prod_{k in A} p(v,k) * prod_{l in B} (1 - p(v,l)).

    `sched` is anything exposing prob(a, b); A and B must be disjoint.
    """
    a_set, b_set = set(a_side), set(b_side)
    if a_set & b_set:
        raise ValueError("witness sides must be disjoint")
    total = 0.0
    for v in range(upto):
        if v in a_set or v in b_set:
            continue
        factors = [sched.prob(v, k) for k in sorted(a_set)]
        factors += [1.0 - sched.prob(v, l) for l in sorted(b_set)]
        total += prod01(factors)
    return total
