"""Probability sequences on (0,1): symbolic families and finite diagnostics.

A descriptor represents a sequence (p_n) of edge probabilities through a
small closed algebra of families (constant, inverse-logarithm, geometric,
one-minus, interleave, table-with-tail).  Classification of the defining
series (divergence of sum p_n^k and sum (1-p_n)^k for every k, summability,
accumulation at 0/1) is done symbolically per family, never from finite
numerics; truncated partial sums are exposed separately as diagnostics.

Evaluation is clamped to [EVAL_MIN, EVAL_MAX] so every value stays strictly
inside (0,1) even where the closed form underflows a double (geometric
tails past index ~1070, and their mirror images near 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

Param = Union[Fraction, float]

EVAL_MIN = 1e-300
EVAL_MAX = 1.0 - 2.0 ** -40

_FLAG_NAMES = frozenset(
    {"BC", "BC0", "BC1", "BC_M0", "BC_M1", "Sep", "Acc01",
     "SummableP", "SummableCoP", "Unknown"}
)


class TruncationTooSmall(ValueError):
    """Raised when an index selection cannot be realised below the truncation."""


class BlockPlanError(ValueError):
    """Raised when a block plan cannot reach its target sum; carries the achieved sum."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


def _clamp(x: float) -> float:
    if x < EVAL_MIN:
        return EVAL_MIN
    if x > EVAL_MAX:
        return EVAL_MAX
    return x


def clamp_unit(x: float) -> float:
    """Clamp into the evaluable open-unit range [EVAL_MIN, EVAL_MAX]."""
    return _clamp(x)


def _check_open_unit(x: float, what: str) -> None:
    if not (0.0 < x < 1.0):
        raise ValueError(f"{what} must lie strictly inside (0,1), got {x!r}")


@dataclass(frozen=True)
class _Attrs:
    """Symbolic series attributes of a sequence family."""

    known: bool
    touches0: bool            # 0 is an accumulation point
    touches1: bool            # 1 is an accumulation point
    limit: Optional[float]    # limit of p_n when it exists
    pow_p_divergent: bool     # sum p_n^k = infinity for every k >= 1
    pow_q_divergent: bool     # sum (1-p_n)^k = infinity for every k >= 1
    summable_p: bool          # sum p_n < infinity
    summable_q: bool          # sum (1-p_n) < infinity


@dataclass(frozen=True)
class SeqClass:
    """Set of class flags for a probability sequence."""

    flags: frozenset

    def __post_init__(self):
        unknown = self.flags - _FLAG_NAMES
        if unknown:
            raise ValueError(f"unknown flags: {sorted(unknown)}")
        f = self.flags
        if "BC0" in f and not {"BC", "BC_M0"} <= f:
            raise ValueError("BC0 requires BC and BC_M0")
        if "BC1" in f and not {"BC", "BC_M1"} <= f:
            raise ValueError("BC1 requires BC and BC_M1")
        if "SummableP" in f and "BC" in f:
            raise ValueError("SummableP and BC are mutually exclusive")
        if "SummableCoP" in f and "BC" in f:
            raise ValueError("SummableCoP and BC are mutually exclusive")

    def __contains__(self, flag: str) -> bool:
        return flag in self.flags

    @property
    def bc(self) -> bool:
        return "BC" in self.flags

    def sorted(self) -> list:
        return sorted(self.flags)


class ProbSeq:
    """Base class for probability-sequence descriptors."""

    def _raw(self, n: int) -> float:
        raise NotImplementedError

    def _attrs(self) -> _Attrs:
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def eval(self, n: int) -> float:
        if n < 0:
            raise ValueError("index must be nonnegative")
        return _clamp(self._raw(n))

    def __repr__(self):
        try:
            return f"{type(self).__name__}({self.text()!r})"
        except ValueError:
            return f"{type(self).__name__}(<opaque>)"


@dataclass(frozen=True, repr=False)
class Constant(ProbSeq):
    c: Param

    def __post_init__(self):
        _check_open_unit(float(self.c), "constant value")

    def _raw(self, n):
        return float(self.c)

    def _attrs(self):
        return _Attrs(True, False, False, float(self.c), True, True, False, False)

    def text(self):
        return f"const:{_fmt_param(self.c)}"


@dataclass(frozen=True, repr=False)
class InverseLog(ProbSeq):
    """p_n = 1 / ln(stride*n + a).  Requires a > e so that p_0 < 1."""

    a: Param
    stride: int = 1

    def __post_init__(self):
        if float(self.a) <= math.e:
            raise ValueError("inverse-log offset must exceed e so p_0 < 1")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")

    def _raw(self, n):
        return 1.0 / math.log(self.stride * n + float(self.a))

    def _attrs(self):
        # 1/ln(n) decays below every power's reach: sum (1/ln n)^k diverges
        # for all k, and (1 - p_n)^k is bounded below eventually.
        return _Attrs(True, True, False, 0.0, True, True, False, False)

    def text(self):
        if self.stride == 1:
            return f"invlog:{_fmt_param(self.a)}"
        return f"invlog:{_fmt_param(self.a)}:{self.stride}"


@dataclass(frozen=True, repr=False)
class GeometricToZero(ProbSeq):
    """p_n = r^(n+1) for r in (0,1)."""

    r: Param

    def __post_init__(self):
        _check_open_unit(float(self.r), "geometric ratio")

    def _raw(self, n):
        return float(self.r) ** (n + 1)

    def _attrs(self):
        return _Attrs(True, True, False, 0.0, False, True, True, False)

    def text(self):
        return f"geom:{_fmt_param(self.r)}"


@dataclass(frozen=True, repr=False)
class OneMinus(ProbSeq):
    inner: ProbSeq

    def _raw(self, n):
        return 1.0 - self.inner.eval(n)

    def _attrs(self):
        a = self.inner._attrs()
        limit = None if a.limit is None else 1.0 - a.limit
        return _Attrs(a.known, a.touches1, a.touches0, limit,
                      a.pow_q_divergent, a.pow_p_divergent,
                      a.summable_q, a.summable_p)

    def text(self):
        return f"1-({self.inner.text()})"


@dataclass(frozen=True, repr=False)
class Interleave(ProbSeq):
    """Even indices follow d0, odd indices follow d1."""

    d0: ProbSeq
    d1: ProbSeq

    def _raw(self, n):
        if n % 2 == 0:
            return self.d0.eval(n // 2)
        return self.d1.eval((n - 1) // 2)

    def _attrs(self):
        a, b = self.d0._attrs(), self.d1._attrs()
        if a.limit is not None and a.limit == b.limit:
            limit = a.limit
        else:
            limit = None
        # A sum of two nonnegative series diverges when either part does.
        return _Attrs(a.known and b.known,
                      a.touches0 or b.touches0,
                      a.touches1 or b.touches1,
                      limit,
                      a.pow_p_divergent or b.pow_p_divergent,
                      a.pow_q_divergent or b.pow_q_divergent,
                      a.summable_p and b.summable_p,
                      a.summable_q and b.summable_q)

    def text(self):
        return f"interleave({self.d0.text()},{self.d1.text()})"


@dataclass(frozen=True, repr=False)
class Table(ProbSeq):
    """Explicit finite prefix, then a tail descriptor evaluated from zero."""

    prefix: tuple
    tail: ProbSeq

    def __post_init__(self):
        for v in self.prefix:
            _check_open_unit(float(v), "table entry")

    def _raw(self, n):
        if n < len(self.prefix):
            return float(self.prefix[n])
        return self.tail.eval(n - len(self.prefix))

    def _attrs(self):
        # A finite prefix changes no series classification.
        return self.tail._attrs()

    def text(self):
        vals = ",".join(_fmt_param(v) for v in self.prefix)
        return f"table[{vals}]({self.tail.text()})"


@dataclass(frozen=True, repr=False)
class Opaque(ProbSeq):
    """Programmatic sequence with no symbolic structure; classifies Unknown.

    Not serialisable: the textual grammar carries only the closed families.
    """

    fn: Callable[[int], float]
    label: str = "opaque"

    def _raw(self, n):
        return float(self.fn(n))

    def _attrs(self):
        return _Attrs(False, False, False, None, False, False, False, False)

    def text(self):
        raise ValueError("opaque sequences have no textual form")


def classify(seq: ProbSeq) -> SeqClass:
    """Symbolic class flags; Unknown when the family gives no guarantees."""
    a = seq._attrs()
    if not a.known:
        return SeqClass(frozenset({"Unknown"}))
    flags = set()
    bc = a.pow_p_divergent and a.pow_q_divergent
    if bc:
        flags.add("BC")
    if a.summable_p:
        flags.add("SummableP")
    if a.summable_q:
        flags.add("SummableCoP")
    if not a.touches0 and not a.touches1:
        flags.add("Sep")
    if a.touches0 and a.touches1:
        flags.add("Acc01")
    if bc and a.limit == 0.0:
        flags.add("BC0")
    if bc and a.limit == 1.0:
        flags.add("BC1")
    if bc and a.touches0:
        flags.add("BC_M0")
    if bc and a.touches1:
        flags.add("BC_M1")
    return SeqClass(frozenset(flags))


def partial_sums(seq: ProbSeq, k: int, upto: int) -> tuple:
    """(sum of p_n^k, sum of (1-p_n)^k) over n < upto, in index order."""
    if k < 1:
        raise ValueError("power k must be >= 1")
    if upto < 1:
        raise ValueError("truncation must be >= 1")
    sp = 0.0
    sq = 0.0
    for n in range(upto):
        p = seq.eval(n)
        sp += p ** k
        sq += (1.0 - p) ** k
    return sp, sq


def split_summable(seq: ProbSeq, budget: float, upto: int) -> list:
    """Select indices whose p-sum is dominated by budget * sum 2^-(j+1).

    For j = 1, 2, ... the first unused index n < upto with
    p_n < budget * 2^-(j+1) is taken; selection stops at the first level
    with no qualifying index.  Fails when fewer than floor(log2(upto))
    indices were found, which signals that the truncation is too small
    for the sequence's decay.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    flags = classify(seq)
    if "BC_M0" not in flags:
        raise ValueError("split_summable requires a BC_M0 sequence "
                         "(apply the one-minus dual for BC_M1)")
    values = [seq.eval(n) for n in range(upto)]
    picked = []
    used = set()
    j = 1
    while True:
        threshold = budget * 2.0 ** -(j + 1)
        hit = None
        for n in range(upto):
            if n not in used and values[n] < threshold:
                hit = n
                break
        if hit is None:
            break
        used.add(hit)
        picked.append(hit)
        j += 1
    need = int(math.floor(math.log2(upto))) if upto > 1 else 1
    if len(picked) < need:
        raise TruncationTooSmall(
            f"only {len(picked)} indices below the thresholds within {upto}; "
            f"need at least {need}")
    return sorted(picked)


@dataclass(frozen=True)
class BlockPlan:
    """Disjoint index blocks, each listing k edge slots then k non-edge slots."""

    k: int
    blocks: tuple            # tuples of 2k indices
    probs: tuple             # per-block success probability
    running_sum: float

    def __post_init__(self):
        seen = set()
        for blk in self.blocks:
            if len(blk) != 2 * self.k:
                raise ValueError("each block must hold exactly 2k indices")
            for n in blk:
                if n in seen:
                    raise ValueError("blocks must be pairwise disjoint")
                seen.add(n)


def plan_blocks(seq: ProbSeq, k: int, target_sum: float, upto: int,
                reserved=frozenset()) -> BlockPlan:
    """Greedy block allocation until the success-probability sum hits target.

    Every block takes the k unused indices with the largest p for its edge
    slots and the k with the smallest p for its non-edge slots (ties to the
    lower index).  Indices congruent to 2k mod 2k+1 are never allocated, so
    every window of 2k+1 consecutive indices keeps at least one unused
    index.  Fails carrying the achieved sum when the target is unreachable
    below the truncation.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if target_sum <= 0:
        raise ValueError("target sum must be positive")
    flags = classify(seq)
    if "BC" not in flags:
        raise ValueError("plan_blocks requires a BC sequence")
    reserved = set(reserved)
    period = 2 * k + 1
    pool = [n for n in range(upto)
            if n not in reserved and n % period != period - 1]
    values = {n: seq.eval(n) for n in pool}
    by_large = sorted(pool, key=lambda n: (-values[n], n))
    by_small = sorted(pool, key=lambda n: (values[n], n))
    used = set()
    blocks = []
    probs = []
    total = 0.0
    it_large = iter(by_large)
    it_small = iter(by_small)

    def take(source, count):
        out = []
        for n in source:
            if n in used:
                continue
            used.add(n)
            out.append(n)
            if len(out) == count:
                return out
        return None

    while total < target_sum:
        edges = take(it_large, k)
        if edges is None:
            raise BlockPlanError(
                f"target {target_sum} unreachable below {upto}; achieved {total}",
                achieved=total)
        nonedges = take(it_small, k)
        if nonedges is None:
            raise BlockPlanError(
                f"target {target_sum} unreachable below {upto}; achieved {total}",
                achieved=total)
        from ._num import prod01
        p = prod01([values[n] for n in edges]) * \
            prod01([1.0 - values[n] for n in nonedges])
        blocks.append(tuple(edges + nonedges))
        probs.append(p)
        total += p
    return BlockPlan(k=k, blocks=tuple(blocks), probs=tuple(probs),
                     running_sum=total)


def subsequence_odd(seq: ProbSeq) -> ProbSeq:
    """Descriptor of the subsequence at odd argument positions n -> seq(2n+1).

    Defined only where the family algebra is closed under odd thinning.
    """
    if isinstance(seq, Constant):
        return seq
    if isinstance(seq, GeometricToZero):
        r = float(seq.r)
        return GeometricToZero(r * r)
    if isinstance(seq, InverseLog):
        return InverseLog(float(seq.a) + seq.stride, 2 * seq.stride)
    if isinstance(seq, OneMinus):
        return OneMinus(subsequence_odd(seq.inner))
    if isinstance(seq, Interleave):
        return seq.d1
    if isinstance(seq, Table):
        if len(seq.prefix) % 2 != 0:
            raise ValueError("odd thinning needs an even-length table prefix")
        return Table(seq.prefix[1::2], subsequence_odd(seq.tail))
    raise ValueError(f"odd thinning undefined for {type(seq).__name__}")


# --- textual grammar ---------------------------------------------------------

def _fmt_param(p: Param) -> str:
    if isinstance(p, Fraction):
        if p.denominator == 1:
            return str(p.numerator)
        return f"{p.numerator}/{p.denominator}"
    return repr(float(p))


def _parse_param(s: str) -> Param:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    try:
        return Fraction(int(s))
    except ValueError:
        return float(s)


def _split_top(s: str) -> tuple:
    depth = 0
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            return s[:i], s[i + 1:]
    raise ValueError(f"expected a top-level comma in {s!r}")


def parse(text: str) -> ProbSeq:
    """Parse the one-line descriptor grammar; inverse of .text()."""
    s = text.strip()
    if s.startswith("1-(") and s.endswith(")"):
        return OneMinus(parse(s[3:-1]))
    if s.startswith("interleave(") and s.endswith(")"):
        left, right = _split_top(s[len("interleave("):-1])
        return Interleave(parse(left), parse(right))
    if s.startswith("table["):
        close = s.index("]")
        body = s[len("table["):close]
        vals = tuple(_parse_param(v) for v in body.split(",")) if body else ()
        rest = s[close + 1:]
        if not (rest.startswith("(") and rest.endswith(")")):
            raise ValueError(f"malformed table descriptor: {text!r}")
        return Table(vals, parse(rest[1:-1]))
    if ":" in s:
        head, _, params = s.partition(":")
        if head == "const":
            return Constant(_parse_param(params))
        if head == "geom":
            return GeometricToZero(_parse_param(params))
        if head == "invlog":
            parts = params.split(":")
            if len(parts) == 1:
                return InverseLog(_parse_param(parts[0]))
            return InverseLog(_parse_param(parts[0]), int(parts[1]))
    raise ValueError(f"unrecognised sequence descriptor: {text!r}")
