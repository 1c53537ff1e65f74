"""Shared numeric helpers.

Probabilities live strictly inside (0,1), so products of them are positive
but can underflow a double once more than a few hundred factors pile up.
`prod01` multiplies directly for short inputs and switches to log-space
accumulation past 40 factors.
"""

from __future__ import annotations

import math
from typing import Iterable

_DIRECT_LIMIT = 40


def prod01(values: Iterable[float]) -> float:
    """Product of values in (0,1]; log-space beyond 40 factors."""
    vals = list(values)
    if len(vals) <= _DIRECT_LIMIT:
        out = 1.0
        for v in vals:
            out *= v
        return out
    acc = 0.0
    for v in vals:
        if v <= 0.0:
            raise ValueError("prod01 expects values in (0,1]")
        acc += math.log(v)
    return math.exp(acc)


def rel_close(a: float, b: float, rel: float = 1e-12) -> bool:
    """Relative comparison with an absolute fallback near zero."""
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300) or abs(a - b) <= 1e-300
