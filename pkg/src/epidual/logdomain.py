"""Signed log-domain scalar arithmetic.

Quantities across the package are carried as log-magnitudes so that values
like n! for n near 1000 never leave the representable range.  Signed results
are (sign, log|x|) pairs with sign in {-1, 0, +1} and log|0| = -inf.
"""

from __future__ import annotations

import math
from typing import Iterable

NEG_INF = float("-inf")


def log_add(a: float, b: float) -> float:
    """log(e^a + e^b), safe at -inf and +inf."""
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if math.isinf(a) or math.isinf(b):
        return math.inf
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def log_sum(terms: Iterable[float]) -> float:
    """log of a sum of exp(term), accumulated against the running maximum."""
    terms = list(terms)
    if not terms:
        return NEG_INF
    hi = max(terms)
    if hi == NEG_INF:
        return NEG_INF
    if math.isinf(hi):
        return math.inf
    return hi + math.log(math.fsum(math.exp(t - hi) for t in terms))


def log_sub_signed(a: float, b: float) -> tuple[int, float]:
    """e^a - e^b as (sign, log|difference|).  Equal inputs give (0, -inf)."""
    if a == b:
        return 0, NEG_INF
    hi, lo, sign = (a, b, 1) if a > b else (b, a, -1)
    if lo == NEG_INF:
        return sign, hi
    # log(e^hi - e^lo) = hi + log(1 - e^{lo-hi}); lo-hi < 0 so expm1 is safe.
    return sign, hi + math.log(-math.expm1(lo - hi))


def log1mexp(x: float) -> float:
    """log(1 - e^x) for x < 0, switching branches at log(1/2) for accuracy."""
    if x >= 0.0:
        raise ValueError(f"log1mexp needs x < 0, got {x}")
    if x > -math.log(2.0):
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))
