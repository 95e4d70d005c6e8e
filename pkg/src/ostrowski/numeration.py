"""Ostrowski digit expansions over a convergent scale.

Every n >= 0 below the scale's limit has a unique expansion
n = sum_k eps_k * q_k with 0 <= eps_0 < a_1, 0 <= eps_k <= a_{k+1}, and
eps_k = a_{k+1} forcing eps_{k-1} = 0.  This module provides the greedy
encoder/decoder, digit statistics (sigma, psi), iteration, and the block
structure of the set {n : eps_0(n) = ... = eps_{lam-1}(n) = 0}.
"""

from __future__ import annotations

import bisect
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .cfrac import ConvergentTable
from .errors import RangeError, ValidationError

LONG = "long"
SHORT = "short"


@dataclass(frozen=True)
class DigitString:
    """A legal Ostrowski digit vector, least-significant first, trailing zeros trimmed.

    Construction validates the digit constraints and raises ValidationError on
    a breach, so every DigitString in circulation is decodable.
    """

    digits: tuple[int, ...]
    scale: ConvergentTable

    def __post_init__(self):
        ds = tuple(int(e) for e in self.digits)
        while ds and ds[-1] == 0:
            ds = ds[:-1]
        object.__setattr__(self, "digits", ds)
        reason = _violation(ds, self.scale)
        if reason:
            raise ValidationError(reason)

    def digit(self, k: int) -> int:
        return self.digits[k] if k < len(self.digits) else 0

    @property
    def sigma(self) -> int:
        return sum(self.digits)


def _violation(digits: Sequence[int], scale: ConvergentTable) -> str | None:
    """Reason the digit array is illegal, or None if it is fine."""
    if len(digits) > scale.rows:
        return f"digit string has {len(digits)} positions, scale certifies {scale.rows}"
    for k, e in enumerate(digits):
        if e < 0:
            return f"negative digit at position {k}"
        bound = scale.digit_bound(k)
        if e > bound:
            return f"digit {e} at position {k} exceeds bound {bound}"
        if k >= 1 and e == bound and digits[k - 1] != 0:
            return f"maximal digit at position {k} needs a zero at position {k - 1}"
    return None


def validate(digits: Sequence[int], scale: ConvergentTable) -> bool:
    """True iff the array is a legal Ostrowski digit string for this scale."""
    try:
        ds = tuple(int(e) for e in digits)
    except (TypeError, ValueError):
        return False
    while ds and ds[-1] == 0:
        ds = ds[:-1]
    return _violation(ds, scale) is None


def encode(n: int, scale: ConvergentTable) -> DigitString:
    """Greedy Ostrowski expansion: split off the largest q_k at each step.

    When consecutive denominators tie (q_0 = q_1 = 1), the higher index wins,
    which is what keeps eps_0 < a_1.
    """
    n = int(n)
    if n < 0 or n >= scale.limit:
        raise RangeError(f"n={n} outside [0, {scale.limit}) for this table")
    q = scale.q
    k = bisect.bisect_right(q, n) - 1
    digits = [0] * (k + 1)
    rem = n
    while rem:
        d = rem // q[k]
        digits[k] = d
        rem -= d * q[k]
        k -= 1
    return DigitString(tuple(digits), scale)


def decode(d: DigitString) -> int:
    """Value of a digit string; the inverse of encode on canonical strings."""
    return sum(e * qk for e, qk in zip(d.digits, d.scale.q))


def digit_string(digits: Sequence[int], scale: ConvergentTable) -> DigitString:
    """Wrap a raw digit array, validating it (ValidationError on breach)."""
    return DigitString(tuple(int(e) for e in digits), scale)


def sigma(n: int, scale: ConvergentTable) -> int:
    """Digit sum of the Ostrowski expansion of n."""
    return encode(n, scale).sigma


def psi(n: int, lam: int, scale: ConvergentTable) -> int:
    """Truncation below level lam: sum_{k < lam} eps_k(n) q_k."""
    if lam < 0:
        raise ValidationError("lam must be >= 0")
    d = encode(n, scale)
    return sum(e * qk for e, qk in zip(d.digits[:lam], d.scale.q[:lam]))


def iterate(scale: ConvergentTable, N: int) -> Iterator[tuple[int, DigitString]]:
    """Yield (n, digits) for n = 0..N-1 by per-n greedy re-encoding."""
    if N > scale.limit:
        raise RangeError(f"N={N} beyond table limit {scale.limit}")
    for n in range(N):
        yield n, encode(n, scale)


@dataclass(frozen=True)
class BlockIndex:
    """Starts w_0 < w_1 < ... of the blocks at level lam, with per-gap kinds.

    kinds[i] tags the gap w_{i+1} - w_i: LONG for q_lam, SHORT for q_{lam-1}
    (a short gap occurs exactly when eps_lam(w_i) = a_{lam+1}).
    """

    lam: int
    starts: tuple[int, ...]
    kinds: tuple[str, ...]


def w_sequence(lam: int, count: int, scale: ConvergentTable) -> BlockIndex:
    """First `count` members of {n : eps_k(n) = 0 for all k < lam}, with gap kinds.

    Generated gap by gap: from a start w, the next start is w + q_{lam-1} when
    eps_lam(w) is maximal (the digit at lam cannot be raised) and w + q_lam
    otherwise.  Cost is O(count) digit inspections, no scan over [0, w_count).
    """
    if lam < 1:
        raise ValidationError("lam must be >= 1")
    if count < 1:
        raise ValidationError("count must be >= 1")
    a_top = scale.digit_bound(lam)  # a_{lam+1}; RangeError if table too short
    q_long, q_short = scale.q[lam], scale.q[lam - 1]
    starts = [0]
    kinds = []
    w = 0
    for _ in range(count - 1):
        if encode(w, scale).digit(lam) == a_top:
            gap, kind = q_short, SHORT
        else:
            gap, kind = q_long, LONG
        w += gap
        if w >= scale.limit:
            raise OverflowError(f"block start {w} beyond table limit {scale.limit}")
        starts.append(w)
        kinds.append(kind)
    return BlockIndex(lam, tuple(starts), tuple(kinds))


def block_counts(lam: int, N: int, scale: ConvergentTable) -> tuple[int, int]:
    """Counts (a, b) of long and short gaps among blocks fully inside [0, N).

    Gaps are classified by their length; in the degenerate case
    q_lam = q_{lam-1} (lam = 1, a_1 = 1) every gap counts as long.
    Satisfies |a*q_lam + b*q_{lam-1} - N| <= q_lam.
    """
    if lam < 1:
        raise ValidationError("lam must be >= 1")
    a_top = scale.digit_bound(lam)
    q_long, q_short = scale.q[lam], scale.q[lam - 1]
    a = b = 0
    w = 0
    while w < N:
        gap = q_short if encode(w, scale).digit(lam) == a_top else q_long
        if w + gap > N:
            break
        if gap == q_long:
            a += 1
        else:
            b += 1
        w += gap
    return a, b


def block_densities(lam: int, N: int, scale: ConvergentTable) -> tuple[float, float]:
    """(a/N, b/N) for the long/short gap counts of block_counts."""
    a, b = block_counts(lam, N, scale)
    return a / N, b / N


# --- vectorized per-n greedy kernels ---------------------------------------
#
# These run the same greedy reduction as encode, but over a whole range of n
# at once.  They are the throughput path for the harness and the reference
# path for differential tests (bit-for-bit the per-n semantics, since the
# arithmetic is identical integer arithmetic).


def _top_index(scale: ConvergentTable, n_max: int) -> int:
    return max(bisect.bisect_right(scale.q, n_max) - 1, 0)


def psi_range(scale: ConvergentTable, lam: int, count: int) -> np.ndarray:
    """psi_lam(n) for n = 0..count-1 (int64).

    The greedy reduction peels digits from the top down; once positions
    >= lam are removed, the remainder is exactly psi_lam(n).
    """
    if lam < 0:
        raise ValidationError("lam must be >= 0")
    if count > scale.limit:
        raise RangeError(f"count={count} beyond table limit {scale.limit}")
    rem = np.arange(count, dtype=np.int64)
    if count == 0:
        return rem
    q = scale.q
    for k in range(_top_index(scale, count - 1), lam - 1, -1):
        d = rem // q[k]
        rem -= d * q[k]
    return rem


def digit_at_range(scale: ConvergentTable, k: int, count: int) -> np.ndarray:
    """eps_k(n) for n = 0..count-1 (int64)."""
    if count > scale.limit:
        raise RangeError(f"count={count} beyond table limit {scale.limit}")
    rem = np.arange(count, dtype=np.int64)
    q = scale.q
    out = np.zeros(count, dtype=np.int64)
    for j in range(_top_index(scale, count - 1), k - 1, -1):
        out = rem // q[j]
        rem -= out * q[j]
    return out


def high_digit_sum_range(scale: ConvergentTable, lam: int, count: int) -> np.ndarray:
    """sum_{k >= lam} eps_k(n) for n = 0..count-1 (int64)."""
    if count > scale.limit:
        raise RangeError(f"count={count} beyond table limit {scale.limit}")
    rem = np.arange(count, dtype=np.int64)
    total = np.zeros(count, dtype=np.int64)
    q = scale.q
    for k in range(_top_index(scale, count - 1), lam - 1, -1):
        d = rem // q[k]
        rem -= d * q[k]
        total += d
    return total


def sigma_range(scale: ConvergentTable, count: int) -> np.ndarray:
    """sigma(n) for n = 0..count-1 (int64)."""
    return high_digit_sum_range(scale, 0, count)
