"""Binary jumbled indexing and the all-k solver over mismatch-matrix diagonals.

A jumbled index stores, for every window length, the minimum and maximum
number of ones over all windows of a binary string; every intermediate count
is achievable, so membership queries reduce to an interval test. The all-k
solver runs one index per alignment diagonal of the mismatch matrix and
inverts the per-length minima into per-budget lengths.

The index construction here is plain sliding windows (quadratic per string);
it sits behind build_jumbled so a subquadratic builder can be swapped in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .text import Text


@dataclass(frozen=True)
class JumbledIndex:
    """Per window length ell in 1..n: min and max count of ones."""

    n: int
    min_ones: np.ndarray  # index ell, entry 0 unused
    max_ones: np.ndarray


def build_jumbled(s) -> JumbledIndex:
    """Sliding-window min/max ones for every window length of a binary string."""
    a = np.asarray(s, dtype=np.int64)
    if a.size == 0:
        raise ValueError("string must be nonempty")
    if a.min() < 0 or a.max() > 1:
        raise ValueError("jumbled indexing needs a binary string")
    n = a.size
    prefix = np.concatenate(([0], np.cumsum(a)))
    min_ones = np.zeros(n + 1, dtype=np.int64)
    max_ones = np.zeros(n + 1, dtype=np.int64)
    for ell in range(1, n + 1):
        window = prefix[ell:] - prefix[:-ell]
        min_ones[ell] = window.min()
        max_ones[ell] = window.max()
    return JumbledIndex(n, min_ones, max_ones)


def jumbled_query(idx: JumbledIndex, ell: int, q: int) -> bool:
    """Is there a window of length ell containing exactly q ones? O(1)."""
    if not 1 <= ell <= idx.n:
        raise ValueError(f"window length {ell} out of range [1, {idx.n}]")
    return bool(idx.min_ones[ell] <= q <= idx.max_ones[ell])


def _diagonal_min_ones(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """best[ell] = minimum mismatch count over all aligned windows of length ell."""
    n = a.size
    m = b.size
    kmax = min(n, m)
    best = np.full(kmax + 1, np.iinfo(np.int64).max, dtype=np.int64)
    best[0] = 0
    for p in range(-(n - 1), m):
        i0 = -p if p < 0 else 0
        j0 = p if p > 0 else 0
        L = min(n - i0, m - j0)
        diag = (a[i0:i0 + L] != b[j0:j0 + L]).astype(np.int64)
        prefix = np.concatenate(([0], np.cumsum(diag)))
        for ell in range(1, L + 1):
            lo = int((prefix[ell:] - prefix[:-ell]).min())
            if lo < best[ell]:
                best[ell] = lo
    return best


def lcs_all_k(t1: Text, t2: Text) -> np.ndarray:
    """ans[k] = length of the longest common substring with <= k mismatches,
    for every k in 0..min(|T1|, |T2|), via one jumbled index per diagonal."""
    best = _diagonal_min_ones(t1.codes, t2.codes)
    kmax = best.size - 1
    # best is non-decreasing in ell; invert by a single backwards scan
    ans = np.zeros(kmax + 1, dtype=np.int64)
    ell = kmax
    for k in range(kmax, -1, -1):
        while ell > 0 and best[ell] > k:
            ell -= 1
        ans[k] = ell
    return ans
