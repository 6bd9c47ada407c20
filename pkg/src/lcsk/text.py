"""Integer-coded texts and longest-common-extension machinery.

Everything downstream works on a joined string T = T1 . sep^pad . T2 . sep^pad
where pad = max(|T1|, |T2|) and sep is a separator code one past the alphabet.
The separator blocks guarantee two things: reading up to pad characters from
any suffix start never runs off the end of the joined array, and a suffix of
one text never matches real characters of the other text past its own end
(separators only ever match separators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np
from numba import njit


# ---------------------------------------------------------------------------
# texts


@dataclass(frozen=True)
class Text:
    """A string over alphabet {0, ..., sigma-1} stored as integer codes."""

    codes: np.ndarray
    sigma: int
    alphabet: Optional[str] = None  # code -> character table used for decoding
    origin: Optional[str] = None

    def __post_init__(self):
        codes = np.ascontiguousarray(self.codes, dtype=np.int32)
        object.__setattr__(self, "codes", codes)
        if self.sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        if codes.size and (codes.min() < 0 or codes.max() >= self.sigma):
            raise ValueError("codes must lie in [0, sigma)")
        if self.alphabet is not None and len(self.alphabet) != self.sigma:
            raise ValueError("alphabet table must have sigma entries")

    def __len__(self) -> int:
        return int(self.codes.size)

    @classmethod
    def from_string(cls, s: str, alphabet: Optional[str] = None,
                    origin: Optional[str] = None) -> "Text":
        if alphabet is None:
            alphabet = "".join(sorted(set(s)))
        table = {c: i for i, c in enumerate(alphabet)}
        try:
            codes = np.fromiter((table[c] for c in s), dtype=np.int32, count=len(s))
        except KeyError as e:
            raise ValueError(f"character {e.args[0]!r} not in alphabet") from None
        return cls(codes, max(1, len(alphabet)), alphabet, origin)

    @classmethod
    def from_codes(cls, codes: Sequence[int], sigma: int,
                   origin: Optional[str] = None) -> "Text":
        return cls(np.asarray(codes, dtype=np.int32), sigma, None, origin)

    def decode(self) -> str:
        if self.alphabet is None:
            raise ValueError("text has no decoding table")
        return "".join(self.alphabet[c] for c in self.codes)


def encode_pair(s1: str, s2: str) -> tuple[Text, Text]:
    """Encode two strings over a shared alphabet so their codes are comparable."""
    alphabet = "".join(sorted(set(s1) | set(s2)))
    if not alphabet:
        alphabet = "\x00"
    return (Text.from_string(s1, alphabet, "t1"),
            Text.from_string(s2, alphabet, "t2"))


def _as_symbols(x) -> np.ndarray:
    if isinstance(x, Text):
        return x.codes
    if isinstance(x, str):
        return np.array(list(x))
    return np.asarray(x)


def hamming_distance(a, b) -> int:
    """Number of positions at which two equal-length sequences differ."""
    ca = _as_symbols(a)
    cb = _as_symbols(b)
    if ca.shape != cb.shape:
        raise ValueError(f"length mismatch: {ca.shape} vs {cb.shape}")
    return int(np.count_nonzero(ca != cb))


@dataclass(frozen=True)
class Match:
    """A witness: T1[pos1 : pos1+length] aligns with T2[pos2 : pos2+length]."""

    pos1: int
    pos2: int
    length: int
    mismatches: int

    def verify(self, t1: Text, t2: Text) -> bool:
        if self.pos1 + self.length > len(t1) or self.pos2 + self.length > len(t2):
            return False
        got = hamming_distance(t1.codes[self.pos1:self.pos1 + self.length],
                               t2.codes[self.pos2:self.pos2 + self.length])
        return got == self.mismatches


# ---------------------------------------------------------------------------
# suffix array / LCP / RMQ


def suffix_array(s: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling (O(n log n) lexsorts)."""
    n = s.size
    if n == 0:
        return np.empty(0, dtype=np.int64)
    rank = np.unique(s, return_inverse=True)[1].astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    if rank[sa[-1]] == n - 1:
        return sa
    k = 1
    while k < n:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[: n - k] = rank[k:]
        sa = np.lexsort((key2, rank))
        a = rank[sa]
        b = key2[sa]
        fresh = np.empty(n, dtype=np.int64)
        fresh[0] = 0
        np.cumsum((a[1:] != a[:-1]) | (b[1:] != b[:-1]), out=fresh[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = fresh
        if fresh[-1] == n - 1:
            break
        k *= 2
    return sa


@njit(cache=True, nogil=True)
def _kasai(s, sa, rank):
    n = s.size
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


def _floor_log_table(n: int) -> np.ndarray:
    logs = np.zeros(n + 1, dtype=np.int64)
    j = 1
    while (1 << j) <= n:
        logs[1 << j: min((1 << (j + 1)), n + 1)] = j
        j += 1
    return logs


def _sparse_table(a: np.ndarray) -> np.ndarray:
    n = a.size
    levels = max(1, int(n).bit_length())
    st = np.empty((levels, n), dtype=np.int64)
    st[0] = a
    j = 1
    while (1 << j) <= n:
        span = 1 << (j - 1)
        width = n - (1 << j) + 1
        st[j, :width] = np.minimum(st[j - 1, :width], st[j - 1, span:span + width])
        j += 1
    return st


class LceIndex:
    """Suffix array + LCP array + range-minimum table over an integer string.

    Answers longest-common-extension queries between any two suffixes in O(1).
    Immutable after construction; safe for concurrent readers.
    """

    def __init__(self, codes: np.ndarray):
        self.codes = np.ascontiguousarray(codes, dtype=np.int32)
        self.n = int(self.codes.size)
        self.sa = suffix_array(self.codes)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[self.sa] = np.arange(self.n, dtype=np.int64)
        self.lcp = _kasai(self.codes, self.sa, self.rank)
        self.st = _sparse_table(self.lcp) if self.n else np.zeros((1, 0), np.int64)
        self.logs = _floor_log_table(max(1, self.n))

    def lce(self, i: int, j: int) -> int:
        """Length of the longest common prefix of suffixes i and j."""
        n = self.n
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"position out of range: ({i}, {j}) for length {n}")
        if i == j:
            return n - i
        a = self.rank[i]
        b = self.rank[j]
        if a > b:
            a, b = b, a
        lo, hi = a + 1, b
        k = self.logs[hi - lo + 1]
        return int(min(self.st[k, lo], self.st[k, hi - (1 << k) + 1]))

    def lce_batch(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Vectorised lce over aligned position arrays."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        a = self.rank[i]
        b = self.rank[j]
        lo = np.minimum(a, b) + 1
        hi = np.maximum(a, b)
        same = i == j
        lo = np.where(same, 1, lo)   # dummy valid range for the diagonal case
        hi = np.maximum(hi, lo)
        k = self.logs[hi - lo + 1]
        left = self.st[k, lo]
        right = self.st[k, hi - (1 << k) + 1]
        out = np.minimum(left, right)
        return np.where(same, self.n - i, out)


# ---------------------------------------------------------------------------
# the two-text context


class SuffixContext:
    """Joint index over T = T1 sep^pad T2 sep^pad with O(1) LCE queries."""

    def __init__(self, t1: Text, t2: Text):
        if t1.sigma != t2.sigma:
            raise ValueError("texts must share an alphabet; use encode_pair")
        if len(t1) == 0 or len(t2) == 0:
            raise ValueError("texts must be nonempty")
        self.t1 = t1
        self.t2 = t2
        self.sigma = t1.sigma
        self.sep = t1.sigma  # separator code, outside the real alphabet
        self.len1 = len(t1)
        self.len2 = len(t2)
        self.pad = max(self.len1, self.len2)
        self.start2 = self.len1 + self.pad
        joined = np.full(self.len1 + self.len2 + 2 * self.pad, self.sep,
                         dtype=np.int32)
        joined[: self.len1] = t1.codes
        joined[self.start2: self.start2 + self.len2] = t2.codes
        self.joined = joined
        self.index = LceIndex(joined)

        # per joined position: remaining length of the true suffix (0 on separators)
        lens = np.zeros(joined.size, dtype=np.int64)
        lens[: self.len1] = np.arange(self.len1, 0, -1)
        lens[self.start2: self.start2 + self.len2] = np.arange(self.len2, 0, -1)
        self.suffix_lengths = lens
        self.t1_positions = np.arange(self.len1, dtype=np.int64)
        self.t2_positions = self.start2 + np.arange(self.len2, dtype=np.int64)

    @classmethod
    def build(cls, t1: Text, t2: Text) -> "SuffixContext":
        return cls(t1, t2)

    @property
    def n(self) -> int:
        """The length scale: max(|T1|, |T2|)."""
        return self.pad

    def pos2_joined(self, j: int) -> int:
        return self.start2 + j

    def lce(self, i: int, j: int) -> int:
        return self.index.lce(i, j)

    def lcp_k(self, i: int, j: int, k: int) -> int:
        """Exact longest common prefix of T1[i:] and T2[j:] allowing <= k mismatches.

        Kangaroo jumps: at most k+1 LCE queries. The result is capped at the
        remaining overlap min(|T1|-i, |T2|-j).
        """
        if k < 0:
            raise ValueError("mismatch budget must be nonnegative")
        if not (0 <= i < self.len1 and 0 <= j < self.len2):
            raise IndexError(f"suffix start out of range: ({i}, {j})")
        cap = min(self.len1 - i, self.len2 - j)
        a = i
        b = self.start2 + j
        length = 0
        missed = 0
        while True:
            length += self.index.lce(a + length, b + length)
            if length >= cap:
                return cap
            missed += 1
            if missed > k:
                return length
            length += 1
            if length >= cap:
                return cap

    def lcp_k_batch(self, i: np.ndarray, j: np.ndarray, k: int) -> np.ndarray:
        """Vectorised lcp_k over aligned arrays of suffix starts."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        cap = np.minimum(self.len1 - i, self.len2 - j)
        a = i
        b = self.start2 + j
        length = np.zeros(i.size, dtype=np.int64)
        alive = np.arange(i.size)
        for _ in range(k + 1):
            if alive.size == 0:
                break
            d = self.index.lce_batch(a[alive] + length[alive],
                                     b[alive] + length[alive])
            length[alive] += d
            open_ = length[alive] < cap[alive]
            alive = alive[open_]
            length[alive] += 1  # jump over the mismatch
        # suffixes that used up the budget overshot by the final +1
        length[alive] -= 1
        np.minimum(length, cap, out=length)
        return length

    def mismatch_stream(self, i: int, j: int) -> Iterator[int]:
        """Strictly increasing 0-based offsets at which suffixes i, j of the
        joined string differ, produced lazily by repeated LCE jumps."""
        n = self.index.n
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"position out of range: ({i}, {j})")
        off = 0
        while i + off < n and j + off < n:
            off += self.index.lce(i + off, j + off)
            if i + off >= n or j + off >= n:
                return
            yield off
            off += 1


def lce(ctx, i: int, j: int) -> int:
    """Longest common prefix length of suffixes i and j of the joined string."""
    index = ctx.index if isinstance(ctx, SuffixContext) else ctx
    return index.lce(i, j)


def lcp_k_exact(ctx: SuffixContext, i: int, j: int, k: int) -> int:
    """Exact LCP of T1[i:] and T2[j:] with at most k mismatches."""
    return ctx.lcp_k(i, j, k)


def mismatch_stream(ctx: SuffixContext, i: int, j: int) -> Iterator[int]:
    return ctx.mismatch_stream(i, j)
