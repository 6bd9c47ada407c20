"""Exact longest-common-substring solvers and brute-force references.

lcs_k_diagonal is the production-quality quadratic solver (per alignment
diagonal, a two-pointer window holding at most k mismatches); lcs_k_bruteforce
is the independent exhaustive reference used as ground truth in tests.
Witness tie-breaking everywhere: smallest pos1, then smallest pos2.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from numba import njit

from .text import Match, SuffixContext, Text, hamming_distance


@njit(cache=True, nogil=True)
def _diag_core(a, b, k):
    n = a.size
    m = b.size
    best_len = 0
    best_i = 0
    best_j = 0
    q = np.empty(k + 2, dtype=np.int64)  # ring buffer of mismatch offsets
    qcap = k + 2
    for d in range(-(m - 1), n):
        i0 = d if d > 0 else 0
        j0 = -d if d < 0 else 0
        L = min(n - i0, m - j0)
        head = 0
        tail = 0
        s = 0
        for l in range(L):
            if a[i0 + l] != b[j0 + l]:
                if k == 0:
                    s = l + 1
                else:
                    if tail - head == k:  # queue full: evict oldest mismatch
                        s = q[head % qcap] + 1
                        head += 1
                    q[tail % qcap] = l
                    tail += 1
            cur = l - s + 1
            if cur > best_len or (
                cur == best_len
                and cur > 0
                and (i0 + s < best_i or (i0 + s == best_i and j0 + s < best_j))
            ):
                best_len = cur
                best_i = i0 + s
                best_j = j0 + s
    return best_len, best_i, best_j


@njit(cache=True, nogil=True)
def _brute_all_k(a, b):
    """best[c] = longest window with <= c mismatches; first witness in
    lexicographic (pos1, pos2) order."""
    n = a.size
    m = b.size
    kmax = min(n, m)
    best = np.zeros(kmax + 1, dtype=np.int64)
    bp1 = np.zeros(kmax + 1, dtype=np.int64)
    bp2 = np.zeros(kmax + 1, dtype=np.int64)
    for i in range(n):
        for j in range(m):
            L = min(n - i, m - j)
            miss = 0
            done = False
            for l in range(L):
                if a[i + l] != b[j + l]:
                    # window [0, l) from (i, j) is maximal for budget `miss`
                    if l > best[miss]:
                        best[miss] = l
                        bp1[miss] = i
                        bp2[miss] = j
                    miss += 1
                    if miss > kmax:
                        done = True
                        break
            if not done and L > best[miss]:
                best[miss] = L
                bp1[miss] = i
                bp2[miss] = j
    for c in range(1, kmax + 1):
        if best[c] < best[c - 1] or (
            best[c] == best[c - 1]
            and (bp1[c - 1] < bp1[c] or (bp1[c - 1] == bp1[c] and bp2[c - 1] < bp2[c]))
        ):
            best[c] = best[c - 1]
            bp1[c] = bp1[c - 1]
            bp2[c] = bp2[c - 1]
    return best, bp1, bp2


def _as_match(t1: Text, t2: Text, pos1: int, pos2: int, length: int) -> Match:
    if length == 0:
        return Match(0, 0, 0, 0)
    d = hamming_distance(t1.codes[pos1:pos1 + length], t2.codes[pos2:pos2 + length])
    return Match(int(pos1), int(pos2), int(length), d)


def lcs_exact(t1: Text, t2: Text, ctx: Optional[SuffixContext] = None) -> Match:
    """Maximum-length exact common substring.

    Scans adjacent suffix-array entries that come from opposite texts; the
    best pair is always realised at such a boundary.
    """
    if len(t1) == 0 or len(t2) == 0:
        raise ValueError("texts must be nonempty")
    if ctx is None:
        ctx = SuffixContext.build(t1, t2)
    idx = ctx.index
    sa = idx.sa
    lens = ctx.suffix_lengths
    in1 = sa < ctx.len1
    in2 = (sa >= ctx.start2) & (sa < ctx.start2 + ctx.len2)
    best = Match(0, 0, 0, 0)
    for r in range(1, idx.n):
        p, q = sa[r - 1], sa[r]
        if (in1[r - 1] and in2[r]) or (in2[r - 1] and in1[r]):
            if in2[r - 1]:
                p, q = q, p
            cand = min(int(idx.lcp[r]), int(lens[p]), int(lens[q]))
            pos1, pos2 = int(p), int(q - ctx.start2)
            if cand > best.length or (
                cand == best.length
                and cand > 0
                and (pos1, pos2) < (best.pos1, best.pos2)
            ):
                best = Match(pos1, pos2, cand, 0)
    return best


def lcs_k_diagonal(t1: Text, t2: Text, k: int,
                   ctx: Optional[SuffixContext] = None) -> Match:
    """Exact longest common substring with at most k mismatches, O(n*m) time
    and O(k) extra space per diagonal."""
    if k < 0:
        raise ValueError("mismatch budget must be nonnegative")
    length, p1, p2 = _diag_core(t1.codes, t2.codes, int(k))
    return _as_match(t1, t2, p1, p2, length)


def lcs_k_bruteforce(t1: Text, t2: Text, k: int) -> Match:
    """Exhaustive maximum over all aligned substring pairs (test-scale oracle)."""
    if k < 0:
        raise ValueError("mismatch budget must be nonnegative")
    best, bp1, bp2 = _brute_all_k(t1.codes, t2.codes)
    c = min(int(k), best.size - 1)
    return _as_match(t1, t2, bp1[c], bp2[c], best[c])


def lcs_k_bruteforce_all(t1: Text, t2: Text) -> np.ndarray:
    """Length of the optimum for every budget 0..min(|T1|,|T2|) at once."""
    best, _, _ = _brute_all_k(t1.codes, t2.codes)
    return best
