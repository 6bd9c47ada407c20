"""Hamming sketches of power-of-two substrings and bounded-mismatch prefix queries.

Each sketch coordinate is a random modular inner product whose disagreement
rate separates pairs at Hamming distance <= k from pairs at distance
>= (1+eps)k. Sketches are precomputed for every window whose length is a
power of two; a sketch of an arbitrary prefix is the coordinate-wise sum over
the binary decomposition of its length. Prefix queries walk candidate lengths
from the largest power of two down, keeping a prefix while its sketch distance
stays at or below the acceptance threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit, prange

from .modmath import find_prime
from .params import TrivialInstance
from .text import Text

# dense BLAS wins for thick vectors, per-position accumulation for thin ones
_SPARSE_K_CUTOFF = 8
_REP_CHUNK = 512


def levels_for(n: int) -> list[int]:
    """Window lengths 1, 2, 4, ..., 2^floor(log2 n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    return [1 << j for j in range(int(n).bit_length())]


@dataclass(frozen=True)
class SketchParams:
    """Derived sketch parameters for strings of length up to n."""

    n: int
    k: int
    eps: float
    p: int
    delta1: float   # coordinate disagreement bound at distance <= k
    delta2: float   # coordinate disagreement bound at distance >= (1+eps)k
    gamma: float    # (delta2 - delta1) / 2
    lam: int        # sketch length
    Delta: float    # acceptance threshold (delta1 + delta2)/2 * lam
    lambda_constant: float = 3.0


def derive_params(n: int, k: int, eps: float, sigma: Optional[int] = None,
                  p: Optional[int] = None,
                  lambda_constant: float = 3.0) -> SketchParams:
    """Compute the sketch parameter set.

    Raises TrivialInstance when (1+eps)*k >= n, in which case the full-length
    alignment is already within budget. Natural logarithm throughout.
    """
    if k < 1:
        raise ValueError("mismatch budget must be at least 1")
    if not 0 < eps < 2:
        raise ValueError("eps must lie in (0, 2)")
    if (1 + eps) * k >= n:
        raise TrivialInstance(n, k, eps)
    if p is None:
        if sigma is None:
            raise ValueError("provide either sigma or an explicit prime p")
        p = find_prime(max(2, sigma))
    base = 1.0 - 1.0 / (2 * k)
    frac = (p - 1) / p
    delta1 = frac * (1.0 - base ** k)
    delta2 = frac * (1.0 - base ** ((1 + eps) * k))
    gamma = (delta2 - delta1) / 2.0
    if gamma <= 0:
        raise ValueError("degenerate parameters: no separation between the bands")
    lam = max(1, math.ceil(lambda_constant * math.log(n) / gamma ** 2))
    Delta = (delta1 + delta2) / 2.0 * lam
    return SketchParams(n, k, eps, p, delta1, delta2, gamma, lam, Delta,
                        lambda_constant)


def _store_dtype(p: int):
    if p <= (1 << 8):
        return np.uint8
    if p <= (1 << 16):
        return np.uint16
    return np.uint32


def _work_dtype(ell: int, p: int, sigma: int):
    # float32 keeps integers exact below 2^24, float64 below 2^53
    if ell * (p - 1) * max(1, sigma - 1) < (1 << 24):
        return np.float32
    return np.float64


def sample_sketch_matrix(ell: int, lam: int, k: int, p: int, rng) -> np.ndarray:
    """Draw lam sketch vectors of length ell: each position is kept with
    probability 1/(2k) and then assigned a uniform value in [0, p)."""
    rng = np.random.default_rng(rng)
    mask = rng.random((lam, ell)) < 1.0 / (2 * k)
    vals = rng.integers(0, p, size=(lam, ell))
    return np.where(mask, vals, 0).astype(np.int64)


class SketchTable:
    """Sketches of every power-of-two-length window of two texts.

    Per text, all levels live in one flat buffer; rows[level] exposes each
    level as a zero-copy (windows, lam) view so a window's sketch is one
    contiguous row. Immutable after construction; queries are read-only.
    """

    def __init__(self, params: SketchParams, seed: int, len1: int, len2: int):
        self.params = params
        self.seed = seed
        self.len1 = len1
        self.len2 = len2
        self.levels = levels_for(params.n)
        self.level_arr = np.array(self.levels, dtype=np.int64)
        store = _store_dtype(params.p)
        self.bufs = []
        self.offsets = []
        for length in (len1, len2):
            cols = [max(0, length - ell + 1) for ell in self.levels]
            off = np.zeros(len(self.levels) + 1, dtype=np.int64)
            np.cumsum(np.array(cols, dtype=np.int64) * params.lam, out=off[1:])
            self.bufs.append(np.zeros(off[-1], dtype=store))
            self.offsets.append(off)
        self.rows: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for li, ell in enumerate(self.levels):
            pair = []
            for ti, length in enumerate((len1, len2)):
                cols = max(0, length - ell + 1)
                view = self.bufs[ti][self.offsets[ti][li]:
                                     self.offsets[ti][li + 1]]
                pair.append(view.reshape(cols, params.lam))
            self.rows[ell] = tuple(pair)

    def window_sketches(self, text_index: int, level: int) -> np.ndarray:
        return self.rows[level][text_index]

    def sketch_of_prefix(self, text_index: int, start: int, length: int) -> np.ndarray:
        """Sketch of the prefix of the given suffix, composed over the binary
        decomposition of `length`. O(lam * log n)."""
        limit = (self.len1, self.len2)[text_index] - start
        if not 0 <= length <= limit:
            raise ValueError(f"prefix length {length} out of range [0, {limit}]")
        p = self.params.p
        acc = np.zeros(self.params.lam, dtype=np.int64)
        off = 0
        for level in reversed(self.levels):
            if length & level:
                acc += self.rows[level][text_index][start + off]
                acc %= p
                off += level
        return acc


def _stream_for(seed: int, level_index: int, rep: int):
    base = np.random.Philox(np.random.SeedSequence([int(seed), int(level_index)]))
    return np.random.Generator(base.jumped(rep))


@njit(cache=True, nogil=True, parallel=True)
def _accumulate_thin(text, starts, positions, values, cols, p, out):
    """out[r] = windowed inner products of sparse vector r against text, mod p."""
    for r in prange(starts.size - 1):
        acc = np.zeros(cols, dtype=np.int64)
        for z in range(starts[r], starts[r + 1]):
            q = positions[z]
            v = values[z]
            for j in range(cols):
                acc[j] += v * text[q + j]
        for j in range(cols):
            out[r, j] = acc[j] % p


def build_sketch_table(t1: Text, t2: Text, params: SketchParams, seed: int,
                       method: str = "auto",
                       rep_chunk: int = _REP_CHUNK) -> SketchTable:
    """Precompute sketches of all power-of-two windows of both texts.

    Per level and repetition, the random vector stream is derived from the
    master seed by counter-based splitting, so tables are reproducible and
    chunks could be built in parallel. Inner products are exact: accumulation
    happens in integers, or in floats wide enough to hold every partial sum.
    """
    if method not in ("auto", "dense", "sparse"):
        raise ValueError(f"unknown method {method!r}")
    lam, p = params.lam, params.p
    table = SketchTable(params, seed, len(t1), len(t2))
    texts = (t1.codes, t2.codes)
    sigma = max(t1.sigma, 2)
    prob = 1.0 / (2 * params.k)
    use_thin = (method == "sparse" or
                (method == "auto" and params.k >= _SPARSE_K_CUTOFF))

    for li, ell in enumerate(table.levels):
        work = _work_dtype(ell, p, sigma)
        dense_mats = []
        if not use_thin:
            for codes in texts:
                cols = codes.size - ell + 1
                if cols <= 0:
                    dense_mats.append(None)
                else:
                    dense_mats.append(np.ascontiguousarray(
                        np.lib.stride_tricks.sliding_window_view(
                            codes.astype(work), ell)))
        texts64 = [codes.astype(np.int64) for codes in texts]

        for i0 in range(0, lam, rep_chunk):
            i1 = min(i0 + rep_chunk, lam)
            chunk = i1 - i0
            if use_thin:
                pos_parts, val_parts, counts = [], [], []
                for i in range(i0, i1):
                    g = _stream_for(seed, li, i)
                    mask = g.random(ell) < prob
                    pos = np.nonzero(mask)[0]
                    vals = g.integers(0, p, size=pos.size)
                    keep = vals != 0
                    pos_parts.append(pos[keep])
                    val_parts.append(vals[keep])
                    counts.append(int(keep.sum()))
                starts = np.zeros(chunk + 1, dtype=np.int64)
                np.cumsum(np.array(counts, dtype=np.int64), out=starts[1:])
                positions = (np.concatenate(pos_parts) if pos_parts
                             else np.empty(0, np.int64)).astype(np.int64)
                values = (np.concatenate(val_parts) if val_parts
                          else np.empty(0, np.int64)).astype(np.int64)
                for ti in range(2):
                    cols = texts[ti].size - ell + 1
                    if cols <= 0:
                        continue
                    out = np.empty((chunk, cols), dtype=np.int64)
                    _accumulate_thin(texts64[ti], starts, positions, values,
                                     cols, p, out)
                    table.rows[ell][ti][:, i0:i1] = out.T
            else:
                rchunk = np.zeros((chunk, ell), dtype=work)
                for i in range(i0, i1):
                    g = _stream_for(seed, li, i)
                    mask = g.random(ell) < prob
                    pos = np.nonzero(mask)[0]
                    vals = g.integers(0, p, size=pos.size)
                    rchunk[i - i0, pos] = vals
                rt = np.ascontiguousarray(rchunk.T)             # (ell, chunk)
                for ti in range(2):
                    if dense_mats[ti] is None:
                        continue
                    prod = dense_mats[ti] @ rt                  # (cols, chunk)
                    vals = np.rint(prod).astype(np.int64) % p
                    table.rows[ell][ti][:, i0:i1] = vals
    return table


def sketch_of_prefix(table: SketchTable, text_index: int, start: int,
                     length: int) -> np.ndarray:
    return table.sketch_of_prefix(text_index, start, length)


@njit(cache=True, nogil=True, parallel=True)
def _walk_kernel(buf1, off1, buf2, off2, levels, lam, p, delta_int,
                 s1, s2, cap, floor, out):
    B = s1.size
    nl = levels.size
    for b in prange(B):
        cur1 = np.zeros(lam, dtype=np.int64)
        cur2 = np.zeros(lam, dtype=np.int64)
        d = 0
        for li in range(nl - 1, -1, -1):
            level = levels[li]
            if floor >= 0 and d + 2 * level - 1 <= floor:
                break
            if d + level > cap[b]:
                continue
            o1 = off1[li] + (s1[b] + d) * lam
            o2 = off2[li] + (s2[b] + d) * lam
            dist = 0
            ok = True
            for j in range(lam):
                v1 = cur1[j] + buf1[o1 + j]
                if v1 >= p:
                    v1 -= p
                v2 = cur2[j] + buf2[o2 + j]
                if v2 >= p:
                    v2 -= p
                if v1 != v2:
                    dist += 1
                    if dist > delta_int:
                        ok = False
                        break
            if ok:
                for j in range(lam):
                    v1 = cur1[j] + buf1[o1 + j]
                    if v1 >= p:
                        v1 -= p
                    cur1[j] = v1
                    v2 = cur2[j] + buf2[o2 + j]
                    if v2 >= p:
                        v2 -= p
                    cur2[j] = v2
                d += level
        out[b] = d


def lcp_approx_k_batch(table: SketchTable, starts1, starts2,
                       best_floor: Optional[int] = None) -> np.ndarray:
    """Bounded-mismatch prefix lengths for aligned arrays of suffix pairs.

    Walks candidate extensions from the largest power of two downward; a
    candidate is kept when the sketch Hamming distance of the extended
    prefixes is at most the acceptance threshold. Results never exceed the
    remaining overlap.

    With best_floor set, pairs that provably cannot exceed it are abandoned
    early; their reported value is a lower bound only (the caller must use it
    solely for maximisation).
    """
    s1 = np.ascontiguousarray(starts1, dtype=np.int64)
    s2 = np.ascontiguousarray(starts2, dtype=np.int64)
    cap = np.minimum(table.len1 - s1, table.len2 - s2)
    if cap.size and (cap.min() < 1 or s1.min() < 0 or s2.min() < 0):
        raise ValueError("suffix start out of range")
    out = np.empty(s1.size, dtype=np.int64)
    if s1.size == 0:
        return out
    _walk_kernel(table.bufs[0], table.offsets[0],
                 table.bufs[1], table.offsets[1],
                 table.level_arr, table.params.lam, table.params.p,
                 int(math.floor(table.params.Delta)),
                 s1, s2, cap, -1 if best_floor is None else int(best_floor),
                 out)
    return out


def lcp_approx_k_batch_reference(table: SketchTable, starts1, starts2) -> np.ndarray:
    """Pure-numpy reference for the walk, used to cross-check the kernel."""
    params = table.params
    p = params.p
    s1 = np.asarray(starts1, dtype=np.int64)
    s2 = np.asarray(starts2, dtype=np.int64)
    cap = np.minimum(table.len1 - s1, table.len2 - s2)
    B = s1.size
    d = np.zeros(B, dtype=np.int64)
    cur1 = np.zeros((B, params.lam), dtype=np.int64)
    cur2 = np.zeros((B, params.lam), dtype=np.int64)
    for level in reversed(table.levels):
        idx = np.nonzero(d + level <= cap)[0]
        if idx.size == 0:
            continue
        c1 = table.rows[level][0][s1[idx] + d[idx]]
        c2 = table.rows[level][1][s2[idx] + d[idx]]
        v1 = (cur1[idx] + c1) % p
        v2 = (cur2[idx] + c2) % p
        acc = np.count_nonzero(v1 != v2, axis=1) <= params.Delta
        up = idx[acc]
        cur1[up] = v1[acc]
        cur2[up] = v2[acc]
        d[up] += level
    return d


def lcp_approx_k(table: SketchTable, s1: int, s2: int) -> int:
    """Bounded-mismatch prefix length for one pair of suffix starts: a value
    between the exact budget-k and budget-(1+eps)k prefix lengths, except with
    small per-query probability."""
    return int(lcp_approx_k_batch(table, [s1], [s2])[0])
