"""Projection-based locality-sensitive hashing over suffixes.

A base function projects the joined string's suffixes onto a sorted multiset
of m positions; a hash function is an unordered t-tuple of base functions
from one subfamily. Instead of materialised tries, each preprocessed base
function keeps the suffixes sorted by projected string together with the
projected-LCP array of adjacent entries and a range-minimum table: prefix
classes at any cutoff level fall out as contiguous runs.

Two preprocessing paths exist: layered fingerprint refinement (one modular
correlation per layer of sqrt(m) positions) and comparison sorting whose
comparator walks the mismatch stream of two suffixes until a differing
position lands in the projection multiset. Both produce the identical order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

import numpy as np
from numba import njit

from .modmath import MAX_MODULUS, correlate_mod, find_prime
from .params import TrivialInstance
from .text import SuffixContext

# subfamily count multiplier: exp(3) * ln 4, from the per-subfamily success
# bound Omega(1/t!) with constant 1/e^3 and a target phase failure of 1/4
DEFAULT_S_FACTOR = math.exp(3) * math.log(4)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class LshParams:
    n: int
    k: int
    eps: float
    p1: float       # 1 - k/n
    p2: float       # 1 - (1+eps)k/n
    rho: float      # log p1 / log p2
    t: int          # tuple arity: ceil(sqrt(log2 n))
    m: int          # positions per base function
    w: int          # base functions per subfamily
    s: int          # subfamilies
    family_size: int  # s * C(w, t)


def derive_lsh_params(n: int, k: int, eps: float,
                      s_factor: float = DEFAULT_S_FACTOR) -> LshParams:
    if k < 1:
        raise ValueError("mismatch budget must be at least 1")
    if (1 + eps) * k >= n:
        raise TrivialInstance(n, k, eps)
    p1 = 1.0 - k / n
    p2 = 1.0 - (1 + eps) * k / n
    rho = math.log(p1) / math.log(p2)
    t = math.ceil(math.sqrt(math.log2(n)))
    m = math.ceil(math.log(1.0 / n) / math.log(p2) / t)
    w = t * t + math.ceil(p1 ** (-m))
    s = max(1, math.ceil(s_factor * math.factorial(t)))
    return LshParams(n, k, eps, p1, p2, rho, t, m, w, s,
                     s * math.comb(w, t))


def choose_method(m: int, n: int) -> str:
    """Pick the cheaper preprocessing path: layered fingerprints cost
    ~sqrt(m) passes, comparison sorting ~n log n / m per comparison."""
    return "fingerprint" if math.sqrt(m) <= n * math.log2(max(n, 2)) / m else "kangaroo"


# ---------------------------------------------------------------------------
# projections


@dataclass(frozen=True)
class ProjectionFunction:
    """A sorted multiset of m positions in [1, n], with O(1) membership."""

    n: int
    positions: np.ndarray  # sorted, 1-based, duplicates preserved
    mult: np.ndarray       # multiplicity per position, length n+1

    @property
    def m(self) -> int:
        return int(self.positions.size)

    def count_leq(self, ell: int) -> int:
        """Positions <= ell, counting multiplicity."""
        return int(np.searchsorted(self.positions, ell, side="right"))


def sample_projection(n: int, m: int, rng) -> ProjectionFunction:
    """m positions drawn i.i.d. uniformly from [1, n], with replacement."""
    if m < 1:
        raise ValueError("need at least one position")
    rng = np.random.default_rng(rng)
    positions = np.sort(rng.integers(1, n + 1, size=m))
    mult = np.bincount(positions, minlength=n + 1).astype(np.int64)
    return ProjectionFunction(n, positions.astype(np.int64), mult)


def project(u: ProjectionFunction, s, ell: Optional[int] = None,
            gap: int = -1) -> np.ndarray:
    """Characters of s at u's positions (sorted order); positions beyond the
    string, or beyond the cutoff ell, yield the gap symbol."""
    codes = np.asarray(getattr(s, "codes", s))
    limit = len(codes) if ell is None else min(len(codes), ell)
    out = np.full(u.m, gap, dtype=np.int64)
    ok = u.positions <= limit
    out[ok] = codes[u.positions[ok] - 1]
    return out


# ---------------------------------------------------------------------------
# per-base-function suffix order ("implicit trie")


def _suffix_listing(ctx: SuffixContext):
    suffixes = np.concatenate([ctx.t1_positions, ctx.t2_positions])
    lengths = ctx.suffix_lengths[suffixes]
    flags = np.zeros(suffixes.size, dtype=np.int8)
    flags[ctx.len1:] = 1
    return suffixes, lengths, flags


class HashOrder:
    """Suffixes sorted by one projected string, with projected-LCP + RMQ."""

    def __init__(self, u: ProjectionFunction, ctx: SuffixContext,
                 order: np.ndarray, plcp: np.ndarray, method: str,
                 fingerprint_collisions: int = 0):
        from .text import _floor_log_table, _sparse_table

        self.u = u
        self.ctx = ctx
        self.order = order         # joined positions
        self.plcp = plcp           # plcp[i] = projected lcp(order[i-1], order[i])
        self.method = method
        self.fingerprint_collisions = fingerprint_collisions
        self.rank_in_order = np.full(ctx.joined.size, -1, dtype=np.int64)
        self.rank_in_order[order] = np.arange(order.size, dtype=np.int64)
        self.st = _sparse_table(plcp)
        self.logs = _floor_log_table(max(1, plcp.size))
        self._class_cache: dict[int, np.ndarray] = {}

    @property
    def m(self) -> int:
        return self.u.m

    def projected_lcp(self, a: int, b: int) -> int:
        """Projected-character LCP of the projections of suffixes a, b."""
        if a == b:
            return self.u.m
        ra, rb = self.rank_in_order[a], self.rank_in_order[b]
        if ra < 0 or rb < 0:
            raise ValueError("not a tracked suffix position")
        if ra > rb:
            ra, rb = rb, ra
        lo, hi = ra + 1, rb
        k = self.logs[hi - lo + 1]
        return int(min(self.st[k, lo], self.st[k, hi - (1 << k) + 1]))

    def projected_lcp_batch(self, a, b) -> np.ndarray:
        """Vectorised projected_lcp over aligned arrays of joined positions."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        ra = self.rank_in_order[a]
        rb = self.rank_in_order[b]
        lo = np.minimum(ra, rb) + 1
        hi = np.maximum(ra, rb)
        same = a == b
        lo = np.where(same, 1, lo)
        hi = np.maximum(hi, lo)
        k = self.logs[hi - lo + 1]
        out = np.minimum(self.st[k, lo], self.st[k, hi - (1 << k) + 1])
        return np.where(same, self.u.m, out)

    def class_ids_in_order(self, ell: int) -> np.ndarray:
        """Run index of every order slot for the prefix classes at level ell."""
        cached = self._class_cache.get(ell)
        if cached is not None:
            return cached
        c = self.u.count_leq(ell)
        boundary = np.ones(self.order.size, dtype=bool)
        if c > 0:
            boundary[1:] = self.plcp[1:] < c
        else:
            boundary[1:] = False
        ids = np.cumsum(boundary) - 1
        self._class_cache[ell] = ids
        return ids

    def class_ids(self, ell: int) -> np.ndarray:
        """Class id per suffix in canonical listing order (T1 starts, then T2)."""
        ids_order = self.class_ids_in_order(ell)
        by_pos = np.empty(self.ctx.joined.size, dtype=np.int64)
        by_pos[self.order] = ids_order
        suffixes, _, _ = _suffix_listing(self.ctx)
        return by_pos[suffixes]


def _adjacent_projected_plcp(u: ProjectionFunction, ctx: SuffixContext,
                             order: np.ndarray) -> np.ndarray:
    """plcp[i] = projected LCP of order[i-1] and order[i] (plcp[0] = 0)."""
    joined = ctx.joined
    npairs = order.size - 1
    res = np.full(npairs, u.m, dtype=np.int64)
    alive = np.arange(npairs)
    a = order[:-1]
    b = order[1:]
    pos0 = 0
    chunk = 16
    while alive.size and pos0 < u.m:
        offs = u.positions[pos0: pos0 + chunk] - 1
        am = joined[a[alive][:, None] + offs[None, :]]
        bm = joined[b[alive][:, None] + offs[None, :]]
        neq = am != bm
        hit = neq.any(axis=1)
        first = np.argmax(neq, axis=1)
        res[alive[hit]] = pos0 + first[hit]
        alive = alive[~hit]
        pos0 += offs.size
        chunk *= 2
    plcp = np.zeros(order.size, dtype=np.int64)
    plcp[1:] = res
    return plcp


# ---- path 1: layered Karp-Rabin fingerprints --------------------------------


def preprocess_u_fingerprint(u: ProjectionFunction, ctx: SuffixContext,
                             fp_prime: Optional[int] = None,
                             seed: int = 0) -> HashOrder:
    """Order the suffixes by layered fingerprint refinement.

    The positions are split into ~sqrt(m) consecutive blocks; each layer
    computes Karp-Rabin fingerprints of all block projections with a single
    modular correlation against the joined string, refines the classes by
    fingerprint, and orders sibling groups by comparing actual characters.
    Group members are verified against their representative, so the final
    order is exact even on a fingerprint collision (counted on the result).
    """
    n = ctx.n
    min_prime = n ** 5
    if fp_prime is None:
        if min_prime > MAX_MODULUS:
            raise ValueError(
                f"fingerprint modulus needs >= n^5 = {min_prime}, beyond the "
                "word size; use the kangaroo path")
        fp_prime = find_prime(min_prime)
    if fp_prime < min_prime:
        raise ValueError(f"fingerprint prime must be >= n^5 = {min_prime}")
    joined = ctx.joined
    suffixes, lengths, flags = _suffix_listing(ctx)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5eed]))

    m = u.m
    bsize = max(1, math.isqrt(m - 1) + 1)  # ceil(sqrt(m))
    cls = np.zeros(suffixes.size, dtype=np.int64)
    collisions = 0
    for b0 in range(0, m, bsize):
        offs = u.positions[b0: b0 + bsize] - 1
        r = int(rng.integers(1, fp_prime))
        chi = np.zeros(n, dtype=np.uint64)
        acc = 1
        for q in range(offs.size):
            acc = acc * r % fp_prime
            chi[offs[q]] = (int(chi[offs[q]]) + acc) % fp_prime
        phi_all = correlate_mod(chi, joined, fp_prime)
        phi = phi_all[suffixes]

        order1 = np.lexsort((phi, cls))
        cs = cls[order1]
        ps = phi[order1]
        newgrp = np.zeros(order1.size, dtype=np.int64)
        if order1.size > 1:
            np.cumsum((cs[1:] != cs[:-1]) | (ps[1:] != ps[:-1]), out=newgrp[1:])
        first = np.concatenate(([0], np.nonzero(np.diff(newgrp))[0] + 1))
        reps = order1[first]
        repmat = joined[suffixes[reps][:, None] + offs[None, :]]
        # verify every member matches its group representative
        memmat = joined[suffixes[order1][:, None] + offs[None, :]]
        bad = (memmat != repmat[newgrp]).any(axis=1)
        if bad.any():
            collisions += int(np.unique(newgrp[bad]).size)
            # exact fallback: refine by the characters themselves
            keys = tuple(memmat[:, j] for j in range(offs.size - 1, -1, -1))
            order2 = order1[np.lexsort(keys + (cs,))]
            mem2 = joined[suffixes[order2][:, None] + offs[None, :]]
            cs2 = cls[order2]
            grp = np.zeros(order2.size, dtype=np.int64)
            np.cumsum((cs2[1:] != cs2[:-1]) |
                      (mem2[1:] != mem2[:-1]).any(axis=1), out=grp[1:])
            cls[order2] = grp
            continue
        parent = cs[first]
        keys = tuple(repmat[:, j] for j in range(offs.size - 1, -1, -1))
        grp_sort = np.lexsort(keys + (parent,))
        grp_rank = np.empty(grp_sort.size, dtype=np.int64)
        grp_rank[grp_sort] = np.arange(grp_sort.size, dtype=np.int64)
        cls[order1] = grp_rank[newgrp]

    final = np.lexsort((flags, lengths, cls))
    order = suffixes[final]
    plcp = _adjacent_projected_plcp(u, ctx, order)
    return HashOrder(u, ctx, order, plcp, "fingerprint", collisions)


# ---- path 2: kangaroo comparison sort ---------------------------------------


@njit(cache=True, nogil=True)
def _kangaroo_cmp(a, b, la, lb, fa, fb, joined, rank, st, logs, mult,
                  horizon, probe_cap):
    N = joined.size
    off = 0
    probes = 0
    while off < horizon:
        ia = a + off
        ib = b + off
        if ia >= N or ib >= N:
            break
        if ia == ib:
            d = N - ia
        else:
            ra = rank[ia]
            rb = rank[ib]
            if ra > rb:
                ra, rb = rb, ra
            lo = ra + 1
            hi = rb
            kk = logs[hi - lo + 1]
            v1 = st[kk, lo]
            v2 = st[kk, hi - (1 << kk) + 1]
            d = v1 if v1 < v2 else v2
        off += d
        if off >= horizon or a + off >= N or b + off >= N:
            break
        if mult[off + 1] > 0:
            ca = joined[a + off]
            cb = joined[b + off]
            return -1 if ca < cb else 1
        probes += 1
        if probe_cap > 0 and probes >= probe_cap:
            break
        off += 1
    if la != lb:
        return -1 if la < lb else 1
    if fa != fb:
        return -1 if fa < fb else 1
    return 0


@njit(cache=True, nogil=True)
def _kangaroo_sort(suffixes, lengths, flags, joined, rank, st, logs, mult,
                   horizon, probe_cap):
    n_items = suffixes.size
    idx = np.arange(n_items)
    buf = np.empty(n_items, dtype=np.int64)
    width = 1
    while width < n_items:
        lo = 0
        while lo < n_items:
            mid = min(lo + width, n_items)
            hi = min(lo + 2 * width, n_items)
            a = lo
            b = mid
            o = lo
            while a < mid and b < hi:
                ia = idx[a]
                ib = idx[b]
                c = _kangaroo_cmp(suffixes[ia], suffixes[ib],
                                  lengths[ia], lengths[ib],
                                  flags[ia], flags[ib],
                                  joined, rank, st, logs, mult,
                                  horizon, probe_cap)
                if c <= 0:
                    buf[o] = ia
                    a += 1
                else:
                    buf[o] = ib
                    b += 1
                o += 1
            while a < mid:
                buf[o] = idx[a]
                a += 1
                o += 1
            while b < hi:
                buf[o] = idx[b]
                b += 1
                o += 1
            lo = hi
        idx[:] = buf
        width *= 2
    return idx


def preprocess_u_kangaroo(u: ProjectionFunction, ctx: SuffixContext,
                          probe_cap: Optional[int] = None) -> HashOrder:
    """Order the suffixes by a comparison sort whose comparator walks the
    mismatch stream until a differing position belongs to the projection.

    By default the walk runs to exhaustion, making every comparison exact.
    probe_cap > 0 restores the probabilistic cap on examined mismatch
    positions (treat as equal beyond), trading exactness for a hard bound.
    """
    suffixes, lengths, flags = _suffix_listing(ctx)
    idx = ctx.index
    perm = _kangaroo_sort(suffixes, lengths, flags.astype(np.int64),
                          idx.codes, idx.rank, idx.st, idx.logs,
                          u.mult, ctx.n, int(probe_cap or 0))
    order = suffixes[perm]
    plcp = _adjacent_projected_plcp(u, ctx, order)
    return HashOrder(u, ctx, order, plcp, "kangaroo")


def preprocess_u(u: ProjectionFunction, ctx: SuffixContext,
                 method: str = "auto",
                 probe_cap: Optional[int] = None,
                 fp_prime: Optional[int] = None,
                 seed: int = 0) -> HashOrder:
    if method == "auto":
        method = choose_method(u.m, ctx.n)
        if method == "fingerprint" and ctx.n ** 5 > MAX_MODULUS:
            method = "kangaroo"  # fingerprint modulus would overflow the word
    if method == "fingerprint":
        return preprocess_u_fingerprint(u, ctx, fp_prime, seed)
    if method == "kangaroo":
        return preprocess_u_kangaroo(u, ctx, probe_cap)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# combined order for one hash function (a t-tuple of base functions)


class CombinedOrder:
    """Suffixes sorted by the interleaved projection of a t-tuple."""

    def __init__(self, parts: Sequence[HashOrder]):
        from .text import _floor_log_table, _sparse_table

        if not parts:
            raise ValueError("need at least one base order")
        self.parts = tuple(parts)
        self.ctx = parts[0].ctx
        self.mt = sum(ho.m for ho in parts)
        suffixes, lengths, flags = _suffix_listing(self.ctx)
        import functools

        def cmp(i, j):
            return self._compare(suffixes[i], suffixes[j],
                                 lengths[i], lengths[j],
                                 flags[i], flags[j])

        perm = sorted(range(suffixes.size), key=functools.cmp_to_key(cmp))
        self.order = suffixes[np.array(perm, dtype=np.int64)]
        plcp = np.zeros(self.order.size, dtype=np.int64)
        for r in range(1, self.order.size):
            plcp[r] = self._pair_plcp(self.order[r - 1], self.order[r])
        self.plcp = plcp
        self.rank_in_order = np.full(self.ctx.joined.size, -1, dtype=np.int64)
        self.rank_in_order[self.order] = np.arange(self.order.size, dtype=np.int64)
        self.st = _sparse_table(plcp)
        self.logs = _floor_log_table(max(1, plcp.size))

    def _first_diff_position(self, a: int, b: int) -> Optional[int]:
        best = None
        for ho in self.parts:
            l = ho.projected_lcp(a, b)
            if l < ho.m:
                pos = int(ho.u.positions[l])
                if best is None or pos < best:
                    best = pos
        return best

    def _compare(self, a, b, la, lb, fa, fb) -> int:
        if a == b:
            return 0
        pos = self._first_diff_position(a, b)
        if pos is not None:
            ca = self.ctx.joined[a + pos - 1]
            cb = self.ctx.joined[b + pos - 1]
            return -1 if ca < cb else 1
        if la != lb:
            return -1 if la < lb else 1
        if fa != fb:
            return -1 if fa < fb else 1
        return 0

    def _pair_plcp(self, a: int, b: int) -> int:
        pos = self._first_diff_position(a, b)
        if pos is None:
            return self.mt
        return sum(ho.u.count_leq(pos - 1) for ho in self.parts)

    def cnt(self, ell: int) -> int:
        return sum(ho.u.count_leq(ell) for ho in self.parts)

    def projected_lcp(self, a: int, b: int) -> int:
        if a == b:
            return self.mt
        ra, rb = self.rank_in_order[a], self.rank_in_order[b]
        if ra > rb:
            ra, rb = rb, ra
        lo, hi = ra + 1, rb
        k = self.logs[hi - lo + 1]
        return int(min(self.st[k, lo], self.st[k, hi - (1 << k) + 1]))


def build_hash_order(parts: Sequence[HashOrder]) -> CombinedOrder:
    """Combined order for the tuple; comparisons merge the per-part projected
    LCPs through the earliest differing position."""
    return CombinedOrder(parts)


@dataclass(frozen=True)
class CollisionRange:
    """Contiguous interval of the combined order colliding with a fixed
    suffix at a given level. Length filtering happens when counting."""

    lo: int    # inclusive
    hi: int    # inclusive; empty when hi < lo
    level: int

    @property
    def size(self) -> int:
        return max(0, self.hi - self.lo + 1)


def neighbourhood(co: CombinedOrder, s: int, ell: int) -> CollisionRange:
    """Maximal order interval whose entries agree with suffix s on all
    projection positions <= ell. Empty if s is shorter than ell."""
    if co.ctx.suffix_lengths[s] < ell:
        return CollisionRange(0, -1, ell)
    c = co.cnt(ell)
    r = int(co.rank_in_order[s])
    if r < 0:
        raise ValueError("not a tracked suffix position")
    n_items = co.order.size

    def plcp_min(lo, hi):  # min of plcp[lo..hi]
        k = co.logs[hi - lo + 1]
        return int(min(co.st[k, lo], co.st[k, hi - (1 << k) + 1]))

    lo = r
    step = 1
    while lo > 0 and plcp_min(lo, r) >= c:
        lo = max(0, lo - step)
        step *= 2
    # binary search smallest lo with min plcp(lo+1..r) >= c
    a, b = lo, r
    while a < b:
        mid = (a + b) // 2
        if mid == r or plcp_min(mid + 1, r) >= c:
            b = mid
        else:
            a = mid + 1
    lo = a
    hi = r
    step = 1
    probe = r
    while probe < n_items - 1 and plcp_min(r + 1, probe + 1) >= c:
        probe = min(n_items - 1, probe + step)
        step *= 2
    a, b = r, probe
    while a < b:
        mid = (a + b + 1) // 2
        if plcp_min(r + 1, mid) >= c:
            a = mid
        else:
            b = mid - 1
    hi = a
    return CollisionRange(int(lo), int(hi), ell)


# ---------------------------------------------------------------------------
# the full family and its collision machinery


def _combine_ids(parts: list[np.ndarray]) -> np.ndarray:
    cur = parts[0]
    for nxt in parts[1:]:
        key = cur * (int(nxt.max()) + 1) + nxt
        _, cur = np.unique(key, return_inverse=True)
    return cur


@dataclass
class Subfamily:
    orders: list[HashOrder]
    tuples: np.ndarray  # (B, t) sorted index tuples into orders


class LshFamily:
    """All hash functions of every subfamily, with collision counting,
    threshold search, enumeration, and uniform sampling at any level."""

    def __init__(self, ctx: SuffixContext, params: LshParams,
                 subfamilies: list[Subfamily]):
        self.ctx = ctx
        self.params = params
        self.subfamilies = subfamilies
        self.size = sum(sf.tuples.shape[0] for sf in subfamilies)
        suffixes, lengths, flags = _suffix_listing(ctx)
        self._suffixes = suffixes
        self._lengths = lengths
        self._is_t2 = flags.astype(bool)

    def hash_functions(self) -> Iterator[tuple[int, np.ndarray]]:
        for si, sf in enumerate(self.subfamilies):
            for tup in sf.tuples:
                yield si, tup

    def _tuple_ids(self, sf: Subfamily, tup, ell: int) -> np.ndarray:
        return _combine_ids([sf.orders[int(r)].class_ids(ell) for r in tup])

    def collision_count(self, ell: int) -> int:
        """|C_ell|: triples (S from T1, S' from T2, h) with both suffixes of
        length >= ell agreeing on every projection position <= ell."""
        mask1 = ~self._is_t2 & (self._lengths >= ell)
        mask2 = self._is_t2 & (self._lengths >= ell)
        if not mask1.any() or not mask2.any():
            return 0
        total = 0
        for sf in self.subfamilies:
            for tup in sf.tuples:
                ids = self._tuple_ids(sf, tup, ell)
                nclass = int(ids.max()) + 1
                n1 = np.bincount(ids[mask1], minlength=nclass)
                n2 = np.bincount(ids[mask2], minlength=nclass)
                total += int(n1 @ n2)
        return total

    def default_bound(self) -> int:
        return 2 * self.ctx.n * self.size

    def find_threshold(self, bound: Optional[int] = None) -> int:
        """Largest ell with |C_ell| >= bound (default bound 2 n |H|), or -1."""
        if bound is None:
            bound = self.default_bound()
        n = self.ctx.n
        if self.collision_count(0) < bound:
            return -1
        lo, hi = 0, n
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.collision_count(mid) >= bound:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def _tuple_pairs(self, sf: Subfamily, tup, ell: int):
        """Cross products (T1 suffix, T2 suffix) per class, as joined positions."""
        ids = self._tuple_ids(sf, tup, ell)
        mask1 = ~self._is_t2 & (self._lengths >= ell)
        mask2 = self._is_t2 & (self._lengths >= ell)
        a_ids = ids[mask1]
        b_ids = ids[mask2]
        a_pos = self._suffixes[mask1]
        b_pos = self._suffixes[mask2]
        nclass = int(ids.max()) + 1 if ids.size else 0
        n2 = np.bincount(b_ids, minlength=nclass)
        ordb = np.argsort(b_ids, kind="stable")
        b_sorted = b_pos[ordb]
        off2 = np.zeros(nclass + 1, dtype=np.int64)
        np.cumsum(n2, out=off2[1:])
        reps = n2[a_ids]                      # pairs contributed per T1 member
        total = int(reps.sum())
        if total == 0:
            return (np.empty(0, np.int64), np.empty(0, np.int64))
        pos1 = np.repeat(a_pos, reps)
        starts = np.zeros(a_pos.size, dtype=np.int64)
        np.cumsum(reps[:-1], out=starts[1:])
        within = np.arange(total, dtype=np.int64) - np.repeat(starts, reps)
        pos2 = b_sorted[np.repeat(off2[a_ids], reps) + within]
        return pos1, pos2

    def enumerate_pairs(self, ell: int):
        """All triples of C_ell, flattened: (pos1 array, pos2 array, h index)."""
        outs1, outs2, outsh = [], [], []
        h_index = 0
        for sf in self.subfamilies:
            for tup in sf.tuples:
                p1, p2 = self._tuple_pairs(sf, tup, ell)
                outs1.append(p1)
                outs2.append(p2)
                outsh.append(np.full(p1.size, h_index, dtype=np.int64))
                h_index += 1
        if not outs1:
            return (np.empty(0, np.int64),) * 3
        return (np.concatenate(outs1), np.concatenate(outs2),
                np.concatenate(outsh))

    def sample(self, ell: int, rng):
        """Uniformly random triple of C_ell: (pos1, pos2, h index)."""
        rng = np.random.default_rng(rng)
        totals = []
        for sf in self.subfamilies:
            for tup in sf.tuples:
                ids = self._tuple_ids(sf, tup, ell)
                mask1 = ~self._is_t2 & (self._lengths >= ell)
                mask2 = self._is_t2 & (self._lengths >= ell)
                nclass = int(ids.max()) + 1 if ids.size else 0
                n1 = np.bincount(ids[mask1], minlength=nclass)
                n2 = np.bincount(ids[mask2], minlength=nclass)
                totals.append(int(n1 @ n2))
        grand = sum(totals)
        if grand == 0:
            raise ValueError(f"collision family at level {ell} is empty")
        g = int(rng.integers(0, grand))
        h_index = 0
        for sf in self.subfamilies:
            for tup in sf.tuples:
                if g >= totals[h_index]:
                    g -= totals[h_index]
                    h_index += 1
                    continue
                p1, p2 = self._tuple_pairs(sf, tup, ell)
                return int(p1[g]), int(p2[g]), h_index
        raise AssertionError("unreachable")


def enumerate_collisions(family: LshFamily, ell: int):
    """Generator over every triple (pos1, pos2, h index) of C_ell."""
    p1, p2, h = family.enumerate_pairs(ell)
    for i in range(p1.size):
        yield int(p1[i]), int(p2[i]), int(h[i])


def build_family(ctx: SuffixContext, params: LshParams, seed: int,
                 subfamilies: Optional[int] = None,
                 tuples_per_subfamily: Optional[int] = None,
                 method: str = "auto",
                 probe_cap: Optional[int] = None,
                 threads: int = 1) -> LshFamily:
    """Sample and preprocess the base functions of every subfamily and choose
    the hash tuples.

    subfamilies / tuples_per_subfamily cap the family for desk-scale runs;
    None means the full derived counts (s subfamilies, all C(w, t) tuples).
    """
    s = params.s if subfamilies is None else max(1, int(subfamilies))
    root = np.random.SeedSequence([int(seed), 0xfa317])
    sub_seeds = root.spawn(s)
    subs = []
    for si in range(s):
        ss = sub_seeds[si]
        child = ss.spawn(params.w + 2)
        us = [sample_projection(ctx.n, params.m, child[r])
              for r in range(params.w)]
        def _prep(r_u):
            r, u = r_u
            return preprocess_u(u, ctx, method, probe_cap,
                                seed=seed + 1009 * si + r)

        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                orders = list(pool.map(_prep, enumerate(us)))
        else:
            orders = [_prep(ru) for ru in enumerate(us)]
        all_count = math.comb(params.w, params.t)
        budget = all_count if tuples_per_subfamily is None else min(
            all_count, int(tuples_per_subfamily))
        if budget >= all_count:
            tuples = np.array(list(combinations(range(params.w), params.t)),
                              dtype=np.int64)
        else:
            rng = np.random.default_rng(child[params.w])
            seen = set()
            rows = []
            while len(rows) < budget:
                tup = tuple(sorted(rng.choice(params.w, size=params.t,
                                              replace=False).tolist()))
                if tup not in seen:
                    seen.add(tup)
                    rows.append(tup)
            tuples = np.array(rows, dtype=np.int64)
        subs.append(Subfamily(orders, tuples))
    return LshFamily(ctx, params, subs)


# route-a equivalents over explicit combined orders (contract surface) --------


def collision_count_orders(orders: Sequence[CombinedOrder], ell: int) -> int:
    """|C_ell| computed from per-hash combined orders via contiguous runs."""
    total = 0
    for co in orders:
        ctx = co.ctx
        c = co.cnt(ell)
        boundary = np.ones(co.order.size, dtype=bool)
        boundary[1:] = co.plcp[1:] < c
        runs = np.cumsum(boundary) - 1
        lens = ctx.suffix_lengths[co.order]
        is2 = co.order >= ctx.start2
        ok = lens >= ell
        nclass = int(runs[-1]) + 1
        n1 = np.bincount(runs[ok & ~is2], minlength=nclass)
        n2 = np.bincount(runs[ok & is2], minlength=nclass)
        total += int(n1 @ n2)
    return total
