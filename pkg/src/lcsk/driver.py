"""End-to-end solvers for LCS with approximately k mismatches.

One run: preprocess sketches, build the hash family, find the largest level
where the collision family is still large, answer a bounded-mismatch prefix
query for every collision one level higher, and spend the single exact query
on a uniformly random collision at the threshold level. A repetition wrapper
drives the failure probability down and keeps the longest candidate that
passes naive verification; the 2-approximation halves a budget-2k witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import lsh, sketch
from .params import TrivialInstance
from .text import Match, SuffixContext, Text, hamming_distance

# desk-scale family budget: the derived subfamily count and full tuple sets
# are sized for asymptotics and are far too large to enumerate at bench sizes
DESK_SUBFAMILIES = 1
DESK_TUPLES_PER_SUBFAMILY = 32
# both trie paths are exact; the comparison sort has far better constants here
DESK_TRIE_METHOD = "kangaroo"

_PAIR_CHUNK = 32768


@dataclass
class RunResources:
    """Prebuilt structures shared between repetitions on the same instance."""

    ctx: Optional[SuffixContext] = None
    table: Optional[sketch.SketchTable] = None


@dataclass
class RunStats:
    threshold: int = -1
    family_size: int = 0
    pairs_enumerated: int = 0
    pairs_queried: int = 0
    sampled_pair: Optional[tuple] = None
    params: dict = field(default_factory=dict)


def _trivial_match(t1: Text, t2: Text) -> Match:
    length = min(len(t1), len(t2))
    d = hamming_distance(t1.codes[:length], t2.codes[:length])
    return Match(0, 0, length, d)


def _verified(t1: Text, t2: Text, pos1: int, pos2: int, length: int) -> Match:
    if length <= 0:
        return Match(0, 0, 0, 0)
    d = hamming_distance(t1.codes[pos1:pos1 + length],
                         t2.codes[pos2:pos2 + length])
    return Match(int(pos1), int(pos2), int(length), int(d))


def lcs_approx_k_once(t1: Text, t2: Text, k: int, eps: float, seed: int,
                      subfamilies: int = DESK_SUBFAMILIES,
                      tuples_per_subfamily: int = DESK_TUPLES_PER_SUBFAMILY,
                      lambda_constant: float = 3.0,
                      sketch_method: str = "auto",
                      trie_method: str = DESK_TRIE_METHOD,
                      probe_cap: Optional[int] = None,
                      threads: int = 1,
                      resources: Optional[RunResources] = None,
                      stats: Optional[RunStats] = None) -> Match:
    """One randomised run; succeeds with constant probability.

    Success means: length at least the budget-k optimum and verified
    mismatches at most (1+eps)k. The returned match always carries its
    re-verified mismatch count, whatever it is.
    """
    n = max(len(t1), len(t2))
    if (1 + eps) * k >= n:
        return _trivial_match(t1, t2)
    if k < 1:
        raise ValueError("mismatch budget must be at least 1")
    budget = int(math.floor((1 + eps) * k))

    ss = np.random.SeedSequence(int(seed))
    sketch_seed, family_seed, sample_seed = (int(c.generate_state(1)[0])
                                             for c in ss.spawn(3))
    if resources is None:
        resources = RunResources()
    ctx = resources.ctx
    if ctx is None:
        ctx = resources.ctx = SuffixContext.build(t1, t2)
    table = resources.table
    if table is None:
        sparams = sketch.derive_params(n, k, eps, sigma=t1.sigma,
                                       lambda_constant=lambda_constant)
        table = resources.table = sketch.build_sketch_table(
            t1, t2, sparams, sketch_seed, method=sketch_method)

    lparams = lsh.derive_lsh_params(n, k, eps)
    family = lsh.build_family(ctx, lparams, family_seed,
                              subfamilies=subfamilies,
                              tuples_per_subfamily=tuples_per_subfamily,
                              probe_cap=probe_cap, threads=threads)
    ell = family.find_threshold()
    if stats is not None:
        stats.threshold = ell
        stats.family_size = family.size
        stats.params = {
            "t": lparams.t, "m": lparams.m, "w": lparams.w,
            "subfamilies": len(family.subfamilies),
            "hash_functions": family.size,
            "lambda": table.params.lam,
        }

    best_len = 0
    best = (0, 0)
    if 0 <= ell < n:
        p1, p2, _ = family.enumerate_pairs(ell + 1)
        if stats is not None:
            stats.pairs_enumerated = int(p1.size)
        if p1.size:
            packed = p1 * np.int64(ctx.joined.size) + p2
            uniq = np.unique(packed)
            s1 = (uniq // ctx.joined.size).astype(np.int64)
            s2 = (uniq % ctx.joined.size).astype(np.int64) - ctx.start2
            if stats is not None:
                stats.pairs_queried = int(s1.size)
            for lo in range(0, s1.size, _PAIR_CHUNK):
                hi = min(lo + _PAIR_CHUNK, s1.size)
                vals = sketch.lcp_approx_k_batch(
                    table, s1[lo:hi], s2[lo:hi],
                    best_floor=best_len if best_len > 0 else None)
                j = int(np.argmax(vals))
                if int(vals[j]) > best_len:
                    best_len = int(vals[j])
                    best = (int(s1[lo + j]), int(s2[lo + j]))

    if ell >= 0:
        sp1, sp2, _ = family.sample(ell, sample_seed)
        i, j = int(sp1), int(sp2 - ctx.start2)
        exact = ctx.lcp_k(i, j, budget)
        if stats is not None:
            stats.sampled_pair = (i, j, exact)
        if exact > best_len:
            best_len = exact
            best = (i, j)

    return _verified(t1, t2, best[0], best[1], best_len)


def repetitions_for(delta: float, per_run_failure: float = 0.75) -> int:
    """Runs needed to push the failure probability below delta."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not 0 < per_run_failure < 1:
        raise ValueError("per-run failure bound must lie in (0, 1)")
    return max(1, math.ceil(math.log(1 / delta) / math.log(1 / per_run_failure)))


def lcs_approx_k(t1: Text, t2: Text, k: int, eps: float, delta: float,
                 seed: int, per_run_failure: float = 0.75,
                 resources: Optional[RunResources] = None,
                 **run_kwargs) -> Match:
    """Repetition wrapper: failure probability at most delta.

    Repetitions share the suffix context and sketch table but re-randomise the
    hash family; each candidate is naively verified and the longest one with
    at most floor((1+eps) k) mismatches wins.
    """
    n = max(len(t1), len(t2))
    if (1 + eps) * k >= n:
        return _trivial_match(t1, t2)
    budget = int(math.floor((1 + eps) * k))
    reps = repetitions_for(delta, per_run_failure)
    if resources is None:
        resources = RunResources()
    seeds = [int(c.generate_state(1)[0])
             for c in np.random.SeedSequence(int(seed)).spawn(reps)]
    best = Match(0, 0, 0, 0)
    for rep_seed in seeds:
        cand = lcs_approx_k_once(t1, t2, k, eps, rep_seed,
                                 resources=resources, **run_kwargs)
        if cand.mismatches <= budget and cand.length > best.length:
            best = cand
    return best


def lcs_k_2approx(t1: Text, t2: Text, k: int, delta: float, seed: int,
                  resources: Optional[RunResources] = None,
                  **run_kwargs) -> Match:
    """Half-length guarantee at the original budget.

    Runs the approximately-k solver at eps = 1 (budget 2k, length >= the
    budget-k optimum), then splits the witness into a ceil(L/2) first half and
    floor(L/2) second half: at least one half carries at most k mismatches.
    Returns the longer qualifying half, the first on a tie.
    """
    if k < 1:
        raise ValueError("mismatch budget must be at least 1")
    w = lcs_approx_k(t1, t2, k, 1.0, delta, seed, resources=resources,
                     **run_kwargs)
    if w.length == 0:
        return w
    first_len = (w.length + 1) // 2
    second_len = w.length - first_len
    d1 = hamming_distance(t1.codes[w.pos1:w.pos1 + first_len],
                          t2.codes[w.pos2:w.pos2 + first_len])
    if d1 <= k:
        return Match(w.pos1, w.pos2, first_len, int(d1))
    if second_len > 0:
        o1 = w.pos1 + first_len
        o2 = w.pos2 + first_len
        d2 = hamming_distance(t1.codes[o1:o1 + second_len],
                              t2.codes[o2:o2 + second_len])
        if d2 <= k:
            return Match(o1, o2, second_len, int(d2))
    return Match(0, 0, 0, 0)
