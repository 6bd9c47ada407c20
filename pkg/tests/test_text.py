import numpy as np
import pytest

from lcsk.text import (
    LceIndex,
    Match,
    SuffixContext,
    Text,
    encode_pair,
    hamming_distance,
    lce,
    lcp_k_exact,
    mismatch_stream,
)


def ctx_from(s1, s2):
    t1, t2 = encode_pair(s1, s2)
    return SuffixContext.build(t1, t2)


def naive_lce(s, i, j):
    n = len(s)
    d = 0
    while i + d < n and j + d < n and s[i + d] == s[j + d]:
        d += 1
    return d


def naive_lcp_k(s1, s2, i, j, k):
    cap = min(len(s1) - i, len(s2) - j)
    miss = 0
    for off in range(cap):
        if s1[i + off] != s2[j + off]:
            miss += 1
            if miss > k:
                return off
    return cap


class TestText:
    def test_roundtrip(self):
        t = Text.from_string("banana")
        assert t.decode() == "banana"
        assert t.sigma == 3

    def test_shared_alphabet(self):
        t1, t2 = encode_pair("abc", "bcd")
        assert t1.sigma == t2.sigma == 4
        assert t1.decode() == "abc" and t2.decode() == "bcd"

    def test_code_bounds_enforced(self):
        with pytest.raises(ValueError):
            Text.from_codes([0, 5], sigma=3)


class TestHamming:
    def test_identity(self):
        assert hamming_distance("abc", list("abc")) == 0
        x = np.array([1, 2, 3])
        assert hamming_distance(x, x) == 0

    def test_single_mismatch(self):
        a, b = encode_pair("abc", "abd")
        assert hamming_distance(a, b) == 1

    def test_morphism_blocks(self):
        # the two 7-character encoder blocks for bit value 1 differ in 3 places
        a, b = encode_pair("0001000", "1111000")
        assert hamming_distance(a, b) == 3

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            hamming_distance([1, 2], [1, 2, 3])


class TestLce:
    def test_self_suffix(self):
        idx = LceIndex(np.array([0, 1, 0, 1, 2, 2], dtype=np.int32))
        for i in range(6):
            assert idx.lce(i, i) == 6 - i

    def test_handmade(self):
        codes = np.array([0, 1, 0, 1, 2, 2], dtype=np.int32)  # "abab##"
        idx = LceIndex(codes)
        assert idx.lce(0, 2) == 2

    def test_out_of_range(self):
        idx = LceIndex(np.array([0, 1], dtype=np.int32))
        with pytest.raises(IndexError):
            idx.lce(0, 2)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_naive_scan(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 200))
        sigma = int(rng.integers(2, 5))
        s = rng.integers(0, sigma, n).astype(np.int32)
        idx = LceIndex(s)
        # suffix array sorted order vs naive comparison sort
        suffixes = sorted(range(n), key=lambda i: tuple(s[i:]))
        assert list(idx.sa) == suffixes
        for _ in range(200):
            i, j = rng.integers(0, n, 2)
            assert idx.lce(int(i), int(j)) == naive_lce(s, int(i), int(j))
        ii = rng.integers(0, n, 64)
        jj = rng.integers(0, n, 64)
        got = idx.lce_batch(ii, jj)
        want = [naive_lce(s, int(a), int(b)) for a, b in zip(ii, jj)]
        assert list(got) == want


class TestLcpK:
    def test_identical_full_overlap(self):
        ctx = ctx_from("abcab", "abcab")
        for k in (0, 1, 3):
            assert ctx.lcp_k(0, 0, k) == 5

    def test_single_budget(self):
        ctx = ctx_from("abcab", "abdab")
        assert lcp_k_exact(ctx, 0, 0, 1) == 5
        assert lcp_k_exact(ctx, 0, 0, 0) == 2

    def test_bba_baa(self):
        ctx = ctx_from("bba", "baa")
        assert ctx.lcp_k(0, 0, 1) == 3

    def test_lce_equals_budget_zero(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n1, n2 = rng.integers(2, 40, 2)
            s1 = "".join(rng.choice(list("ab"), n1))
            s2 = "".join(rng.choice(list("ab"), n2))
            ctx = ctx_from(s1, s2)
            for _ in range(30):
                i = int(rng.integers(0, n1))
                j = int(rng.integers(0, n2))
                cap = min(n1 - i, n2 - j)
                raw = ctx.lce(i, ctx.pos2_joined(j))
                assert ctx.lcp_k(i, j, 0) == min(raw, cap)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_scan_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        n1, n2 = rng.integers(2, 60, 2)
        sigma = int(rng.integers(2, 5))
        c1 = rng.integers(0, sigma, n1).astype(np.int32)
        c2 = rng.integers(0, sigma, n2).astype(np.int32)
        ctx = SuffixContext.build(Text.from_codes(c1, sigma),
                                  Text.from_codes(c2, sigma))
        for _ in range(80):
            i = int(rng.integers(0, n1))
            j = int(rng.integers(0, n2))
            k = int(rng.integers(0, 8))
            assert ctx.lcp_k(i, j, k) == naive_lcp_k(c1, c2, i, j, k)

    def test_monotone_in_k_and_capped(self):
        rng = np.random.default_rng(3)
        c1 = rng.integers(0, 2, 50).astype(np.int32)
        c2 = rng.integers(0, 2, 50).astype(np.int32)
        ctx = SuffixContext.build(Text.from_codes(c1, 2), Text.from_codes(c2, 2))
        for _ in range(50):
            i, j = (int(x) for x in rng.integers(0, 50, 2))
            cap = min(50 - i, 50 - j)
            prev = -1
            for k in range(0, 10):
                v = ctx.lcp_k(i, j, k)
                assert prev <= v <= cap
                prev = v

    def test_batch_agrees(self):
        rng = np.random.default_rng(11)
        c1 = rng.integers(0, 3, 80).astype(np.int32)
        c2 = rng.integers(0, 3, 80).astype(np.int32)
        ctx = SuffixContext.build(Text.from_codes(c1, 3), Text.from_codes(c2, 3))
        ii = rng.integers(0, 80, 200)
        jj = rng.integers(0, 80, 200)
        for k in (0, 1, 3, 7):
            got = ctx.lcp_k_batch(ii, jj, k)
            want = [ctx.lcp_k(int(a), int(b), k) for a, b in zip(ii, jj)]
            assert list(got) == want


class TestMismatchStream:
    def test_identical_empty(self):
        ctx = ctx_from("abc", "abc")
        assert list(ctx.mismatch_stream(0, ctx.pos2_joined(0))) == []

    def test_single(self):
        ctx = ctx_from("abcab", "abdab")
        offs = list(mismatch_stream(ctx, 0, ctx.pos2_joined(0)))
        assert [o + 1 for o in offs] == [3]  # 1-based

    def test_prefix_of_scan(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            c1 = rng.integers(0, 2, 40).astype(np.int32)
            c2 = rng.integers(0, 2, 40).astype(np.int32)
            ctx = SuffixContext.build(Text.from_codes(c1, 2), Text.from_codes(c2, 2))
            i = int(rng.integers(0, 40))
            j = int(rng.integers(0, 40))
            a, b = i, ctx.pos2_joined(j)
            joined = ctx.joined
            n = joined.size
            want = [o for o in range(n - max(a, b))
                    if joined[a + o] != joined[b + o]]
            stream = mismatch_stream(ctx, a, b)
            got = [next(stream) for _ in range(min(3, len(want)))]
            assert got == want[:3]
            rest = list(stream)
            assert got + rest == want


class TestMatch:
    def test_verify(self):
        t1, t2 = encode_pair("abba", "baab")
        m = Match(1, 0, 3, 1)  # "bba" vs "baa"
        assert m.verify(t1, t2)
        assert not Match(1, 0, 3, 0).verify(t1, t2)
        assert not Match(2, 0, 3, 0).verify(t1, t2)
