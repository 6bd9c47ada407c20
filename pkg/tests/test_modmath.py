import numpy as np
import pytest

from lcsk.modmath import (
    correlate_mod,
    find_prime,
    is_prime,
    karp_rabin,
    karp_rabin_batch,
)


def trial_division_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class TestFindPrime:
    def test_smallest(self):
        assert find_prime(2) == 2
        assert find_prime(10) == 11

    def test_n5_crosscheck(self):
        p = find_prime(100 ** 5)
        assert p >= 100 ** 5
        assert trial_division_prime(p)
        # no smaller prime in between
        for q in range(100 ** 5, p):
            assert not trial_division_prime(q)

    def test_too_large_rejected(self):
        with pytest.raises(ValueError):
            find_prime(2 ** 64)

    def test_is_prime_small(self):
        want = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
        got = {n for n in range(50) if is_prime(n)}
        assert got == want


class TestCorrelate:
    def test_zero_pattern(self):
        out = correlate_mod([0, 0], [1, 2, 3, 4], 7)
        assert list(out) == [0, 0, 0]

    def test_identity_kernel(self):
        out = correlate_mod([1], [3, 5, 7], 11)
        assert list(out) == [3, 5, 7]

    def test_empty_pattern_rejected(self):
        with pytest.raises(ValueError):
            correlate_mod([], [1, 2], 7)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_naive(self, seed):
        rng = np.random.default_rng(seed)
        p = int(rng.choice([5, 11, 97, 10 ** 9 + 7]))
        nt = int(rng.integers(4, 257))
        npat = int(rng.integers(1, nt + 1))
        text = rng.integers(0, 5, nt)
        pat = rng.integers(0, p, npat)
        got = correlate_mod(pat, text, p)
        want = [sum(int(pat[q]) * int(text[j + q]) for q in range(npat)) % p
                for j in range(nt - npat + 1)]
        assert list(got) == want

    def test_linear_in_pattern(self):
        rng = np.random.default_rng(12)
        p = 101
        text = rng.integers(0, 4, 60)
        a = rng.integers(0, p, 9)
        b = rng.integers(0, p, 9)
        lhs = correlate_mod((a + b) % p, text, p)
        rhs = (correlate_mod(a, text, p) + correlate_mod(b, text, p)) % p
        assert np.array_equal(lhs, rhs)


class TestKarpRabin:
    def test_zero(self):
        assert karp_rabin([0, 0, 0], 5, 13) == 0

    def test_hand_eval(self):
        # 1*2^1 + 1*2^2 = 6
        assert karp_rabin([1, 1], 2, 7) == 6

    def test_no_false_mismatch_exhaustive(self):
        # equal sequences always produce equal fingerprints
        p = 10007
        for r in (0, 1, 5, 123):
            for bits in range(16):
                seq = [(bits >> i) & 1 for i in range(4)]
                assert karp_rabin(seq, r, p) == karp_rabin(list(seq), r, p)

    def test_batch_agrees(self):
        rng = np.random.default_rng(3)
        p = find_prime(10 ** 10)
        r = int(rng.integers(1, p))
        seqs = rng.integers(0, 4, (50, 16))
        got = karp_rabin_batch(seqs, r, p)
        want = [karp_rabin(row, r, p) for row in seqs]
        assert [int(x) for x in got] == want

    def test_collision_rate(self):
        # distinct random length-16 sequences over sigma=4, p >= n^5:
        # empirical collision rate across 1e5 trials <= 10 * (16 / p)
        rng = np.random.default_rng(99)
        n = 100
        p = find_prime(n ** 5)
        trials = 10 ** 5
        a = rng.integers(0, 4, (trials, 16))
        b = rng.integers(0, 4, (trials, 16))
        distinct = (a != b).any(axis=1)
        r = int(rng.integers(1, p))
        fa = karp_rabin_batch(a, r, p)
        fb = karp_rabin_batch(b, r, p)
        coll = int(np.count_nonzero((fa == fb) & distinct))
        assert coll <= max(1, int(10 * trials * 16 / p))
