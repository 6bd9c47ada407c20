import numpy as np
import pytest

from lcsk.exact import (
    lcs_exact,
    lcs_k_bruteforce,
    lcs_k_bruteforce_all,
    lcs_k_diagonal,
)
from lcsk.text import Text, encode_pair, hamming_distance


def random_pair(rng, nmax=64, sigma=2):
    n1 = int(rng.integers(1, nmax + 1))
    n2 = int(rng.integers(1, nmax + 1))
    t1 = Text.from_codes(rng.integers(0, sigma, n1), sigma)
    t2 = Text.from_codes(rng.integers(0, sigma, n2), sigma)
    return t1, t2


class TestLcsExact:
    def test_self(self):
        t1, t2 = encode_pair("banana", "banana")
        m = lcs_exact(t1, t2)
        assert m.length == 6 and m.mismatches == 0

    def test_abba_baab(self):
        t1, t2 = encode_pair("abba", "baab")
        m = lcs_exact(t1, t2)
        assert m.length == 2
        assert m.verify(t1, t2)

    def test_disjoint(self):
        t1, t2 = encode_pair("aaa", "bbb")
        m = lcs_exact(t1, t2)
        assert m.length == 0

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_bruteforce(self, seed):
        rng = np.random.default_rng(seed)
        t1, t2 = random_pair(rng, nmax=40, sigma=int(rng.integers(2, 5)))
        m = lcs_exact(t1, t2)
        want = lcs_k_bruteforce(t1, t2, 0)
        assert m.length == want.length
        assert m.verify(t1, t2)


class TestLcsKDiagonal:
    def test_abba_baab_k1(self):
        t1, t2 = encode_pair("abba", "baab")
        m = lcs_k_diagonal(t1, t2, 1)
        assert m.length == 3
        assert m.mismatches <= 1
        assert m.verify(t1, t2)

    def test_budget_covers_everything(self):
        t1, t2 = encode_pair("abcabc", "xyzxyz")
        m = lcs_k_diagonal(t1, t2, 6)
        assert m.length == 6

    def test_k0_equals_exact(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            t1, t2 = random_pair(rng, nmax=48)
            assert lcs_k_diagonal(t1, t2, 0).length == lcs_exact(t1, t2).length


class TestBruteforce:
    def test_ab_ba(self):
        t1, t2 = encode_pair("ab", "ba")
        assert lcs_k_bruteforce(t1, t2, 1).length == 1
        assert lcs_k_bruteforce(t1, t2, 2).length == 2

    def test_witness_tiebreak_matches_diagonal(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            t1, t2 = random_pair(rng, nmax=24)
            k = int(rng.integers(0, 6))
            a = lcs_k_diagonal(t1, t2, k)
            b = lcs_k_bruteforce(t1, t2, k)
            assert (a.pos1, a.pos2, a.length) == (b.pos1, b.pos2, b.length)


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(25))
    def test_diagonal_equals_bruteforce_all_k(self, seed):
        rng = np.random.default_rng(1000 + seed)
        sigma = 2 if seed % 2 == 0 else 4
        t1, t2 = random_pair(rng, nmax=64, sigma=sigma)
        table = lcs_k_bruteforce_all(t1, t2)
        for k in range(table.size):
            m = lcs_k_diagonal(t1, t2, k)
            assert m.length == table[k], (seed, k)
            assert m.mismatches <= k

    def test_monotone_in_k(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            t1, t2 = random_pair(rng, nmax=48, sigma=3)
            table = lcs_k_bruteforce_all(t1, t2)
            assert np.all(np.diff(table) >= 0)

    def test_match_reverifies(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            t1, t2 = random_pair(rng, nmax=40, sigma=3)
            k = int(rng.integers(0, 8))
            m = lcs_k_diagonal(t1, t2, k)
            assert m.mismatches <= k
            assert m.verify(t1, t2)
