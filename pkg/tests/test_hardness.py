import itertools

import numpy as np
import pytest

from lcsk.hardness import (
    GadgetInstance,
    OvInstance,
    build_gadget,
    mu,
    ov_bruteforce,
    padding_block,
    tau,
    verify_gap,
)
from lcsk.text import hamming_distance


def decode_bits(arr):
    return "".join(str(int(x)) for x in arr)


def ov_bitset_oracle(vectors):
    """Independent recomputation with python int bitsets."""
    packed = [int("".join(str(int(b)) for b in row), 2) for row in vectors]
    n = len(packed)
    return any(packed[i] & packed[j] == 0
               for i in range(n) for j in range(n) if i != j)


class TestMorphisms:
    def test_mu_zero(self):
        assert decode_bits(mu([0])) == "0111000"

    def test_mu_concat(self):
        assert decode_bits(mu([0, 1])) == "01110000001000"

    def test_blockwise_distances(self):
        for x, y in itertools.product((0, 1), repeat=2):
            d = hamming_distance(mu([x]), tau([y]))
            assert d == (3 if (x, y) == (1, 1) else 1)

    def test_rejects_nonbinary(self):
        with pytest.raises(ValueError):
            mu([0, 2])
        with pytest.raises(ValueError):
            tau([])

    def test_lengths(self):
        for d in range(1, 11):
            v = [1, 0] * d
            assert mu(v[:d]).size == tau(v[:d]).size == 7 * d
            assert padding_block(d).size == 7 * d

    @pytest.mark.parametrize("d", range(1, 11))
    def test_distance_encodes_inner_product(self, d):
        # d_H(mu(U), tau(V)) = d + 2 * (U . V), exhaustively per dimension
        if d <= 5:
            pairs = itertools.product(itertools.product((0, 1), repeat=d),
                                      repeat=2)
        else:
            rng = np.random.default_rng(d)
            pairs = ((tuple(rng.integers(0, 2, d)), tuple(rng.integers(0, 2, d)))
                     for _ in range(64))
        for u, v in pairs:
            dot = sum(a * b for a, b in zip(u, v))
            assert hamming_distance(mu(u), tau(v)) == d + 2 * dot


class TestOccurrences:
    def test_1000_occurs_exactly_twice(self):
        for x, y, z in itertools.product("01", repeat=3):
            s = f"1000{x}{y}{z}1000"
            occ = sum(1 for i in range(len(s) - 3) if s[i:i + 4] == "1000")
            assert occ == 2


class TestGadget:
    def test_sizes(self):
        inst = OvInstance(np.array([[1, 0], [0, 1]]))
        g = build_gadget(inst, q=1)
        assert len(g.t1) == len(g.t2) == 70  # 7 d (2N + 1)
        assert g.k == 2
        assert g.ell == 42 and g.ell_prime == 42  # thresholds coincide at q=1

    def test_padding_block_d2(self):
        assert decode_bits(padding_block(2)) == "10010001001000"

    def test_size_formula_general(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            N = int(rng.integers(2, 8))
            d = int(rng.integers(1, 6))
            q = int(rng.integers(1, 4))
            inst = OvInstance.random(N, d, rng)
            g = build_gadget(inst, q)
            assert len(g.t1) == N * (7 * d * q + 7 * d) + 7 * d * q

    def test_serialisation_roundtrip(self):
        inst = OvInstance(np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]]))
        again = OvInstance.from_text(inst.to_text())
        assert np.array_equal(inst.vectors, again.vectors)


class TestOv:
    def test_orthogonal(self):
        ok, wit = ov_bruteforce(OvInstance(np.array([[1, 0], [0, 1]])))
        assert ok and wit is not None

    def test_not_orthogonal(self):
        ok, wit = ov_bruteforce(OvInstance(np.array([[1, 1], [1, 0]])))
        assert not ok and wit is None

    def test_duplicate_zero_like_vectors(self):
        # two copies of the same vector at distinct indices may pair up
        ok, _ = ov_bruteforce(OvInstance(np.array([[0, 1], [0, 1]])))
        assert not ok  # dot product 1
        ok, _ = ov_bruteforce(OvInstance(np.array([[0, 0], [0, 0]])))
        assert ok

    @pytest.mark.parametrize("seed", range(12))
    def test_agrees_with_bitset_oracle(self, seed):
        rng = np.random.default_rng(seed)
        inst = OvInstance.random(int(rng.integers(2, 10)),
                                 int(rng.integers(1, 8)), rng)
        assert ov_bruteforce(inst)[0] == ov_bitset_oracle(inst.vectors)


class TestGap:
    def test_exhaustive_small(self):
        for d in (1, 2):
            for bits in itertools.product((0, 1), repeat=2 * d):
                vecs = np.array(bits).reshape(2, d)
                rep = verify_gap(OvInstance(vecs), q=1)
                assert rep.ok, (vecs, rep)

    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_random_instances(self, q):
        rng = np.random.default_rng(q)
        for _ in range(10):
            inst = OvInstance.random(int(rng.integers(2, 7)),
                                     int(rng.integers(1, 5)), rng)
            rep = verify_gap(inst, q)
            assert rep.ok

    def test_gap_ratio(self):
        # padding multiplier q = ceil(3/eps) - 2 pushes the gap to 2 - eps
        for eps in (0.5, 1.0):
            q = int(np.ceil(3 / eps)) - 2
            d = 3
            ell = (14 * q + 7) * d
            ell_prime = (7 * q + 14) * d
            assert ell / ell_prime >= 2 - eps

    def test_scale_limit_enforced(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            verify_gap(OvInstance.random(20, 3, rng), q=1)
