"""Adversarial instance generator: orthogonal-vectors gadgets.

Two 7-characters-per-bit morphisms encode vectors so that blockwise Hamming
distances reveal inner products; padding blocks force alignments. Instances
built this way have a large gap in the k-mismatch LCS length depending on
whether the vector set contains an orthogonal pair, which makes them good
adversarial benchmarks for approximate solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exact import lcs_k_diagonal
from .text import Text

_MU = {0: (0, 1, 1, 1, 0, 0, 0), 1: (0, 0, 0, 1, 0, 0, 0)}
_TAU = {0: (0, 0, 1, 1, 0, 0, 0), 1: (1, 1, 1, 1, 0, 0, 0)}
_GAMMA = (1, 0, 0, 1, 0, 0, 0)

# verify_gap relies on the quadratic exact solver; keep it at desk scale
_GAP_LIMITS = {"N": 12, "d": 6, "q": 3}


@dataclass(frozen=True)
class OvInstance:
    """A set of N binary vectors of dimension d."""

    vectors: np.ndarray  # (N, d) with entries in {0, 1}

    def __post_init__(self):
        v = np.ascontiguousarray(self.vectors, dtype=np.int8)
        object.__setattr__(self, "vectors", v)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 1:
            raise ValueError("need at least 2 vectors of dimension >= 1")
        if v.min() < 0 or v.max() > 1:
            raise ValueError("vector entries must be 0 or 1")

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def to_text(self) -> str:
        """One vector per line, as 0/1 rows."""
        return "\n".join("".join(str(int(x)) for x in row) for row in self.vectors)

    @classmethod
    def from_text(cls, blob: str) -> "OvInstance":
        rows = [line.strip() for line in blob.splitlines() if line.strip()]
        vecs = [[int(c) for c in row] for row in rows]
        if len({len(r) for r in vecs}) > 1:
            raise ValueError("rows have inconsistent dimensions")
        return cls(np.array(vecs, dtype=np.int8))

    @classmethod
    def random(cls, n: int, d: int, rng) -> "OvInstance":
        rng = np.random.default_rng(rng)
        return cls(rng.integers(0, 2, (n, d)).astype(np.int8))


@dataclass(frozen=True)
class GadgetInstance:
    t1: Text
    t2: Text
    k: int           # = d
    q: int           # padding multiplier
    ell: int         # (14q + 7) d: guaranteed when an orthogonal pair exists
    ell_prime: int   # (7q + 14) d: upper bound when none exists


def _encode_bits(v, table) -> np.ndarray:
    bits = np.asarray(v, dtype=np.int64).ravel()
    if bits.size == 0:
        raise ValueError("vector must be nonempty")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("vector entries must be 0 or 1")
    return np.concatenate([np.array(table[int(b)], dtype=np.int32) for b in bits])


def mu(v) -> np.ndarray:
    """First morphism: 7 characters per bit."""
    return _encode_bits(v, _MU)


def tau(v) -> np.ndarray:
    """Second morphism: 7 characters per bit."""
    return _encode_bits(v, _TAU)


def padding_block(d: int) -> np.ndarray:
    """The alignment block: d copies of the 7-character padding word."""
    return np.tile(np.array(_GAMMA, dtype=np.int32), d)


def build_gadget(inst: OvInstance, q: int = 1) -> GadgetInstance:
    """Assemble the two gadget strings for a vector set.

    T1 interleaves mu-encoded vectors with q padding blocks, T2 the same with
    tau; k is set to the dimension d.
    """
    if q < 1:
        raise ValueError("padding multiplier must be at least 1")
    d = inst.dim
    hq = np.tile(padding_block(d), q)

    def assemble(encode):
        parts = [hq]
        for row in inst.vectors:
            parts.append(encode(row))
            parts.append(hq)
        return np.concatenate(parts)

    c1 = assemble(mu)
    c2 = assemble(tau)
    expect = inst.count * (7 * d * q + 7 * d) + 7 * d * q
    assert c1.size == c2.size == expect
    return GadgetInstance(
        Text.from_codes(c1, 2, origin="gadget-t1"),
        Text.from_codes(c2, 2, origin="gadget-t2"),
        k=d,
        q=q,
        ell=(14 * q + 7) * d,
        ell_prime=(7 * q + 14) * d,
    )


def ov_bruteforce(inst: OvInstance):
    """Does the set contain an orthogonal pair at distinct indices?

    Returns (answer, witness) where witness is the first (i, j) pair with
    zero dot product, or None.
    """
    v = inst.vectors.astype(np.int64)
    gram = v @ v.T
    np.fill_diagonal(gram, 1)  # self-pairing excluded
    hits = np.argwhere(gram == 0)
    if hits.size == 0:
        return False, None
    i, j = hits[0]
    return True, (int(i), int(j))


@dataclass(frozen=True)
class GapReport:
    orthogonal: bool
    witness: Optional[tuple]
    lcs_len: int
    ell: int
    ell_prime: int
    ok: bool


def verify_gap(inst: OvInstance, q: int = 1) -> GapReport:
    """Check the gadget's promised gap against the exact quadratic solver."""
    if inst.count > _GAP_LIMITS["N"] or inst.dim > _GAP_LIMITS["d"] or q > _GAP_LIMITS["q"]:
        raise ValueError(
            f"instance too large for exact verification "
            f"(limits N<={_GAP_LIMITS['N']}, d<={_GAP_LIMITS['d']}, q<={_GAP_LIMITS['q']})"
        )
    gadget = build_gadget(inst, q)
    orthogonal, witness = ov_bruteforce(inst)
    m = lcs_k_diagonal(gadget.t1, gadget.t2, gadget.k)
    if orthogonal:
        ok = m.length >= gadget.ell
    else:
        ok = m.length < gadget.ell_prime
    return GapReport(orthogonal, witness, m.length, gadget.ell, gadget.ell_prime, ok)
