"""Prime-field utilities: prime finding, exact windowed modular correlation,
and polynomial fingerprints."""

from __future__ import annotations

import numpy as np

# largest modulus for which the uint64 accumulation below cannot overflow
MAX_MODULUS = (1 << 63) - 1

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the full 64-bit range."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_prime(lower: int) -> int:
    """Smallest prime >= lower (deterministic scan)."""
    if lower > MAX_MODULUS:
        raise ValueError(f"lower bound {lower} exceeds the supported word size")
    n = max(2, int(lower))
    if n == 2:
        return 2
    if n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 2
        if n > MAX_MODULUS:
            raise ValueError("no prime found within the supported word size")
    return n


def correlate_mod(pattern, text, p: int) -> np.ndarray:
    """Exact windowed inner products: out[j] = sum_q pattern[q] * text[j+q] mod p.

    Sparse accumulation over the nonzero pattern coefficients; each coefficient
    contributes one shifted slice of the text. Products are formed through a
    per-symbol lookup table so arbitrarily large moduli stay exact in uint64.
    """
    pat = np.asarray(pattern, dtype=np.uint64)
    txt = np.asarray(text, dtype=np.int64)
    if pat.size == 0:
        raise ValueError("pattern must be nonempty")
    if pat.size > txt.size:
        raise ValueError("pattern longer than text")
    if not 2 <= p <= MAX_MODULUS:
        raise ValueError(f"modulus {p} out of range")
    if txt.size and (txt.min() < 0):
        raise ValueError("text codes must be nonnegative")
    width = txt.size - pat.size + 1
    out = np.zeros(width, dtype=np.uint64)
    nz = np.nonzero(pat % np.uint64(p))[0]
    if nz.size == 0:
        return out
    hi = int(txt.max())
    pmod = np.uint64(p)
    for q in nz:
        c = int(pat[q]) % p
        table = np.fromiter(((c * v) % p for v in range(hi + 1)),
                            dtype=np.uint64, count=hi + 1)
        out += table[txt[q:q + width]]
        out %= pmod
    return out


def karp_rabin(seq, r: int, p: int) -> int:
    """Polynomial fingerprint sum_q seq[q] * r^q mod p, exponents starting at 1."""
    if not 0 <= r < p:
        raise ValueError("base must lie in [0, p)")
    acc = 0
    for c in reversed(np.asarray(seq, dtype=np.int64)):
        acc = (acc + int(c)) * r % p
    return acc


def karp_rabin_batch(seqs: np.ndarray, r: int, p: int) -> np.ndarray:
    """Fingerprints of the rows of a small-alphabet matrix, vectorised.

    Requires sigma * p < 2**64 so the running sums stay exact.
    """
    m = seqs.shape[1]
    powers = np.empty(m, dtype=np.uint64)
    acc = 1
    for q in range(m):
        acc = acc * r % p
        powers[q] = acc
    hi = int(seqs.max()) if seqs.size else 0
    if (hi + 1) * p >= 1 << 64:
        raise ValueError("alphabet too large for vectorised fingerprints")
    out = np.zeros(seqs.shape[0], dtype=np.uint64)
    pmod = np.uint64(p)
    for q in range(m):
        out += (seqs[:, q].astype(np.uint64) * powers[q]) % pmod
        out %= pmod
    return out
