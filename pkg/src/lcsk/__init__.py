"""Longest common substrings under mismatch budgets.

Solvers for the classic longest common substring problem, its k-mismatch
variant (exact and brute force), the approximately-k variant built on
locality-sensitive hashing and Hamming sketches, a 2-approximation, the
all-k solver via binary jumbled indexing, and a gadget generator for
adversarial benchmark instances.
"""

from .text import Match, SuffixContext, Text, encode_pair, hamming_distance
from .exact import lcs_exact, lcs_k_bruteforce, lcs_k_diagonal
from .driver import lcs_approx_k, lcs_approx_k_once, lcs_k_2approx
from .jumbled import build_jumbled, jumbled_query, lcs_all_k
from .params import TrivialInstance

__all__ = [
    "Match",
    "SuffixContext",
    "Text",
    "TrivialInstance",
    "encode_pair",
    "hamming_distance",
    "lcs_exact",
    "lcs_k_bruteforce",
    "lcs_k_diagonal",
    "lcs_approx_k",
    "lcs_approx_k_once",
    "lcs_k_2approx",
    "build_jumbled",
    "jumbled_query",
    "lcs_all_k",
]

__version__ = "0.1.0"
