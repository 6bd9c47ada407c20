"""Shared exception type for instances where the mismatch budget covers everything."""


class TrivialInstance(Exception):
    """Raised when (1 + eps) * k >= n.

    Any alignment of the full strings is then within budget, so callers
    should return the full-length alignment instead of running a solver.
    """

    def __init__(self, n: int, k: int, eps: float):
        self.n = n
        self.k = k
        self.eps = eps
        super().__init__(
            f"(1 + {eps}) * {k} >= {n}: the budget covers the whole string; "
            "return the full-length alignment"
        )
