import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import EnsembleError, GuardError

logger = logging.getLogger(__name__)

MAX_CODEWORDS: int = 2**16


def codebook_size(n: int, rate: float, max_codewords: int = MAX_CODEWORDS) -> int:
    """⌈2^{nR}⌉, the integer number of indices realizing rate R at blocklength n."""
    if n * rate > math.log2(max_codewords) + 1e-9:
        raise GuardError(f"2^(nR) with nR={n * rate:g} exceeds the guard of {max_codewords} codewords")
    return max(1, math.ceil(2.0 ** (n * rate) - 1e-9))


@dataclass(kw_only=True, frozen=True, eq=False)
class Codebook:
    """Codewords xⁿ(m,k) stored as an array of shape (messages, keys, n)."""

    n: int
    rate_r: float
    rate_r0: float
    codewords: npt.NDArray[np.int64]
    seed: int

    @property
    def messages(self) -> int:
        return self.codewords.shape[0]

    @property
    def keys_per_message(self) -> int:
        return self.codewords.shape[1]

    def codeword(self, m: int, k: int) -> tuple[int, ...]:
        return tuple(int(s) for s in self.codewords[m, k])


def generate_codebook(
    n: int,
    rate_r: float,
    rate_r0: float,
    p_x: Sequence[float],
    seed: int,
    max_codewords: int = MAX_CODEWORDS,
) -> Codebook:
    """Every symbol of every codeword drawn i.i.d. from p_x."""
    if n < 1:
        raise GuardError(f"blocklength must be at least 1, got {n}")
    if rate_r < 0 or rate_r0 < 0:
        raise EnsembleError(f"rates must be nonnegative, got R={rate_r}, R0={rate_r0}")
    messages, keys = codebook_size(n, rate_r, max_codewords), codebook_size(n, rate_r0, max_codewords)
    if messages * keys > max_codewords:
        raise GuardError(f"codebook of {messages}x{keys} codewords exceeds the guard of {max_codewords}")
    p = np.asarray(p_x, dtype=np.float64)
    rng = np.random.default_rng(seed)
    codewords = rng.choice(p.size, size=(messages, keys, n), p=p)
    logger.debug("codebook n=%d: %d messages x %d keys (seed %d)", n, messages, keys, seed)
    return Codebook(n=n, rate_r=rate_r, rate_r0=rate_r0, codewords=codewords.astype(np.int64), seed=seed)
