"""
Average-to-maximal error conversion on a message-pair error matrix e(m, m′):
expurgation of the worst guaranteed messages, then averaging the excess index
over n² random permutations.
"""

import csv
import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path

import numpy as np
import numpy.typing as npt

from ..errors import MaximalErrorError, PermutationBudgetError

logger = logging.getLogger(__name__)

DEFAULT_RETRY_BUDGET: int = 100
ENTRY_TOL: float = 1e-12


class Provenance(StrEnum):
    SYNTHETIC = "synthetic"
    MEASURED = "measured"


@dataclass(kw_only=True, frozen=True, eq=False)
class ErrorMatrix:
    """Rows are guaranteed messages m, columns excess messages m′."""

    entries: npt.NDArray[np.float64]
    provenance: Provenance = Provenance.SYNTHETIC

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.ndim != 2 or 0 in entries.shape:
            raise MaximalErrorError(f"error matrix must be a nonempty 2-d array, got shape {entries.shape}")
        if entries.min() < -ENTRY_TOL or entries.max() > 1.0 + ENTRY_TOL:
            raise MaximalErrorError(
                f"error entries must lie in [0, 1], found [{entries.min():.3e}, {entries.max():.3e}]"
            )
        object.__setattr__(self, "entries", np.clip(entries, 0.0, 1.0))
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def row_means(self) -> npt.NDArray[np.float64]:
        """Semi-average errors e(m)."""
        return self.entries.mean(axis=1)

    @property
    def grand_mean(self) -> float:
        return float(self.entries.mean())


def synthetic_error_matrix(
    messages: int = 64,
    excess_messages: int = 64,
    lam: float = 0.05,
    spikes: int = 8,
    seed: int = 0,
) -> ErrorMatrix:
    """
    Every row is zero except for `spikes` columns of equal height, chosen so
    that each row mean is exactly lam. The spike columns are shared by all
    rows, the worst case for a single excess message.
    """
    if not 0 < spikes <= excess_messages:
        raise MaximalErrorError(f"spike count {spikes} out of range for {excess_messages} columns")
    height = lam * excess_messages / spikes
    if height > 1.0:
        raise MaximalErrorError(f"spike height {height:.3f} exceeds 1; use more spikes")
    rng = np.random.default_rng(seed)
    columns = rng.choice(excess_messages, size=spikes, replace=False)
    entries = np.zeros((messages, excess_messages))
    entries[:, columns] = height
    return ErrorMatrix(entries=entries, provenance=Provenance.SYNTHETIC)


def load_error_matrix(path: str | Path, provenance: Provenance = Provenance.MEASURED) -> ErrorMatrix:
    """Read a CSV with columns m, m', e (zero-based indices); missing pairs are errors."""
    path = Path(path)
    try:
        with path.open(newline="") as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise MaximalErrorError(f"cannot read error matrix {path}: {e}") from e
    if not rows or not {"m", "m'", "e"} <= set(rows[0]):
        raise MaximalErrorError(f"{path} must have the columns m, m', e")
    try:
        triples = [(int(r["m"]), int(r["m'"]), float(r["e"])) for r in rows]
    except ValueError as e:
        raise MaximalErrorError(f"{path}: {e}") from e
    messages = max(t[0] for t in triples) + 1
    excess = max(t[1] for t in triples) + 1
    if min(min(t[0], t[1]) for t in triples) < 0:
        raise MaximalErrorError(f"{path}: message indices must be nonnegative")
    entries = np.full((messages, excess), np.nan)
    for m, m_prime, e in triples:
        entries[m, m_prime] = e
    if np.isnan(entries).any():
        raise MaximalErrorError(f"{path}: {int(np.isnan(entries).sum())} message pairs have no entry")
    return ErrorMatrix(entries=entries, provenance=provenance)


@dataclass(kw_only=True, frozen=True)
class ExpurgationReport:
    kept: tuple[int, ...]
    removed: tuple[int, ...]
    fraction_removed: float
    grand_mean: float
    markov_bound: float
    rate_loss: float


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam < 1.0:
        raise MaximalErrorError(f"lambda must lie in (0, 1), got {lam}")


def expurgate(errors: ErrorMatrix, lam: float, n: int = 1) -> ExpurgationReport:
    """
    Keep the messages whose semi-average error is at most lam. By Markov's
    inequality the removed fraction is at most grand_mean / lam.
    """
    _check_lambda(lam)
    means = errors.row_means()
    kept = tuple(int(m) for m in np.flatnonzero(means <= lam + ENTRY_TOL))
    removed = tuple(int(m) for m in np.flatnonzero(means > lam + ENTRY_TOL))
    if not kept:
        raise MaximalErrorError(f"every message has semi-average error above {lam}")
    fraction = len(removed) / means.size
    report = ExpurgationReport(
        kept=kept,
        removed=removed,
        fraction_removed=fraction,
        grand_mean=errors.grand_mean,
        markov_bound=errors.grand_mean / lam,
        rate_loss=math.log2(1.0 / (1.0 - fraction)) / n,
    )
    logger.debug("expurgated %d of %d messages at lambda=%g", len(removed), means.size, lam)
    return report


def expurgated_rate(rate_r: float, lam: float, n: int) -> float:
    """Guaranteed rate left after removing a lam fraction of the messages, clipped at 0."""
    _check_lambda(lam)
    return max(0.0, rate_r - math.log2(1.0 / (1.0 - lam)) / n)


@dataclass(kw_only=True, frozen=True, eq=False)
class PermutationReport:
    """permutations[ℓ] maps excess message m′ to π_ℓ(m′)."""

    permutations: npt.NDArray[np.int64]
    max_error: float
    bound: float
    lam: float
    attempts: int
    chernoff_tail: float


def permuted_errors(errors: ErrorMatrix, permutations: npt.NDArray[np.int64]) -> npt.NDArray[np.float64]:
    """(1/L) Σ_ℓ e(m, π_ℓ(m′)) for every pair."""
    return errors.entries[:, permutations].mean(axis=1)


def permutation_scheme(
    errors: ErrorMatrix,
    n: int,
    seed: int,
    *,
    lam: float | None = None,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
) -> PermutationReport:
    """
    Draw n² i.i.d. uniform permutations of the excess messages until the
    averaged error of every pair is at most 4·lam. lam defaults to the largest
    row mean. Draws come from one generator seeded once, so the attempt
    sequence is reproducible.
    """
    if n < 1:
        raise MaximalErrorError(f"blocklength must be at least 1, got {n}")
    if retry_budget < 1:
        raise MaximalErrorError(f"retry budget must be positive, got {retry_budget}")
    if lam is not None:
        _check_lambda(lam)
    means = errors.row_means()
    lam = float(means.max()) if lam is None else lam
    if means.max() > lam + ENTRY_TOL:
        raise MaximalErrorError(
            f"row mean {means.max():.4f} exceeds lambda={lam}; expurgate first"
        )
    bound = 4.0 * lam
    count = n * n
    excess = errors.shape[1]
    rng = np.random.default_rng(seed)
    best = math.inf
    for attempt in range(1, retry_budget + 1):
        permutations = np.stack([rng.permutation(excess) for _ in range(count)])
        max_error = float(permuted_errors(errors, permutations).max())
        if max_error <= bound + ENTRY_TOL:
            return PermutationReport(
                permutations=permutations.astype(np.int64),
                max_error=max_error,
                bound=bound,
                lam=lam,
                attempts=attempt,
                chernoff_tail=math.exp(-lam * count),
            )
        best = min(best, max_error)
        logger.info("permutation attempt %d: max error %.4f above %.4f", attempt, max_error, bound)
    raise PermutationBudgetError(
        f"no draw of {count} permutations met the {bound:.4f} bound in {retry_budget} attempts",
        attempts=retry_budget,
        best_max_error=best,
        bound=bound,
    )
