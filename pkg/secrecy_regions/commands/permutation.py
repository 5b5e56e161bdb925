import math
from typing import ClassVar

from ..codec_sim import (
    ErrorMatrix,
    expurgate,
    expurgated_rate,
    load_error_matrix,
    permutation_scheme,
    synthetic_error_matrix,
)
from ..codec_sim.maximal_error import ENTRY_TOL
from ..config import Command, RunConfig
from ..output import PERMUTATION_COLUMNS, render_csv
from .base import BaseCommand, CommandResult
from .pool import gather_in_pool


def convert(errors: ErrorMatrix, config: RunConfig, seed: int) -> list[float]:
    """Expurgate at lam, then run the permutation scheme on the surviving rows."""
    report = expurgate(errors, config.lam, n=config.perm_n)
    kept = ErrorMatrix(entries=errors.entries[list(report.kept)], provenance=errors.provenance)
    permuted = permutation_scheme(
        kept, config.perm_n, seed, lam=config.lam, retry_budget=config.retry_budget
    )
    return [
        errors.shape[0],
        len(report.kept),
        report.fraction_removed,
        report.markov_bound,
        permuted.max_error,
        permuted.bound,
        permuted.attempts,
    ]


class PermutationCommand(BaseCommand):
    """Average-to-maximal error conversion on synthetic or loaded error matrices."""

    name: ClassVar[Command] = Command.PERMUTATION
    description: ClassVar[str] = "Expurgation and permutation scheme on message-pair error matrices"

    async def __call__(
        self, config: RunConfig, *, threads: int = 1, timeout: float | None = None
    ) -> CommandResult:
        if config.errors_path is not None:
            seeds = [config.seed]
            matrices = [load_error_matrix(config.errors_path)]
        else:
            seeds = list(range(config.seed, config.seed + config.fixtures))
            matrices = [
                synthetic_error_matrix(config.messages, config.excess_messages, config.lam, config.spikes, seed)
                for seed in seeds
            ]
        jobs = [lambda m=m, s=s: convert(m, config, s) for m, s in zip(matrices, seeds, strict=True)]
        results = await gather_in_pool(jobs, threads, timeout)
        rows = [[i, seed, *result] for i, (seed, result) in enumerate(zip(seeds, results, strict=True))]
        max_errors = [row[6] for row in rows]
        summary = {
            "lam": config.lam,
            "perm_n": config.perm_n,
            "bound": 4.0 * config.lam,
            "fixtures": len(rows),
            "provenance": matrices[0].provenance,
            "worst_max_error": max(max_errors),
            "all_within_bound": all(e <= 4.0 * config.lam + ENTRY_TOL for e in max_errors),
            "chernoff_tail": math.exp(-config.lam * config.perm_n**2),
            "max_fraction_removed": max(row[4] for row in rows),
            "rate": config.perm_rate,
            "rate_loss_bound": math.log2(1.0 / (1.0 - config.lam)) / config.perm_n,
            "expurgated_rate": expurgated_rate(config.perm_rate, config.lam, config.perm_n),
        }
        return CommandResult(artifacts={"permutation.csv": render_csv(PERMUTATION_COLUMNS, rows)}, summary=summary)
