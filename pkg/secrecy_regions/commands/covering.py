import logging
from functools import partial
from typing import ClassVar

import numpy as np

from ..codec_sim import CodingContext, covering_trial, excess_trial, key_space_size
from ..config import Command, RunConfig
from ..ensembles import build_omega
from ..errors import GuardError
from ..output import DELTA_EXCESS_COLUMNS, DELTA_STAR_COLUMNS, render_csv
from ..rate_regions import entropic_quantities
from .base import BaseCommand, CommandResult
from .pool import gather_in_pool

logger = logging.getLogger(__name__)


def _strictly_decreasing(values: list[float]) -> bool:
    return all(a > b for a, b in zip(values, values[1:]))


class CoveringCommand(BaseCommand):
    """Seeded Monte-Carlo estimates of Δ*_m over the R₀ grid and of Δ_{m′|m,k} over key counts."""

    name: ClassVar[Command] = Command.COVERING
    description: ClassVar[str] = "Covering diagnostics for random codebooks and keyed encoders"

    async def __call__(
        self, config: RunConfig, *, threads: int = 1, timeout: float | None = None
    ) -> CommandResult:
        chan = config.build_channel()
        ensemble = config.ensemble_factory()(config.beta)
        if max(config.x_n) >= ensemble.alphabet_size:
            raise GuardError(f"x_n uses letters outside the alphabet of size {ensemble.alphabet_size}")
        context = CodingContext(
            chan,
            ensemble,
            max_n=config.max_n,
            max_exhaustive_keys=config.max_exhaustive_keys,
            zeta_samples=config.zeta_samples,
            zeta_seed=config.seed,
        )
        zeta = context.zeta(config.x_n)
        full = key_space_size(context.decomposition(config.x_n))
        key_counts = [full if k == "full" else int(k) for k in config.key_counts]

        star_grid = [(r0, seed) for r0 in config.r0_grid for seed in config.seeds]
        star_jobs = [
            partial(covering_trial, context, config.n, config.rate, r0, seed, config.max_codewords)
            for r0, seed in star_grid
        ]
        excess_grid = [(count, seed) for count in key_counts for seed in config.seeds]
        excess_jobs = [partial(excess_trial, context, config.x_n, count, seed) for count, seed in excess_grid]
        logger.info("covering: %d codebook trials, %d key trials", len(star_jobs), len(excess_jobs))
        stars = await gather_in_pool(star_jobs, threads, timeout)
        excess = await gather_in_pool(excess_jobs, threads, timeout)

        star_rows = [[config.n, r0, seed, mean, worst] for (r0, seed), (mean, worst) in zip(star_grid, stars, strict=True)]
        excess_rows = [
            [len(config.x_n), count, seed, value] for (count, seed), value in zip(excess_grid, excess, strict=True)
        ]
        reps = len(config.seeds)
        star_means = [float(np.mean([m for m, _ in stars[i * reps : (i + 1) * reps]])) for i in range(len(config.r0_grid))]
        excess_means = [float(np.mean(excess[i * reps : (i + 1) * reps])) for i in range(len(key_counts))]
        quantities = entropic_quantities(build_omega(chan, ensemble))
        summary = {
            "n": config.n,
            "rate": config.rate,
            "x_n": list(config.x_n),
            "seeds": [config.seeds[0], config.seeds[-1]],
            "repetitions": reps,
            "delta_star": {
                "r0_grid": list(config.r0_grid),
                "means": star_means,
                "strictly_decreasing": _strictly_decreasing(star_means),
                "threshold_I_XEG2": quantities.i_xeg2,
            },
            "delta_excess": {
                "key_counts": key_counts,
                "means": excess_means,
                "strictly_decreasing": _strictly_decreasing(excess_means),
                "threshold_I_G2E_X": quantities.i_g2e_x,
                "key_space_size": full,
                "zeta_exhaustive": zeta.exhaustive,
                "zeta_sample_size": zeta.sample_size,
                "zeta_seed": zeta.seed,
            },
        }
        return CommandResult(
            artifacts={
                "delta_star.csv": render_csv(DELTA_STAR_COLUMNS, star_rows),
                "delta_excess.csv": render_csv(DELTA_EXCESS_COLUMNS, excess_rows),
            },
            summary=summary,
        )
