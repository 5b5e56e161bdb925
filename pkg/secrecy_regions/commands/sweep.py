from typing import ClassVar

from ..config import Command, RunConfig
from ..output import SWEEP_COLUMNS, region_row, render_csv
from ..rate_regions import cross_model_violations
from .base import BaseCommand, CommandResult
from .region import evaluate_grid, model_summary


class SweepCommand(BaseCommand):
    """The region computation repeated over a grid of damping parameters."""

    name: ClassVar[Command] = Command.SWEEP
    description: ClassVar[str] = "Repeat the region sweep for every gamma of gamma_grid"

    async def __call__(
        self, config: RunConfig, *, threads: int = 1, timeout: float | None = None
    ) -> CommandResult:
        rows = []
        per_gamma = {}
        for gamma in config.gamma_grid:
            evaluations = await evaluate_grid(config, gamma, threads=threads, timeout=timeout)
            rows.extend([gamma, *region_row(e)] for e in evaluations)
            violations = cross_model_violations(evaluations)
            per_gamma[repr(gamma)] = {
                "models": {
                    model.value: model_summary(evaluations, model, config.r_floor, config.t_points)[0]
                    for model in config.models
                },
                "cross_model_violations": [e.parameter for e in violations],
            }
        summary = {
            "gamma_grid": list(config.gamma_grid),
            "per_gamma": per_gamma,
            "cross_model_ordering_holds": not any(v["cross_model_violations"] for v in per_gamma.values()),
        }
        return CommandResult(artifacts={"sweep.csv": render_csv(SWEEP_COLUMNS, rows)}, summary=summary)
