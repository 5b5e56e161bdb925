from collections.abc import Sequence
from functools import partial
from typing import Any, ClassVar

import numpy as np

from ..config import Command, RunConfig
from ..output import REGION_COLUMNS, region_row, render_csv
from ..rate_regions import (
    Evaluation,
    Model,
    baseline_endpoints,
    boundary_from_evaluations,
    cross_model_violations,
    detect_disconnection,
    evaluate_beta,
    outperforms_time_division,
    time_division_baseline,
)
from .base import BaseCommand, CommandResult
from .pool import gather_in_pool

BASELINE_COLUMNS = ("t", "R", "Rp")


def _pair(pair) -> dict[str, float]:
    return {"R": pair.r, "Rp": pair.r_prime}


def model_summary(
    evaluations: Sequence[Evaluation], model: Model, r_floor: float, t_points: int
) -> tuple[dict[str, Any], list[list[float]]]:
    """Frontier, extreme point, gap report and time-division comparison for one model."""
    boundary = boundary_from_evaluations(evaluations, model)
    gap = detect_disconnection(boundary, r_floor)
    r_star, rp_star = baseline_endpoints(boundary)
    t_grid = [float(t) for t in np.linspace(0.0, 1.0, t_points)]
    baseline = time_division_baseline(r_star, rp_star, t_grid, model)
    witnesses = outperforms_time_division(boundary, r_star, rp_star)
    extreme_parameter, extreme = max(boundary.samples, key=lambda s: s[1].r_prime)
    summary = {
        "frontier": [_pair(p) for p in boundary.frontier],
        "extreme_point": {"beta": extreme_parameter, **_pair(extreme)},
        "gap_report": gap,
        "baseline": {"r_star": r_star, "rp_star": rp_star},
        "time_division": {
            "outperformed": bool(witnesses),
            "witnesses": len(witnesses),
            "first_witness": (
                {"beta": witnesses[0].parameter, "t": witnesses[0].t, **_pair(witnesses[0].pair)}
                if witnesses
                else None
            ),
        },
    }
    rows = [[t, p.r, p.r_prime] for t, p in zip(t_grid, baseline, strict=True)]
    return summary, rows


async def evaluate_grid(
    config: RunConfig, gamma: float, *, threads: int, timeout: float | None
) -> list[Evaluation]:
    chan = config.build_channel(gamma)
    factory = config.ensemble_factory()
    jobs = [partial(evaluate_beta, chan, beta, factory) for beta in config.beta_values()]
    return await gather_in_pool(jobs, threads, timeout)


class RegionCommand(BaseCommand):
    """β-sweep of one channel: per-β informations and rates, frontiers and gap reports."""

    name: ClassVar[Command] = Command.REGION
    description: ClassVar[str] = "Sweep the ensemble parameter and report both rate regions"

    async def __call__(
        self, config: RunConfig, *, threads: int = 1, timeout: float | None = None
    ) -> CommandResult:
        evaluations = await evaluate_grid(config, config.gamma, threads=threads, timeout=timeout)
        artifacts = {"region.csv": render_csv(REGION_COLUMNS, (region_row(e) for e in evaluations))}
        models = {}
        for model in config.models:
            models[model.value], rows = model_summary(evaluations, model, config.r_floor, config.t_points)
            artifacts[f"baseline_{model.value}.csv"] = render_csv(BASELINE_COLUMNS, rows)
        violations = cross_model_violations(evaluations)
        summary = {
            "gamma": config.gamma,
            "samples": len(evaluations),
            "models": models,
            "cross_model_violations": [e.parameter for e in violations],
        }
        return CommandResult(artifacts=artifacts, summary=summary)
