import math

import pytest

from secrecy_regions.commands import default_collection
from secrecy_regions.commands.permutation import PermutationCommand
from secrecy_regions.config import parse_config
from secrecy_regions.output import PERMUTATION_COLUMNS

SYNTHETIC = "command=permutation\nmessages=16\nexcess_messages=16\nspikes=4\nperm_n=2\nfixtures=3\nseed=2\n"


async def test_synthetic_fixtures():
    result = await PermutationCommand()(parse_config(SYNTHETIC), threads=3)
    lines = result.artifacts["permutation.csv"].splitlines()
    assert lines[0].split(",") == list(PERMUTATION_COLUMNS)
    assert [line.split(",")[:4] for line in lines[1:]] == [
        ["0", "2", "16", "16"],
        ["1", "3", "16", "16"],
        ["2", "4", "16", "16"],
    ]
    summary = result.summary
    assert summary["provenance"] == "synthetic"
    assert summary["all_within_bound"]
    assert summary["worst_max_error"] <= summary["bound"] + 1e-12
    assert summary["bound"] == pytest.approx(0.2)
    assert summary["max_fraction_removed"] == 0.0


def _write_errors(path, entries):
    rows = ["m,m',e"]
    rows.extend(f"{m},{k},{e}" for m, row in enumerate(entries) for k, e in enumerate(row))
    path.write_text("\n".join(rows) + "\n")


async def test_measured_matrix_is_expurgated(tmp_path):
    path = tmp_path / "errors.csv"
    _write_errors(path, [[0.0] * 4, [0.0] * 4, [0.0] * 4, [0.8] * 4])
    config = parse_config(f"command=permutation\nerrors_path={path}\nlam=0.1\nperm_n=2\n")
    result = await PermutationCommand()(config)
    fixture = result.artifacts["permutation.csv"].splitlines()[1].split(",")
    assert fixture[2:5] == ["4", "3", "0.25"]
    assert result.summary["provenance"] == "measured"
    assert result.summary["worst_max_error"] == 0.0


async def test_exhausted_retry_budget_is_a_numerical_failure(tmp_path):
    path = tmp_path / "errors.csv"
    _write_errors(path, [[1.0] + [0.0] * 63])
    config = parse_config(f"command=permutation\nerrors_path={path}\nperm_n=1\nretry_budget=3\n")
    result = await default_collection().run(config)
    assert result.exit_code == 4
    assert result.system == "PermutationBudgetError"
    assert result.details["attempts"] == 3
    assert result.details["best_max_error"] == pytest.approx(1.0)


async def test_summary_reports_a_non_negative_expurgated_rate():
    result = await PermutationCommand()(parse_config(SYNTHETIC))
    summary = result.summary
    assert summary["rate"] == 1.0
    assert summary["rate_loss_bound"] == pytest.approx(math.log2(1 / 0.95) / 2)
    assert summary["expurgated_rate"] == pytest.approx(1.0 - summary["rate_loss_bound"])

    result = await PermutationCommand()(parse_config(SYNTHETIC + "perm_rate=0\n"))
    assert result.summary["expurgated_rate"] == 0.0
    assert result.summary["rate_loss_bound"] > 0.0
