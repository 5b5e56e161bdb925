import csv
import json
from unittest import mock

import pytest

from secrecy_regions import __version__
from secrecy_regions.cli import build_parser, main, run
from secrecy_regions.config import parse_config
from secrecy_regions.output import REGION_COLUMNS

REGION_TEXT = "command=region\nchannel=amplitude_damping\ngamma=0.3\nmodel=both\n"


@pytest.fixture
def write_config(tmp_path):
    def write(text, name="run.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def _error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


@pytest.fixture(scope="module")
def region_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("region")
    config = root / "region.cfg"
    config.write_text(REGION_TEXT)
    assert main(["region", "--config", str(config), "--out", str(root / "out"), "--threads", "4"]) == 0
    return root / "out"


def test_region_run_writes_every_artifact(region_run):
    assert sorted(p.name for p in region_run.iterdir()) == [
        "baseline_interception.csv",
        "baseline_passive.csv",
        "region.csv",
        "summary.json",
    ]
    with (region_run / "region.csv").open(newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == list(REGION_COLUMNS)
    assert len(rows) == 1002
    assert all(len(row) == 10 for row in rows)


def test_summary_carries_results_and_provenance(region_run):
    summary = json.loads((region_run / "summary.json").read_text())
    assert summary["command"] == "region"
    assert summary["samples"] == 1001
    assert summary["provenance"]["version"] == __version__
    assert "gamma=0.3" in summary["provenance"]["config"]
    interception = summary["models"]["interception"]
    assert interception["extreme_point"]["Rp"] == pytest.approx(0.648, abs=0.005)
    assert interception["gap_report"]["gap"] > 0.01
    assert summary["models"]["passive"]["time_division"]["outperformed"]
    assert summary["cross_model_violations"] == []


@pytest.mark.parametrize("model", ["interception", "passive"])
def test_frontier_points_are_dominated_by_csv_rows(region_run, model):
    summary = json.loads((region_run / "summary.json").read_text())
    suffix = "SI" if model == "interception" else "PE"
    with (region_run / "region.csv").open(newline="") as f:
        rectangles = [(float(r[f"R_{suffix}"]), float(r[f"Rp_{suffix}"])) for r in csv.DictReader(f)]
    for point in summary["models"][model]["frontier"]:
        assert any(r >= point["R"] - 1e-9 and rp >= point["Rp"] - 1e-9 for r, rp in rectangles)


def test_identical_configs_give_identical_bytes(write_config, tmp_path):
    config = write_config("command=covering\nn=2\nr0_grid=0,1\nrepetitions=3\nkey_counts=1,4,full\n")
    assert main(["covering", "--config", config, "--out", str(tmp_path / "a")]) == 0
    assert main(["covering", "--config", config, "--out", str(tmp_path / "b"), "--threads", "3"]) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["delta_excess.csv", "delta_star.csv", "summary.json"]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    with (tmp_path / "a" / "delta_star.csv").open(newline="") as f:
        assert len(list(csv.DictReader(f))) == 6


def test_config_errors_exit_two_with_a_record(write_config, tmp_path, capsys):
    config = write_config("command=region\ngamma=1.5\nshape=round\n")
    assert main(["region", "--config", config, "--out", str(tmp_path / "out")]) == 2
    record = _error(capsys)
    assert record["error"] == "ConfigError"
    assert record["exit_code"] == 2
    assert any(p.startswith("gamma:") for p in record["problems"])
    assert "shape: unknown key" in record["problems"]
    assert not (tmp_path / "out").exists()


def test_empty_beta_grid_fails_before_any_computation(write_config, tmp_path, capsys):
    config = write_config("command=region\nbeta_grid=\n")
    assert main(["region", "--config", config, "--out", str(tmp_path / "out")]) == 2
    assert _error(capsys)["problems"][0].startswith("beta_grid:")
    assert not (tmp_path / "out").exists()


def test_unreadable_config_and_bad_threads(tmp_path, write_config, capsys):
    assert main(["region", "--config", str(tmp_path / "absent.cfg")]) == 2
    assert "cannot read" in _error(capsys)["message"]
    assert main(["region", "--config", write_config(REGION_TEXT), "--threads", "0"]) == 2


def test_guard_violation_exits_three(write_config, tmp_path, capsys):
    config = write_config("command=covering\nn=2\nr0_grid=2\nrepetitions=1\nmax_codewords=4\n")
    assert main(["covering", "--config", config, "--out", str(tmp_path / "out")]) == 3
    assert _error(capsys)["error"] == "GuardError"
    assert not (tmp_path / "out").exists()


def test_numerical_failure_exits_four(write_config, tmp_path, capsys):
    errors = tmp_path / "errors.csv"
    errors.write_text("m,m',e\n" + "".join(f"0,{k},{1.0 if k == 0 else 0.0}\n" for k in range(64)))
    config = write_config(f"command=permutation\nerrors_path={errors}\nperm_n=1\nretry_budget=2\n")
    assert main(["permutation", "--config", config, "--out", str(tmp_path / "out")]) == 4
    record = _error(capsys)
    assert record["error"] == "PermutationBudgetError"
    assert record["attempts"] == 2


def test_parser_requires_a_known_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["plot", "--config", "x"])


def test_huge_key_rate_is_a_guard_violation(write_config, tmp_path, capsys):
    config = write_config("command=covering\nn=3\nr0_grid=400\nrepetitions=1\n")
    assert main(["covering", "--config", config, "--out", str(tmp_path / "out")]) == 3
    record = _error(capsys)
    assert record["error"] == "GuardError"
    assert "exceeds the guard" in record["message"]


def test_unexpected_errors_exit_one_with_a_record(tmp_path, capsys):
    config = parse_config(REGION_TEXT)
    with mock.patch("secrecy_regions.cli.default_collection", side_effect=RuntimeError("boom")):
        assert run(config, tmp_path / "out") == 1
    record = _error(capsys)
    assert (record["error"], record["message"], record["exit_code"]) == ("RuntimeError", "boom", 1)
    assert not (tmp_path / "out").exists()


def test_help_lists_every_command(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--help"])
    out = capsys.readouterr().out
    for name in ("region", "sweep", "covering", "permutation"):
        assert f"  {name} " in out
