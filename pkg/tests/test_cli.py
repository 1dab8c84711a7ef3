import json
import sys
from itertools import combinations
from pathlib import Path

import pytest
from circum_lab import cli, main
from cli import experiments
from click.testing import CliRunner
from core.config import settings
from core.schema import ExitCode
from lib.schemas.experiment import ThresholdPoint, ThresholdScanReport
from lib.utils.files import read_colouring


@pytest.fixture(autouse=True)
def logs_in_tmp(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setattr(settings, "logs_directory", tmp_path / "logs")


@pytest.fixture
def k6_file(tmp_path: Path) -> Path:
    path = tmp_path / "k6.txt"
    edges = list(combinations(range(6), 2))
    path.write_text("\n".join([f"6 {len(edges)}", *(f"{u} {v}" for u, v in edges)]) + "\n")

    return path


def invoke(*args: str):
    return CliRunner().invoke(cli, list(args), standalone_mode=False)


def test_balls_bins_writes_report(tmp_path: Path):
    output = tmp_path / "out"
    result = invoke(
        "--seed", "2", "--output", str(output), "balls-bins", "--bins", "5", "--balls", "6", "--trials", "5000"
    )
    report = json.loads((output / "balls-bins.json").read_text())

    assert result.exception is None, result.output
    assert result.return_value == ExitCode.success
    assert report["exact"] is not None
    assert report["passed"] is True


def test_colour_audit_on_edge_list(k6_file: Path):
    result = invoke("colour", "--graph", str(k6_file), "--audit", "--checks", "20")

    assert result.exception is None, result.output
    assert result.return_value == ExitCode.success


def test_colour_export(k6_file: Path, tmp_path: Path):
    export = tmp_path / "colouring.txt"
    result = invoke("colour", "--graph", str(k6_file), "--export", str(export))

    assert result.return_value == ExitCode.success
    assert read_colouring(export).s == frozenset(range(6))


def test_phi_on_edge_list(k6_file: Path, tmp_path: Path):
    output = tmp_path / "out"
    result = invoke("--output", str(output), "phi", "--graph", str(k6_file))
    report = json.loads((output / "phi.json").read_text())

    assert result.return_value == ExitCode.success
    assert report["n"] == 6
    assert report["phi_total"] == 0


def test_theorem11_rejects_small_c():
    result = invoke("theorem11", "--n", "1000", "--c", "10", "--trials", "1")

    assert result.exit_code == ExitCode.usage_error


@pytest.mark.parametrize("jump, expected", [(9.2, ExitCode.success), (8.0, ExitCode.acceptance_failure)])
def test_threshold_scan_exit_code_follows_the_jump(jump, expected, monkeypatch: pytest.MonkeyPatch):
    report = ThresholdScanReport(
        n=1000,
        trials=1,
        points=(ThresholdPoint(c=jump, strong_core_fraction=0.5),),
        strong_core_jump=jump,
        strong_core_window=(8.8, 9.7),
    )
    monkeypatch.setattr(experiments, "run_threshold_scan", lambda config: report)
    result = invoke("threshold-scan", "--n", "1000", "--c-min", "8", "--c-max", "10", "--trials", "1")

    assert result.exception is None, result.output
    assert result.return_value == expected

def test_config_show_applies_global_flags():
    result = invoke("--seed", "7", "config", "show", "clt")

    assert result.exception is None, result.output
    assert "seed=7" in result.output
    assert "experiment=clt" in result.output


def test_saved_config_is_read_back(tmp_path: Path):
    path = tmp_path / "threshold.conf"
    invoke("--seed", "11", "config", "save", "threshold-scan", str(path))
    result = invoke("--config", str(path), "config", "show", "threshold-scan")

    assert path.is_file()
    assert "seed=11" in result.output


def test_main_maps_library_errors_to_usage_error(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    broken = tmp_path / "broken.txt"
    broken.write_text("3 1\n0 x\n")
    monkeypatch.setattr(sys, "argv", ["circumlab", "phi", "--graph", str(broken)])

    with pytest.raises(SystemExit) as ex:
        main()

    assert ex.value.code == ExitCode.usage_error


def test_main_exits_zero_on_success(k6_file: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setattr(sys, "argv", ["circumlab", "colour", "--graph", str(k6_file)])

    with pytest.raises(SystemExit) as ex:
        main()

    assert ex.value.code == ExitCode.success
