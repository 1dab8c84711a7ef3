from pathlib import Path

import pytest
from core.config import load_config, read_config_pairs, save_config, settings
from lib.exceptions import RecordFormatError
from lib.schemas.experiment import ExperimentConfig, ExperimentKind


def test_settings_supply_defaults():
    config = load_config(None, {"experiment": "clt"})

    assert config.experiment == ExperimentKind.clt
    assert config.seed == settings.default_seed
    assert config.k == settings.default_k
    assert config.size_cap == settings.size_cap
    assert config.budget == settings.cycle_budget


def test_file_overrides_defaults_and_flags_override_file(tmp_path: Path):
    path = tmp_path / "run.conf"
    path.write_text("# desk run\nexperiment=clt\nn=500\nc=12.5\n\nsize-cap=32\nseed=4\n")
    config = load_config(path, {"seed": 9, "k": None})

    assert config.n == 500
    assert config.c == 12.5
    assert config.size_cap == 32
    assert config.seed == 9
    assert config.k == settings.default_k


def test_saved_config_loads_back(tmp_path: Path):
    config = ExperimentConfig(
        experiment=ExperimentKind.variance_scan,
        n=200,
        c=5.0,
        trials=150,
        sizes=(100, 200, 400),
        plain_core=True,
    )
    path = tmp_path / "saved" / "variance.conf"
    save_config(config, path)

    assert "sizes=100,200,400" in path.read_text().splitlines()
    assert load_config(path) == config


def test_comma_lists_are_split():
    config = load_config(None, {"experiment": "tail-bound", "n": 100, "c": 0.1, "s_grid": "2, 4,8,"})

    assert config.s_grid == (2, 4, 8)


def test_missing_config_file(tmp_path: Path):
    with pytest.raises(RecordFormatError):
        read_config_pairs(tmp_path / "absent.conf")


def test_line_without_separator(tmp_path: Path):
    path = tmp_path / "broken.conf"
    path.write_text("experiment=clt\nn 500\n")

    with pytest.raises(RecordFormatError) as ex:
        load_config(path)

    assert ex.value.line == 2


@pytest.mark.parametrize(
    "overrides",
    [
        {"experiment": "clt", "trials": 99},
        {"experiment": "theorem11", "n": 1000, "c": 10},
        {"experiment": "variance-scan", "sizes": "1000"},
        {"experiment": "threshold-scan", "c_min": 11, "c_max": 8},
        {"experiment": "census", "n": 10, "c": 20},
        {"experiment": "clt", "unknown": 1},
        {"experiment": "no-such-experiment"},
    ],
)
def test_invalid_configurations(overrides):
    with pytest.raises(RecordFormatError):
        load_config(None, overrides)


def test_balls_bins_ignores_the_edge_density_check():
    config = load_config(None, {"experiment": "balls-bins", "n": 1, "bins": 10, "balls": 3})

    assert config.c > config.n
