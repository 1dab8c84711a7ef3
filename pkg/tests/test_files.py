import json
from fractions import Fraction
from pathlib import Path

import pytest
from lib.exceptions import EdgeListFormatError, RecordFormatError
from lib.schemas.colouring import TriColouring
from lib.schemas.estimators import CensusEntry, RootedTreeClass
from lib.schemas.experiment import TrialRecord
from lib.utils.files import (
    RECORD_COLUMNS,
    read_census,
    read_colouring,
    read_records,
    write_census,
    write_colouring,
    write_json,
    write_records,
)


def make_record(trial: int, aborted: bool = False) -> TrialRecord:
    return TrialRecord(
        trial=trial,
        seed=1000 + trial,
        l_tilde=None if aborted else 40 + trial,
        l_tilde_k=None if aborted else Fraction(81 + 2 * trial, 2),
        l_hat_k=None if aborted else Fraction(7, 3),
        max_rp_comp=5,
        aborts=int(aborted),
        runtime_us=0,
    )


def test_records_survive_a_round_trip(tmp_path: Path):
    records = [make_record(2), make_record(0), make_record(1, aborted=True)]
    path = tmp_path / "records" / "clt.csv"
    write_records(records, path)

    assert read_records(path) == sorted(records, key=lambda record: record.trial)


def test_aborted_record_leaves_empty_cells(tmp_path: Path):
    path = tmp_path / "clt.csv"
    write_records([make_record(0, aborted=True)], path)
    lines = path.read_text().splitlines()

    assert lines[0] == ",".join(RECORD_COLUMNS)
    assert lines[1] == "0,1000,,,,,,5,1,0"


def test_empty_record_set_writes_header_only(tmp_path: Path):
    path = tmp_path / "empty.csv"
    write_records([], path)

    assert path.read_text().splitlines() == [",".join(RECORD_COLUMNS)]
    assert read_records(path) == []


def test_wrong_header_is_reported_on_line_one(tmp_path: Path):
    path = tmp_path / "bad.csv"
    path.write_text("trial,seed\n0,1\n")

    with pytest.raises(RecordFormatError) as ex:
        read_records(path)

    assert ex.value.line == 1
    assert ex.value.path == str(path)


def test_malformed_row_reports_its_data_row(tmp_path: Path):
    path = tmp_path / "clt.csv"
    write_records([make_record(0), make_record(1)], path)
    lines = path.read_text().splitlines()
    lines[2] = lines[2].replace("1001", "not-a-seed")
    path.write_text("\n".join(lines) + "\n")

    with pytest.raises(RecordFormatError) as ex:
        read_records(path)

    assert ex.value.row == 2
    assert "data row 2" in str(ex.value)


def test_zero_denominator_is_malformed(tmp_path: Path):
    path = tmp_path / "clt.csv"
    path.write_text(",".join(RECORD_COLUMNS) + "\n0,1,4,1,0,1,1,0,0,0\n")

    with pytest.raises(RecordFormatError) as ex:
        read_records(path)

    assert ex.value.row == 1


def test_blank_lines_do_not_shift_the_data_row(tmp_path: Path):
    path = tmp_path / "clt.csv"
    write_records([make_record(0), make_record(1)], path)
    lines = path.read_text().splitlines()
    lines[2] = lines[2].replace("1001", "not-a-seed")
    path.write_text("\n".join([lines[0], "", lines[1], "", lines[2]]) + "\n")

    with pytest.raises(RecordFormatError) as ex:
        read_records(path)

    assert ex.value.row == 2


def test_missing_record_file(tmp_path: Path):
    with pytest.raises(RecordFormatError):
        read_records(tmp_path / "absent.csv")


def test_census_round_trip(tmp_path: Path):
    entries = [
        CensusEntry(tree=RootedTreeClass(canonical_code="()", size=1, alpha=Fraction(1)), count=12),
        CensusEntry(tree=RootedTreeClass(canonical_code="(()())", size=3, alpha=Fraction(2, 3)), count=4),
    ]
    path = tmp_path / "census.csv"
    write_census(entries, path)

    assert read_census(path) == entries


def test_colouring_round_trip(tmp_path: Path):
    colouring = TriColouring(s=frozenset({0, 1, 2, 3, 4}), p=frozenset({5}), r=frozenset())
    path = tmp_path / "colouring.txt"
    write_colouring(colouring, path)

    assert path.read_text().splitlines() == ["S: 0 1 2 3 4", "P: 5", "R:"]
    assert read_colouring(path).same_partition(colouring)


@pytest.mark.parametrize(
    "content",
    [
        "S: 0 1\nP: 2\nQ: 3\n",
        "S: 0 1\nS: 2\nR: 3\n",
        "S: 0 1\nP: 1\nR: 3\n",
        "S: 0 1\nP: 2\n",
        "S: 0 x\nP: 2\nR: 3\n",
    ],
)
def test_malformed_colouring_files(tmp_path: Path, content: str):
    path = tmp_path / "colouring.txt"
    path.write_text(content)

    with pytest.raises(EdgeListFormatError):
        read_colouring(path)


def test_write_json_serializes_rationals(tmp_path: Path):
    path = tmp_path / "nested" / "record.json"
    write_json(make_record(3), path)
    content = json.loads(path.read_text())

    assert content["l_tilde_k"] == "87/2"
    assert content["l_hat_k"] == "7/3"
    assert list(content) == list(TrialRecord.model_fields)
