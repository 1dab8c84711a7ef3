import logging
from fractions import Fraction
from pathlib import Path

import pandas as pd
from lib.exceptions import EdgeListFormatError, RecordFormatError
from lib.schemas.colouring import Colour, TriColouring
from lib.schemas.estimators import CensusEntry, RootedTreeClass
from lib.schemas.experiment import TrialRecord
from pydantic import BaseModel

logger = logging.getLogger(__name__)

RECORD_COLUMNS = [
    "trial",
    "seed",
    "l_tilde",
    "l_tilde_k_num",
    "l_tilde_k_den",
    "l_hat_k_num",
    "l_hat_k_den",
    "max_rp_comp",
    "aborts",
    "runtime_us",
]
CENSUS_COLUMNS = ["canonical_code", "size", "alpha_num", "alpha_den", "count"]


def _text(value: int | None) -> str:
    return "" if value is None else str(value)


def _fraction_cells(value: Fraction | None) -> list[str]:
    return ["", ""] if value is None else [str(value.numerator), str(value.denominator)]


def _write_frame(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")


def _read_frame(path: Path, columns: list[str]) -> pd.DataFrame:
    if not path.is_file():
        raise RecordFormatError("The record file path is not a file", path=str(path))

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as ex:
        raise RecordFormatError("Record file could not be parsed", path=str(path), exception=ex)

    if list(frame.columns) != columns:
        raise RecordFormatError(f"Expected header {','.join(columns)}", path=str(path), line=1)

    return frame


def write_records(records: list[TrialRecord], path: Path) -> None:
    """
    Writes trial records as CSV, rationals split into numerator and denominator columns.
    Records are sorted by trial index, so the file does not depend on the order they were collected in.
    :param records: Trial records
    :param path: Destination CSV file
    """
    rows = [
        [
            str(record.trial),
            str(record.seed),
            _text(record.l_tilde),
            *_fraction_cells(record.l_tilde_k),
            *_fraction_cells(record.l_hat_k),
            str(record.max_rp_comp),
            str(record.aborts),
            str(record.runtime_us),
        ]
        for record in sorted(records, key=lambda record: record.trial)
    ]
    _write_frame(pd.DataFrame(rows, columns=RECORD_COLUMNS, dtype=str), path)


def _optional_int(cell: str) -> int | None:
    return None if cell == "" else int(cell)


def _optional_fraction(numerator: str, denominator: str) -> Fraction | None:
    if numerator == "" and denominator == "":
        return None

    return Fraction(int(numerator), int(denominator))


def read_records(path: Path) -> list[TrialRecord]:
    """
    Reads a file written by write_records.
    :param path: CSV file
    :return: Trial records in file order
    :raise RecordFormatError: Naming the path and the 1-based line of the first malformed row
    """
    frame = _read_frame(path, RECORD_COLUMNS)
    records = []

    for index, row in enumerate(frame.itertuples(index=False)):
        try:
            records.append(
                TrialRecord(
                    trial=int(row.trial),
                    seed=int(row.seed),
                    l_tilde=_optional_int(row.l_tilde),
                    l_tilde_k=_optional_fraction(row.l_tilde_k_num, row.l_tilde_k_den),
                    l_hat_k=_optional_fraction(row.l_hat_k_num, row.l_hat_k_den),
                    max_rp_comp=int(row.max_rp_comp),
                    aborts=int(row.aborts),
                    runtime_us=int(row.runtime_us),
                )
            )
        except (ValueError, ZeroDivisionError) as ex:
            raise RecordFormatError(
                f"Malformed record in data row {index + 1}", path=str(path), row=index + 1, exception=ex
            )

    return records


def write_census(entries: list[CensusEntry], path: Path) -> None:
    rows = [
        [
            entry.tree.canonical_code,
            str(entry.tree.size),
            str(entry.tree.alpha.numerator),
            str(entry.tree.alpha.denominator),
            str(entry.count),
        ]
        for entry in entries
    ]
    _write_frame(pd.DataFrame(rows, columns=CENSUS_COLUMNS, dtype=str), path)


def read_census(path: Path) -> list[CensusEntry]:
    frame = _read_frame(path, CENSUS_COLUMNS)
    entries = []

    for index, row in enumerate(frame.itertuples(index=False)):
        try:
            tree = RootedTreeClass(
                canonical_code=row.canonical_code,
                size=int(row.size),
                alpha=Fraction(int(row.alpha_num), int(row.alpha_den)),
            )
            entries.append(CensusEntry(tree=tree, count=int(row.count)))
        except (ValueError, ZeroDivisionError) as ex:
            raise RecordFormatError(
                f"Malformed census entry in data row {index + 1}", path=str(path), row=index + 1, exception=ex
            )

    return entries


def write_colouring(colouring: TriColouring, path: Path) -> None:
    """
    Writes a colouring as three lines "S: ids", "P: ids" and "R: ids"
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        f"{colour.value}: {' '.join(str(x) for x in sorted(members))}".rstrip()
        for colour, members in ((Colour.sapphire, colouring.s), (Colour.purple, colouring.p), (Colour.red, colouring.r))
    ]
    path.write_text("\n".join(lines) + "\n")


def read_colouring(path: Path) -> TriColouring:
    """
    Reads a colouring written by write_colouring. The peel order is not stored.
    :param path: Text file
    :return: TriColouring
    :raise EdgeListFormatError: On a missing or repeated class line, an unknown label or a vertex in two classes
    """
    classes: dict[str, frozenset[int]] = {}

    for line_number, raw_line in enumerate(path.read_text().splitlines(), start=1):
        line = raw_line.strip()

        if not line:
            continue

        label, _, members = line.partition(":")
        label = label.strip()

        if label not in {colour.value for colour in Colour} or label in classes:
            raise EdgeListFormatError(f"{path}:{line_number}: unexpected class label {label!r}")

        try:
            classes[label] = frozenset(int(token) for token in members.split())
        except ValueError as ex:
            raise EdgeListFormatError(f"{path}:{line_number}: vertex ids must be integers", exception=ex)

    if len(classes) != len(Colour):
        raise EdgeListFormatError(f"{path}: expected S, P and R lines, got {sorted(classes)}")

    s, p, r = (classes[colour.value] for colour in Colour)

    if s & p or s & r or p & r:
        raise EdgeListFormatError(f"{path}: a vertex appears in two colour classes")

    return TriColouring(s=s, p=p, r=r)


def write_json(model: BaseModel, path: Path) -> None:
    """
    Writes a report as indented JSON, keys in field order
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n")
