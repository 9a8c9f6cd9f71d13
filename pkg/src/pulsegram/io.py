"""Reading and writing event recordings and ground-truth tables.

Two textual event formats are supported:

* csv:   one event per line, ``t_us,x,y,p`` (sort-friendly field order)
* paren: one event per line, ``( x, y, p, t_us )``

Polarity on disk may be encoded either as {0, 1} or as {-1, 1}; both are
accepted, with 1 meaning ON and 0 or -1 meaning OFF. Lines starting with
``#`` and blank lines are skipped in both formats.
"""

from __future__ import annotations

import csv
import io as _stdio
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO, Union

import numpy as np

from .errors import ParseError, RangeError
from .events import EventStream, RecordingMeta, SensorGeometry, from_arrays

BPM_RANGE = (30.0, 250.0)

_PAREN_LINE = re.compile(
    r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


@dataclass(frozen=True)
class GroundTruthRecord:
    """One subject's reference heart rates plus demographic descriptors."""

    subject_id: str
    age_band: str
    gender: str
    skin_tone: str
    actual_hr_resting: Optional[float]
    actual_hr_elevated: Optional[float]


def _decode_polarity(p: int, line_no: int) -> int:
    if p == 1:
        return 1
    if p in (0, -1):
        return 0
    raise ParseError(line_no, f"polarity must be 0, 1 or -1, got {p}")


def parse_csv_events(f: TextIO, geometry: SensorGeometry,
                     meta: Optional[RecordingMeta] = None) -> EventStream:
    """Parse ``t_us,x,y,p`` lines into a stream.

    Well-formed files go through numpy's bulk parser; on any failure the
    input is re-scanned line by line to report the offending line number.
    """
    text = f.read()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # empty input warns
            arr = np.loadtxt(_stdio.StringIO(text), delimiter=",",
                             dtype=np.int64, comments="#", ndmin=2)
    except Exception:
        arr = _scan_csv(text)
    if arr.size and arr.shape[1] != 4:
        arr = _scan_csv(text)  # raises with the right line number
    if arr.size == 0:
        arr = arr.reshape(0, 4)
    t, x, y, p = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
    ok = (p == 1) | (p == 0) | (p == -1)
    if not ok.all():
        _scan_csv(text)  # locate the bad polarity
    return from_arrays(t, x, y, (p == 1).astype(np.int8), geometry, meta)


def _scan_csv(text: str) -> np.ndarray:
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ParseError(line_no, f"expected 4 fields, got {len(parts)}")
        try:
            t, x, y, p = (int(v) for v in parts)
        except ValueError:
            raise ParseError(line_no, f"non-integer field in {line!r}") from None
        rows.append((t, x, y, _decode_polarity(p, line_no)))
    if not rows:
        return np.empty((0, 4), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def parse_paren_events(f: TextIO, geometry: SensorGeometry,
                       meta: Optional[RecordingMeta] = None) -> EventStream:
    """Parse ``( x, y, p, t_us )`` lines into a stream."""
    rows = []
    for line_no, raw in enumerate(f, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _PAREN_LINE.match(line)
        if m is None:
            raise ParseError(line_no, f"not a '( x, y, p, t )' record: {line!r}")
        x, y, p, t = (int(g) for g in m.groups())
        rows.append((t, x, y, _decode_polarity(p, line_no)))
    if not rows:
        arr = np.empty((0, 4), dtype=np.int64)
    else:
        arr = np.asarray(rows, dtype=np.int64)
    return from_arrays(arr[:, 0], arr[:, 1], arr[:, 2],
                       arr[:, 3].astype(np.int8), geometry, meta)


def write_csv_events(stream: EventStream, f: TextIO) -> None:
    """Write a stream in csv format; round-trips through parse_csv_events."""
    f.write("# t_us,x,y,p\n")
    if len(stream) == 0:
        return
    cols = np.column_stack([stream.t_us,
                            stream.x.astype(np.int64),
                            stream.y.astype(np.int64),
                            stream.polarity.astype(np.int64)])
    np.savetxt(f, cols, fmt="%d,%d,%d,%d")


def write_paren_events(stream: EventStream, f: TextIO) -> None:
    """Write a stream in paren format; round-trips through parse_paren_events."""
    f.write("# ( x, y, p, t_us )\n")
    if len(stream) == 0:
        return
    cols = np.column_stack([stream.x.astype(np.int64),
                            stream.y.astype(np.int64),
                            stream.polarity.astype(np.int64),
                            stream.t_us])
    np.savetxt(f, cols, fmt="( %d, %d, %d, %d )")


def sniff_format(path: Union[str, Path]) -> str:
    """Guess 'csv' or 'paren' from the first data line of a file."""
    with open(path, encoding="utf-8") as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            return "paren" if line.startswith("(") else "csv"
    return "csv"


def load_events(path: Union[str, Path], geometry: SensorGeometry,
                fmt: Optional[str] = None,
                meta: Optional[RecordingMeta] = None) -> EventStream:
    """Load a recording from a file, auto-detecting the format."""
    if fmt is None:
        fmt = sniff_format(path)
    if meta is None:
        meta = RecordingMeta(source_path=str(path))
    parser = {"csv": parse_csv_events, "paren": parse_paren_events}[fmt]
    with open(path, encoding="utf-8") as f:
        return parser(f, geometry, meta)


def save_events(stream: EventStream, path: Union[str, Path],
                fmt: str = "csv") -> None:
    writer = {"csv": write_csv_events, "paren": write_paren_events}[fmt]
    with open(path, "w", encoding="utf-8") as f:
        writer(stream, f)


def _parse_bpm_cell(cell: str, line_no: int, column: str) -> Optional[float]:
    cell = cell.strip()
    if not cell:
        return None
    try:
        bpm = float(cell)
    except ValueError:
        raise ParseError(line_no, f"{column}: not a number: {cell!r}") from None
    if not BPM_RANGE[0] <= bpm <= BPM_RANGE[1]:
        raise RangeError(f"line {line_no}: {column}={bpm} outside "
                         f"[{BPM_RANGE[0]:g}, {BPM_RANGE[1]:g}] bpm")
    return bpm


GROUND_TRUTH_COLUMNS = ("subject_id", "age", "gender", "skin_tone",
                        "resting_hr", "elevated_hr")


def parse_ground_truth(f: TextIO) -> list[GroundTruthRecord]:
    """Parse the ground-truth CSV (extra columns are ignored).

    Header: ``subject_id,age,gender,skin_tone,resting_hr,elevated_hr``.
    Empty heart-rate cells mean the subject declined that measurement.
    """
    reader = csv.DictReader(f)
    missing = [c for c in GROUND_TRUTH_COLUMNS
               if c not in (reader.fieldnames or [])]
    if missing:
        raise ParseError(1, f"missing ground-truth columns: {missing}")
    records = []
    for line_no, row in enumerate(reader, start=2):
        records.append(GroundTruthRecord(
            subject_id=row["subject_id"].strip(),
            age_band=row["age"].strip(),
            gender=row["gender"].strip(),
            skin_tone=row["skin_tone"].strip(),
            actual_hr_resting=_parse_bpm_cell(row["resting_hr"], line_no,
                                              "resting_hr"),
            actual_hr_elevated=_parse_bpm_cell(row["elevated_hr"], line_no,
                                               "elevated_hr"),
        ))
    return records
