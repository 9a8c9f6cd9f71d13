"""Detected-vs-actual comparison, MAE/RMSE aggregation and batch runs.

Non-detections carry no error value: they are counted separately and
excluded from MAE/RMSE, so the metrics describe only the recordings the
estimator was willing to score.

Batch evaluation is driven by a manifest CSV with columns

    subject_id,condition,actual_bpm,recording_path_default,
    recording_path_custom[,detected_bpm]

Each row may point at up to two recordings of the same measurement (one
per camera profile). When both produce a detection, ``oracle`` mode
keeps the one nearer the reference value (an after-the-fact best case),
while ``blind`` mode keeps the higher-confidence one (an honest forward
choice). The optional ``detected_bpm`` column binds a precomputed result
directly (the literal ``ND`` marks a known non-detection), which lets a
manifest replay previously obtained detections without any recordings.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO, Union

from .errors import ManifestError, NoDetections, ParseError, RangeError
from .events import Condition, DEFAULT_GEOMETRY, SensorGeometry
from .io import BPM_RANGE
from .pipeline import DEFAULT_CONFIG, HrEstimate, PipelineConfig, estimate_hr

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("subject_id", "condition", "actual_bpm",
                    "recording_path_default", "recording_path_custom")


@dataclass(frozen=True)
class EvalPair:
    """One reference measurement and what the estimator made of it."""

    subject_id: str
    condition: Condition
    actual_bpm: float
    detected_bpm: Optional[float]  # None = not detected

    def __post_init__(self):
        if not BPM_RANGE[0] <= self.actual_bpm <= BPM_RANGE[1]:
            raise RangeError(f"actual_bpm {self.actual_bpm} outside "
                             f"[{BPM_RANGE[0]:g}, {BPM_RANGE[1]:g}]")

    @property
    def difference(self) -> Optional[float]:
        if self.detected_bpm is None:
            return None
        return self.detected_bpm - self.actual_bpm


@dataclass(frozen=True)
class ConditionStats:
    n_detected: int
    n_nd: int
    mae: Optional[float]
    rmse: Optional[float]


@dataclass(frozen=True)
class EvalReport:
    stats: dict[Condition, ConditionStats]
    pairs: tuple[EvalPair, ...]
    diagnostics: tuple[str, ...] = ()
    mode: Optional[str] = None

    @property
    def n_detected(self) -> int:
        return sum(s.n_detected for s in self.stats.values())


def mae(pairs: list[EvalPair]) -> float:
    """Mean absolute detected-actual difference over detected pairs."""
    diffs = [p.difference for p in pairs if p.detected_bpm is not None]
    if not diffs:
        raise NoDetections("no detected pairs")
    return sum(abs(d) for d in diffs) / len(diffs)


def rmse(pairs: list[EvalPair]) -> float:
    """Root mean squared detected-actual difference over detected pairs."""
    diffs = [p.difference for p in pairs if p.detected_bpm is not None]
    if not diffs:
        raise NoDetections("no detected pairs")
    return math.sqrt(sum(d * d for d in diffs) / len(diffs))


def evaluate_pairs(pairs: list[EvalPair],
                   diagnostics: tuple[str, ...] = (),
                   mode: Optional[str] = None) -> EvalReport:
    """Aggregate pairs into per-condition statistics."""
    ordered = sorted(pairs, key=lambda p: (p.subject_id, p.condition.value))
    stats = {}
    for cond in Condition:
        sub = [p for p in ordered if p.condition is cond]
        if not sub:
            continue
        detected = [p for p in sub if p.detected_bpm is not None]
        stats[cond] = ConditionStats(
            n_detected=len(detected),
            n_nd=len(sub) - len(detected),
            mae=mae(detected) if detected else None,
            rmse=rmse(detected) if detected else None,
        )
    return EvalReport(stats=stats, pairs=tuple(ordered),
                      diagnostics=diagnostics, mode=mode)


def load_table_pairs(f: TextIO) -> list[EvalPair]:
    """Load the bundled reference table of actual and detected rates.

    Expected columns: the ground-truth set plus ``detected_resting_hr``
    and ``detected_elevated_hr``, where a cell of ``ND`` means the
    estimator declined and an empty cell means no measurement exists.
    """
    reader = csv.DictReader(f)
    pairs = []
    for line_no, row in enumerate(reader, start=2):
        for cond, actual_col, detected_col in (
                (Condition.RESTING, "resting_hr", "detected_resting_hr"),
                (Condition.ELEVATED, "elevated_hr", "detected_elevated_hr")):
            actual = row.get(actual_col, "").strip()
            if not actual:
                continue
            detected = row.get(detected_col, "").strip()
            if detected.upper() == "ND":
                detected_bpm = None
            elif detected:
                detected_bpm = float(detected)
            else:
                raise ParseError(line_no, f"missing {detected_col}")
            pairs.append(EvalPair(subject_id=row["subject_id"].strip(),
                                  condition=cond,
                                  actual_bpm=float(actual),
                                  detected_bpm=detected_bpm))
    return pairs


def _pick_detection(candidates: list[HrEstimate], actual: float,
                    mode: str) -> Optional[HrEstimate]:
    detections = [e for e in candidates if e.detected]
    if not detections:
        return None
    if mode == "oracle":
        return min(detections, key=lambda e: abs(e.bpm - actual))
    return max(detections, key=lambda e: e.confidence)


def evaluate_manifest(path: Union[str, Path],
                      config: PipelineConfig = DEFAULT_CONFIG,
                      mode: str = "blind",
                      geometry: SensorGeometry = DEFAULT_GEOMETRY,
                      threads: Optional[int] = None) -> EvalReport:
    """Run the estimator over every manifest row and aggregate the result.

    Rows whose recordings are missing are skipped and reported in the
    diagnostics instead of failing the whole run.
    """
    from .io import load_events

    if mode not in ("oracle", "blind"):
        raise ManifestError(f"mode must be 'oracle' or 'blind', got {mode!r}")
    path = Path(path)
    pairs: list[EvalPair] = []
    diagnostics: list[str] = []
    with open(path, encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = [c for c in MANIFEST_COLUMNS
                   if c not in (reader.fieldnames or [])]
        if missing:
            raise ManifestError(f"missing manifest columns: {missing}")
        for line_no, row in enumerate(reader, start=2):
            subject = row["subject_id"].strip()
            try:
                condition = Condition(row["condition"].strip().lower())
            except ValueError:
                raise ManifestError(f"line {line_no}: unknown condition "
                                    f"{row['condition']!r}") from None
            try:
                actual = float(row["actual_bpm"])
            except ValueError:
                raise ManifestError(f"line {line_no}: bad actual_bpm "
                                    f"{row['actual_bpm']!r}") from None

            bound = (row.get("detected_bpm") or "").strip()
            recordings = []
            for col in ("recording_path_default", "recording_path_custom"):
                rel = (row.get(col) or "").strip()
                if not rel:
                    continue
                rec_path = path.parent / rel if not os.path.isabs(rel) else Path(rel)
                if not rec_path.exists():
                    diagnostics.append(f"line {line_no}: missing file {rel}")
                    logger.warning("manifest line %d: missing file %s",
                                   line_no, rel)
                    continue
                recordings.append(rec_path)

            if recordings:
                estimates = [estimate_hr(load_events(p, geometry), config,
                                         threads=threads)
                             for p in recordings]
                best = _pick_detection(estimates, actual, mode)
                pairs.append(EvalPair(subject, condition, actual,
                                      None if best is None else best.bpm))
            elif bound:
                detected = None if bound.upper() == "ND" else float(bound)
                pairs.append(EvalPair(subject, condition, actual, detected))
            else:
                diagnostics.append(f"line {line_no}: no recording available "
                                   f"for {subject}/{condition.value}")
    return evaluate_pairs(pairs, tuple(diagnostics), mode)


def format_report(report: EvalReport) -> str:
    """Aligned text table of the per-condition error statistics."""
    lines = [f"{'':14s}{'N':>4s}{'ND':>4s}{'MAE':>8s}{'RMSE':>8s}"]
    label = {Condition.RESTING: "Resting HR", Condition.ELEVATED: "Elevated HR"}
    for cond, s in report.stats.items():
        mae_txt = f"{s.mae:.3f}" if s.mae is not None else "-"
        rmse_txt = f"{s.rmse:.3f}" if s.rmse is not None else "-"
        lines.append(f"{label[cond]:14s}{s.n_detected:>4d}{s.n_nd:>4d}"
                     f"{mae_txt:>8s}{rmse_txt:>8s}")
    for note in report.diagnostics:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def report_to_dict(report: EvalReport) -> dict:
    return {
        "mode": report.mode,
        "conditions": {
            cond.value: {"n_detected": s.n_detected, "n_nd": s.n_nd,
                         "mae": s.mae, "rmse": s.rmse}
            for cond, s in report.stats.items()
        },
        "pairs": [{"subject_id": p.subject_id,
                   "condition": p.condition.value,
                   "actual_bpm": p.actual_bpm,
                   "detected_bpm": p.detected_bpm,
                   "difference": p.difference} for p in report.pairs],
        "diagnostics": list(report.diagnostics),
    }
