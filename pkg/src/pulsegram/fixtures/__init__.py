"""Paths to the data files bundled with the package."""

from importlib.resources import files
from pathlib import Path


def table1_path() -> Path:
    """Reference table of actual and detected heart rates per subject."""
    return Path(str(files(__package__) / "table1.csv"))


def table1_manifest_path() -> Path:
    """Evaluation manifest binding the reference detections directly."""
    return Path(str(files(__package__) / "table1_manifest.csv"))
