"""Core domain types: events, sensor geometry and immutable event streams.

An event stream is stored column-wise (one numpy array per field) so that
multi-million-event recordings stay cheap to hold and to scan. The
``events`` property exposes the familiar per-event view on top of it.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .errors import EmptyGeometry, OutOfBounds

logger = logging.getLogger(__name__)


class Polarity(Enum):
    """Direction of the brightness change that triggered an event."""

    OFF = 0
    ON = 1


class Condition(Enum):
    """Recording condition of a subject."""

    RESTING = "resting"
    ELEVATED = "elevated"


class Event(NamedTuple):
    """A single pixel activation."""

    t_us: int
    x: int
    y: int
    polarity: Polarity


@dataclass(frozen=True)
class SensorGeometry:
    """Pixel dimensions of the sensor frame."""

    width: int = 1280
    height: int = 720

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise EmptyGeometry(f"invalid geometry {self.width}x{self.height}")


DEFAULT_GEOMETRY = SensorGeometry()


@dataclass(frozen=True)
class RecordingMeta:
    """Descriptive recording metadata. Never enters any estimation math."""

    subject_id: Optional[str] = None
    condition: Optional[Condition] = None
    bias_profile: Optional[str] = None
    source_path: Optional[str] = None


class _EventView(Sequence):
    """Read-only per-event view over the columnar arrays of a stream."""

    def __init__(self, stream: "EventStream"):
        self._s = stream

    def __len__(self) -> int:
        return len(self._s)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        s = self._s
        return Event(int(s.t_us[i]), int(s.x[i]), int(s.y[i]),
                     Polarity(int(s.polarity[i])))


class EventStream:
    """Time-ordered events plus sensor geometry and recording metadata.

    Immutable after construction; the backing arrays are marked read-only,
    so a stream can be shared freely across threads. Equality compares
    geometry and event content; metadata is descriptive and excluded.
    """

    __slots__ = ("geometry", "meta", "t_us", "x", "y", "polarity")

    def __init__(self, geometry: SensorGeometry, t_us: np.ndarray,
                 x: np.ndarray, y: np.ndarray, polarity: np.ndarray,
                 meta: Optional[RecordingMeta] = None):
        self.geometry = geometry
        self.meta = meta if meta is not None else RecordingMeta()
        self.t_us = t_us
        self.x = x
        self.y = y
        self.polarity = polarity
        for a in (t_us, x, y, polarity):
            a.setflags(write=False)

    def __len__(self) -> int:
        return self.t_us.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (self.geometry == other.geometry
                and len(self) == len(other)
                and bool(np.array_equal(self.t_us, other.t_us))
                and bool(np.array_equal(self.x, other.x))
                and bool(np.array_equal(self.y, other.y))
                and bool(np.array_equal(self.polarity, other.polarity)))

    def __repr__(self) -> str:
        g = self.geometry
        return (f"EventStream({len(self)} events, {g.width}x{g.height}, "
                f"{self.duration_us / 1e6:.6f} s)")

    @property
    def events(self) -> Sequence[Event]:
        return _EventView(self)

    @property
    def duration_us(self) -> int:
        if len(self) < 2:
            return 0
        return int(self.t_us[-1] - self.t_us[0])


def _owned(a, dtype) -> np.ndarray:
    b = np.ascontiguousarray(a, dtype=dtype)
    return b.copy() if b is a else b


def from_arrays(t_us, x, y, polarity, geometry: SensorGeometry,
                meta: Optional[RecordingMeta] = None) -> EventStream:
    """Build a stream from columnar arrays, sorting and validating them.

    Sorting is stable, so events sharing a timestamp keep their input
    order and rebuilding an already-sorted stream is a no-op. The number
    of events found out of order is reported on the module logger.
    """
    t_us = _owned(t_us, np.int64)
    x = _owned(x, np.int32)
    y = _owned(y, np.int32)
    polarity = _owned(polarity, np.int8)
    n = t_us.shape[0]
    if not (x.shape[0] == y.shape[0] == polarity.shape[0] == n):
        raise ValueError("event field arrays differ in length")

    if n:
        if t_us.min() < 0:
            raise ValueError("negative event timestamp")
        bad = ((x < 0) | (x >= geometry.width)
               | (y < 0) | (y >= geometry.height))
        if bad.any():
            i = int(np.argmax(bad))
            raise OutOfBounds(int(x[i]), int(y[i]),
                              geometry.width, geometry.height)
        # events that arrive behind the running maximum are out of order
        n_reordered = int(np.sum(t_us < np.maximum.accumulate(t_us)))
        if n_reordered:
            logger.info("sorted %d out-of-order events", n_reordered)
            order = np.argsort(t_us, kind="stable")
            t_us = t_us[order]
            x = x[order]
            y = y[order]
            polarity = polarity[order]

    return EventStream(geometry, t_us, x, y, polarity, meta)


def build_stream(events: Iterable[Event], geometry: SensorGeometry,
                 meta: Optional[RecordingMeta] = None) -> EventStream:
    """Build a validated, time-sorted stream from individual events."""
    ev = list(events)
    if not ev:
        empty = np.empty(0, dtype=np.int64)
        return EventStream(geometry, empty, empty.astype(np.int32),
                           empty.astype(np.int32), empty.astype(np.int8), meta)
    t_us = np.fromiter((e.t_us for e in ev), dtype=np.int64, count=len(ev))
    x = np.fromiter((e.x for e in ev), dtype=np.int32, count=len(ev))
    y = np.fromiter((e.y for e in ev), dtype=np.int32, count=len(ev))
    pol = np.fromiter((e.polarity.value for e in ev), dtype=np.int8,
                      count=len(ev))
    return from_arrays(t_us, x, y, pol, geometry, meta)


def duration_s(stream: EventStream) -> float:
    """Span between first and last event in seconds (0 if fewer than 2)."""
    return stream.duration_us / 1e6
