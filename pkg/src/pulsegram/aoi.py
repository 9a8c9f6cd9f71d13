"""Activation heatmap, max-activation window search and tiling.

The three spatial stages of the estimator: count activations per pixel,
locate the square window with the highest total activation (assumed to
cover the marked wrist spot), and split that window into small tiles
whose event streams are analysed independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, TextIO

import numpy as np

from . import _kernels
from .errors import NonDivisible, SideTooLarge
from .events import EventStream, Polarity, SensorGeometry

DEFAULT_AOI_SIDE = 100
DEFAULT_TILE_SIDE = 5


@dataclass(frozen=True)
class Heatmap:
    """Per-pixel activation counts over a whole recording."""

    geometry: SensorGeometry
    counts: np.ndarray  # int64, shape (height, width)

    def __post_init__(self):
        expected = (self.geometry.height, self.geometry.width)
        if self.counts.shape != expected:
            raise ValueError(f"counts shape {self.counts.shape} != {expected}")

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class AreaOfInterest:
    """Square window with the maximal activation sum."""

    x0: int
    y0: int
    side: int
    activation_sum: int


class TileRect(NamedTuple):
    x0: int
    y0: int
    side: int


@dataclass(frozen=True)
class TileGrid:
    """Non-overlapping square tiles covering an area of interest exactly."""

    aoi: AreaOfInterest
    tile_side: int
    tiles: tuple[TileRect, ...]

    @property
    def tiles_per_side(self) -> int:
        return self.aoi.side // self.tile_side

    def __len__(self) -> int:
        return len(self.tiles)


def compute_heatmap(stream: EventStream,
                    polarity: Optional[Polarity] = None) -> Heatmap:
    """Count activations at each pixel.

    By default both polarities count; pass a Polarity to restrict the map
    to ON-only or OFF-only activations.
    """
    g = stream.geometry
    x, y = stream.x, stream.y
    if polarity is not None:
        keep = stream.polarity == polarity.value
        x, y = x[keep], y[keep]
    counts = _kernels.pixel_counts(np.ascontiguousarray(x),
                                   np.ascontiguousarray(y),
                                   g.width, g.height)
    return Heatmap(g, counts)


def find_aoi(heatmap: Heatmap, side: int = DEFAULT_AOI_SIDE) -> AreaOfInterest:
    """Locate the side x side window with the largest activation sum.

    Window sums come from a summed-area table, O(width * height) overall.
    Ties are broken toward the smallest (y0, x0) lexicographically so the
    result is deterministic.
    """
    h, w = heatmap.counts.shape
    if side <= 0:
        raise SideTooLarge(f"window side must be positive, got {side}")
    if side > min(w, h):
        raise SideTooLarge(f"window side {side} exceeds frame {w}x{h}")
    sat = np.zeros((h + 1, w + 1), dtype=np.int64)
    np.cumsum(heatmap.counts, axis=0, out=sat[1:, 1:])
    np.cumsum(sat[1:, 1:], axis=1, out=sat[1:, 1:])
    win = (sat[side:, side:] - sat[:-side, side:]
           - sat[side:, :-side] + sat[:-side, :-side])
    # argmax scans row-major, i.e. first hit is the smallest (y0, x0)
    flat = int(np.argmax(win))
    y0, x0 = divmod(flat, win.shape[1])
    return AreaOfInterest(x0=int(x0), y0=int(y0), side=side,
                          activation_sum=int(win[y0, x0]))


def tile_aoi(aoi: AreaOfInterest,
             tile_side: int = DEFAULT_TILE_SIDE) -> TileGrid:
    """Split a window into row-major non-overlapping square tiles."""
    if tile_side <= 0 or aoi.side % tile_side != 0:
        raise NonDivisible(f"tile side {tile_side} does not divide "
                           f"window side {aoi.side}")
    n = aoi.side // tile_side
    tiles = tuple(TileRect(aoi.x0 + tx * tile_side, aoi.y0 + ty * tile_side,
                           tile_side)
                  for ty in range(n) for tx in range(n))
    return TileGrid(aoi=aoi, tile_side=tile_side, tiles=tiles)


def write_heatmap_csv(heatmap: Heatmap, f: TextIO) -> None:
    """Export non-zero pixels as ``y,x,count`` triplets."""
    f.write("# y,x,count\n")
    ys, xs = np.nonzero(heatmap.counts)
    cols = np.column_stack([ys, xs, heatmap.counts[ys, xs]])
    if cols.size:
        np.savetxt(f, cols, fmt="%d,%d,%d")


def aoi_summary(heatmap: Heatmap, aoi: AreaOfInterest) -> dict:
    """JSON-ready summary of a heatmap and its selected window."""
    return {
        "geometry": {"width": heatmap.geometry.width,
                     "height": heatmap.geometry.height},
        "total_events": heatmap.total,
        "aoi": {"x0": aoi.x0, "y0": aoi.y0, "side": aoi.side,
                "activation_sum": aoi.activation_sum},
    }
