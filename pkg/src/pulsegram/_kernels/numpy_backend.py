"""Pure-numpy implementations of the per-event hot loops.

Used when the compiled extension is unavailable (or forced via the
``PULSEGRAM_BACKEND=numpy`` environment variable). Results are exactly
identical to the compiled backend: everything here is integer counting.
"""

import numpy as np


def pixel_counts(x, y, width: int, height: int) -> np.ndarray:
    """Count events per pixel; returns an int64 grid of shape (height, width)."""
    if x.shape[0] == 0:
        return np.zeros((height, width), dtype=np.int64)
    flat = y.astype(np.int64) * width + x
    return np.bincount(flat, minlength=width * height).reshape(height, width)


def tile_bin_counts(t_rel_us, x, y, polarity, x0: int, y0: int,
                    aoi_side: int, tile_side: int, bin_width_us: float,
                    n_bins: int):
    """Per-tile, per-time-bin event counts inside a square window.

    Events outside the window or past the last complete bin are dropped.
    Returns two int64 arrays of shape (n_tiles, n_bins): counts of ON
    events and counts of OFF events, tiles in row-major order.
    """
    tiles_per_side = aoi_side // tile_side
    n_tiles = tiles_per_side * tiles_per_side
    shape = (n_tiles, n_bins)
    if t_rel_us.shape[0] == 0 or n_bins == 0:
        return np.zeros(shape, np.int64), np.zeros(shape, np.int64)

    dx = x.astype(np.int64) - x0
    dy = y.astype(np.int64) - y0
    keep = (dx >= 0) & (dy >= 0) & (dx < aoi_side) & (dy < aoi_side)
    b = (t_rel_us[keep] / bin_width_us).astype(np.int64)
    in_bin = b < n_bins
    dx = dx[keep][in_bin]
    dy = dy[keep][in_bin]
    pol = polarity[keep][in_bin]
    tile = (dy // tile_side) * tiles_per_side + dx // tile_side
    idx = tile * n_bins + b[in_bin]
    on = np.bincount(idx[pol == 1], minlength=n_tiles * n_bins)
    off = np.bincount(idx[pol != 1], minlength=n_tiles * n_bins)
    return on.reshape(shape), off.reshape(shape)
