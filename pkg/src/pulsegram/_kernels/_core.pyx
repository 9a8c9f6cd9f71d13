# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-pass implementations of the per-event hot loops."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def pixel_counts(const cnp.int32_t[::1] x, const cnp.int32_t[::1] y,
                 int width, int height):
    """Count events per pixel; returns an int64 grid of shape (height, width)."""
    out = np.zeros((height, width), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] o = out
    cdef Py_ssize_t i, n = x.shape[0]
    for i in range(n):
        o[y[i], x[i]] += 1
    return out


def tile_bin_counts(const cnp.int64_t[::1] t_rel_us, const cnp.int32_t[::1] x,
                    const cnp.int32_t[::1] y, const cnp.int8_t[::1] polarity,
                    int x0, int y0, int aoi_side, int tile_side,
                    double bin_width_us, int n_bins):
    """Per-tile, per-time-bin event counts inside a square window.

    Mirrors numpy_backend.tile_bin_counts bit for bit.
    """
    cdef int tiles_per_side = aoi_side // tile_side
    cdef int n_tiles = tiles_per_side * tiles_per_side
    on = np.zeros((n_tiles, n_bins), dtype=np.int64)
    off = np.zeros((n_tiles, n_bins), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] on_v = on
    cdef cnp.int64_t[:, ::1] off_v = off
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long dx, dy, tile
    cdef long long b
    if n_bins == 0:
        return on, off
    for i in range(n):
        dx = x[i] - x0
        dy = y[i] - y0
        if dx < 0 or dy < 0 or dx >= aoi_side or dy >= aoi_side:
            continue
        b = <long long>(t_rel_us[i] / bin_width_us)
        if b >= n_bins:
            continue
        tile = (dy // tile_side) * tiles_per_side + dx // tile_side
        if polarity[i] == 1:
            on_v[tile, b] += 1
        else:
            off_v[tile, b] += 1
    return on, off
