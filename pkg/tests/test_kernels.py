"""Backend equivalence: the compiled and numpy kernels must agree exactly."""

import numpy as np
import pytest

from pulsegram._kernels import available_backends, numpy_backend

BACKENDS = available_backends()


def random_inputs(seed, n=20_000, width=200, height=150):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.integers(0, 10_000_000, n)).astype(np.int64)
    x = rng.integers(0, width, n).astype(np.int32)
    y = rng.integers(0, height, n).astype(np.int32)
    p = rng.integers(0, 2, n).astype(np.int8)
    return t, x, y, p


def test_pixel_counts_matches_naive():
    t, x, y, p = random_inputs(0, n=2000, width=40, height=30)
    naive = np.zeros((30, 40), dtype=np.int64)
    for xi, yi in zip(x, y):
        naive[yi, xi] += 1
    got = numpy_backend.pixel_counts(x, y, 40, 30)
    assert np.array_equal(got, naive)


def test_tile_bin_counts_matches_naive():
    t, x, y, p = random_inputs(1, n=3000, width=60, height=60)
    x0, y0, side, tile, bw_us, n_bins = 10, 5, 40, 5, 20000.0, 100
    n_per = side // tile
    on = np.zeros((n_per * n_per, n_bins), dtype=np.int64)
    off = np.zeros_like(on)
    for ti, xi, yi, pi in zip(t, x, y, p):
        dx, dy = xi - x0, yi - y0
        if not (0 <= dx < side and 0 <= dy < side):
            continue
        b = int(ti / bw_us)
        if b >= n_bins:
            continue
        k = (dy // tile) * n_per + dx // tile
        (on if pi == 1 else off)[k, b] += 1
    got_on, got_off = numpy_backend.tile_bin_counts(
        t, x, y, p, x0, y0, side, tile, bw_us, n_bins)
    assert np.array_equal(got_on, on)
    assert np.array_equal(got_off, off)


@pytest.mark.skipif("cython" not in BACKENDS,
                    reason="compiled backend not built")
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    t, x, y, p = random_inputs(seed)
    cy = BACKENDS["cython"]
    np_ = BACKENDS["numpy"]
    assert np.array_equal(cy.pixel_counts(x, y, 200, 150),
                          np_.pixel_counts(x, y, 200, 150))
    args = (t, x, y, p, 30, 20, 100, 5, 20000.0, 480)
    a_on, a_off = cy.tile_bin_counts(*args)
    b_on, b_off = np_.tile_bin_counts(*args)
    assert np.array_equal(a_on, b_on)
    assert np.array_equal(a_off, b_off)


@pytest.mark.skipif("cython" not in BACKENDS,
                    reason="compiled backend not built")
def test_backends_accept_read_only_arrays():
    t, x, y, p = random_inputs(3, n=100)
    for a in (t, x, y, p):
        a.setflags(write=False)
    for backend in BACKENDS.values():
        backend.pixel_counts(x, y, 200, 150)
        backend.tile_bin_counts(t, x, y, p, 0, 0, 100, 5, 20000.0, 10)


def test_empty_inputs():
    empty = (np.empty(0, np.int64), np.empty(0, np.int32),
             np.empty(0, np.int32), np.empty(0, np.int8))
    for backend in BACKENDS.values():
        counts = backend.pixel_counts(empty[1], empty[2], 8, 8)
        assert counts.shape == (8, 8) and counts.sum() == 0
        on, off = backend.tile_bin_counts(*empty, 0, 0, 10, 5, 20000.0, 4)
        assert on.shape == (4, 4) and on.sum() == 0 and off.sum() == 0
