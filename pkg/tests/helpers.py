"""Independent oracle implementations used to check the library.

Everything here deliberately avoids the code paths under test: window
maxima come from direct summation instead of a summed-area table, and
spectra come from an O(N^2) DFT instead of the FFT.
"""

import numpy as np


def brute_force_max_window(counts: np.ndarray, side: int):
    """Best (x0, y0, sum) by direct summation over every window position.

    Scans positions in (y0, x0) lexicographic order and keeps the first
    window achieving the maximum, which realises the tie-break rule
    independently of the implementation.
    """
    h, w = counts.shape
    best = None
    best_sum = -1
    for y0 in range(h - side + 1):
        for x0 in range(w - side + 1):
            s = int(counts[y0:y0 + side, x0:x0 + side].sum())
            if s > best_sum:
                best_sum = s
                best = (x0, y0, s)
    return best


def direct_dft_psd(x: np.ndarray, fs: float, subtract_mean: bool = True):
    """One-sided density-normalised PSD via the plain DFT sum, O(N^2)."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if subtract_mean:
        x = x - x.mean()
    ks = n // 2 + 1
    psd = np.empty(ks)
    t = np.arange(n)
    for k in range(ks):
        coeff = np.sum(x * np.exp(-2j * np.pi * k * t / n))
        p = (coeff.real ** 2 + coeff.imag ** 2) / (fs * n)
        if 0 < k < n / 2:
            p *= 2.0
        psd[k] = p
    freqs = np.arange(ks) * fs / n
    return freqs, psd


def dominant_in_band(freqs: np.ndarray, psd: np.ndarray, lo: float, hi: float):
    """Raw in-band peak frequency of a spectrum (no refinement)."""
    sel = (freqs >= lo) & (freqs <= hi)
    idx = np.flatnonzero(sel)
    k = idx[int(np.argmax(psd[idx]))]
    return float(freqs[k])


def spot_series(stream, center, radius, bin_width_s):
    """Bin counts of all events within a disc, computed with histogramming
    that shares no code with the library's tile binning."""
    cx, cy = center
    m = (stream.x.astype(np.int64) - cx) ** 2 + \
        (stream.y.astype(np.int64) - cy) ** 2 <= radius * radius
    t = (stream.t_us[m] - stream.t_us[0]) / 1e6
    duration = stream.duration_us / 1e6
    n_bins = int(np.floor(duration / bin_width_s))
    edges = np.arange(n_bins + 1) * bin_width_s
    counts, _ = np.histogram(t, bins=edges)
    return counts.astype(np.float64)
