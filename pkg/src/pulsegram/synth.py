"""Synthetic event-stream generator with a known pulsation frequency.

Every frequency-recovery test in the suite is anchored on this module:
it produces streams whose ground truth is known by construction. The
model is an inhomogeneous Poisson process simulated over 1 ms
micro-intervals (the rate is treated as constant within each interval,
which is accurate for the rates used here):

* a circular "spot" whose per-pixel rate is
  ``base_rate * (1 + modulation_depth * sin(2 pi pulse_hz t))``,
  standing in for the marked patch of skin moving with the pulse;
* uniform background activity outside the spot;
* an optional tremor line: a 1-pixel-wide vertical segment near the
  spot (offset -3 spot radii in x, spanning +/-5 radii in y) whose rate
  is fully modulated at ``tremor_hz``, mimicking a limb outline that
  oscillates with natural tremor;
* optional full-frame flicker, fully modulated at ``flicker_hz``,
  mimicking periodic illumination.

Polarity alternates per pixel in time order starting with ON, imitating
a locally oscillating contrast without modelling a luminance trace.
Identical config and seed always produce the identical stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .events import (DEFAULT_GEOMETRY, EventStream, RecordingMeta,
                     SensorGeometry, from_arrays)

MICRO_INTERVAL_S = 1e-3
PULSE_HZ_MAX = 25.0         # Nyquist of the default 1/50 s analysis binning
TREMOR_EDGE_DX_RADII = -3   # horizontal offset of the tremor line, in spot radii
TREMOR_EDGE_HALF_RADII = 5  # vertical half-extent of the tremor line


@dataclass(frozen=True)
class SynthConfig:
    pulse_hz: float
    duration_s: float
    geometry: SensorGeometry = DEFAULT_GEOMETRY
    spot_center: Optional[tuple[int, int]] = None  # defaults to frame centre
    spot_radius: int = 8
    base_rate: float = 200.0        # events/s/pixel inside the spot
    modulation_depth: float = 0.8
    background_rate: float = 0.0    # events/s/pixel outside the spot
    tremor_hz: float = 0.0
    tremor_rate: float = 0.0        # events/s/pixel along the tremor line
    flicker_hz: float = 0.0
    flicker_rate: float = 0.0       # events/s/pixel over the whole frame
    seed: int = 0

    def center(self) -> tuple[int, int]:
        if self.spot_center is not None:
            return self.spot_center
        return (self.geometry.width // 2, self.geometry.height // 2)

    def validate(self) -> None:
        if not 0.0 < self.pulse_hz < PULSE_HZ_MAX:
            raise ConfigError(f"pulse_hz must be in (0, {PULSE_HZ_MAX:g}) Hz, "
                              f"got {self.pulse_hz}")
        if self.duration_s < 0:
            raise ConfigError("duration_s must be non-negative")
        if not 0.0 <= self.modulation_depth <= 1.0:
            raise ConfigError("modulation_depth must be within [0, 1]")
        for name in ("base_rate", "background_rate", "tremor_rate",
                     "flicker_rate", "tremor_hz", "flicker_hz"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.spot_radius <= 0:
            raise ConfigError("spot_radius must be positive")
        cx, cy = self.center()
        g = self.geometry
        if not (cx - self.spot_radius >= 0 and cx + self.spot_radius < g.width
                and cy - self.spot_radius >= 0
                and cy + self.spot_radius < g.height):
            raise ConfigError("spot extends outside the frame")


def _spot_pixels(cfg: SynthConfig) -> tuple[np.ndarray, np.ndarray]:
    cx, cy = cfg.center()
    r = cfg.spot_radius
    ys, xs = np.mgrid[cy - r:cy + r + 1, cx - r:cx + r + 1]
    inside = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
    return xs[inside].ravel(), ys[inside].ravel()


def _tremor_pixels(cfg: SynthConfig) -> tuple[np.ndarray, np.ndarray]:
    cx, cy = cfg.center()
    r = cfg.spot_radius
    g = cfg.geometry
    ex = int(np.clip(cx + TREMOR_EDGE_DX_RADII * r, 0, g.width - 1))
    y_lo = max(0, cy - TREMOR_EDGE_HALF_RADII * r)
    y_hi = min(g.height, cy + TREMOR_EDGE_HALF_RADII * r)
    ys = np.arange(y_lo, y_hi)
    return np.full(ys.shape, ex, dtype=np.int64), ys


def spot_pixel_count(cfg: SynthConfig) -> int:
    """Number of pixels inside the spot disc (handy for rate budgeting)."""
    return int(_spot_pixels(cfg)[0].size)


def _sample_component(rng: np.random.Generator, lam_per_step: np.ndarray,
                      n_steps: int) -> np.ndarray:
    """Sample event times (microseconds) of one Poisson component."""
    counts = rng.poisson(lam_per_step)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    step_us = MICRO_INTERVAL_S * 1e6
    base = np.repeat(np.arange(n_steps, dtype=np.int64), counts) * int(step_us)
    offsets = np.floor(rng.random(total) * step_us).astype(np.int64)
    return base + offsets


def _modulated(rate: float, hz: float, depth: float, n_pixels: int,
               t_mid: np.ndarray) -> np.ndarray:
    lam = rate * (1.0 + depth * np.sin(2.0 * np.pi * hz * t_mid))
    return lam * n_pixels * MICRO_INTERVAL_S


def generate(cfg: SynthConfig) -> EventStream:
    """Generate a synthetic event stream for the given configuration."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    g = cfg.geometry
    n_steps = int(round(cfg.duration_s / MICRO_INTERVAL_S))
    meta = RecordingMeta(bias_profile=f"synthetic seed={cfg.seed}")
    if n_steps == 0:
        return from_arrays(np.empty(0, np.int64), np.empty(0, np.int32),
                           np.empty(0, np.int32), np.empty(0, np.int8),
                           g, meta)
    t_mid = (np.arange(n_steps) + 0.5) * MICRO_INTERVAL_S

    parts_t: list[np.ndarray] = []
    parts_x: list[np.ndarray] = []
    parts_y: list[np.ndarray] = []

    # pulsating spot
    spot_x, spot_y = _spot_pixels(cfg)
    if cfg.base_rate > 0:
        lam = _modulated(cfg.base_rate, cfg.pulse_hz, cfg.modulation_depth,
                         spot_x.size, t_mid)
        t_us = _sample_component(rng, lam, n_steps)
        pick = rng.integers(0, spot_x.size, t_us.size)
        parts_t.append(t_us)
        parts_x.append(spot_x[pick])
        parts_y.append(spot_y[pick])

    # uniform background: draw over the whole frame, then thin out the spot
    if cfg.background_rate > 0:
        lam = np.full(n_steps,
                      cfg.background_rate * g.width * g.height
                      * MICRO_INTERVAL_S)
        t_us = _sample_component(rng, lam, n_steps)
        bx = rng.integers(0, g.width, t_us.size)
        by = rng.integers(0, g.height, t_us.size)
        cx, cy = cfg.center()
        outside = ((bx - cx) ** 2 + (by - cy) ** 2
                   > cfg.spot_radius * cfg.spot_radius)
        parts_t.append(t_us[outside])
        parts_x.append(bx[outside])
        parts_y.append(by[outside])

    # tremor line
    if cfg.tremor_rate > 0:
        ex, ey = _tremor_pixels(cfg)
        lam = _modulated(cfg.tremor_rate, cfg.tremor_hz, 1.0, ey.size, t_mid)
        t_us = _sample_component(rng, lam, n_steps)
        pick = rng.integers(0, ey.size, t_us.size)
        parts_t.append(t_us)
        parts_x.append(ex[pick])
        parts_y.append(ey[pick])

    # full-frame flicker
    if cfg.flicker_rate > 0:
        lam = _modulated(cfg.flicker_rate, cfg.flicker_hz, 1.0,
                         g.width * g.height, t_mid)
        t_us = _sample_component(rng, lam, n_steps)
        parts_t.append(t_us)
        parts_x.append(rng.integers(0, g.width, t_us.size))
        parts_y.append(rng.integers(0, g.height, t_us.size))

    if not parts_t:
        return from_arrays(np.empty(0, np.int64), np.empty(0, np.int32),
                           np.empty(0, np.int32), np.empty(0, np.int8),
                           g, meta)

    t_us = np.concatenate(parts_t)
    x = np.concatenate(parts_x).astype(np.int32)
    y = np.concatenate(parts_y).astype(np.int32)
    order = np.argsort(t_us, kind="stable")
    t_us, x, y = t_us[order], x[order], y[order]
    polarity = _alternating_polarity(t_us, x, y, g.width)
    return from_arrays(t_us, x, y, polarity, g, meta)


def _alternating_polarity(t_us: np.ndarray, x: np.ndarray, y: np.ndarray,
                          width: int) -> np.ndarray:
    """ON/OFF/ON/... per pixel over time-ordered events, starting ON."""
    pixel = y.astype(np.int64) * width + x
    order = np.argsort(pixel, kind="stable")  # stable: keeps time order
    sorted_pix = pixel[order]
    new_group = np.empty(sorted_pix.shape, dtype=bool)
    if sorted_pix.size:
        new_group[0] = True
        new_group[1:] = sorted_pix[1:] != sorted_pix[:-1]
    group_start = np.maximum.accumulate(
        np.where(new_group, np.arange(sorted_pix.size), 0))
    occurrence = np.arange(sorted_pix.size) - group_start
    pol_sorted = ((occurrence % 2) == 0).astype(np.int8)  # even -> ON
    polarity = np.empty(sorted_pix.size, dtype=np.int8)
    polarity[order] = pol_sorted
    return polarity
