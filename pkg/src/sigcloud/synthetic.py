"""Synthetic signature strokes for demos and desk-scale evaluation.

A stroke is a sum of sinusoids drawn across the canvas with a little
per-column jitter. A forger uses different frequencies and phases, which
is enough to separate genuine and forged profiles after aggregation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import RasterSignature


@dataclass(frozen=True)
class StrokeStyle:
    """Sinusoid mix defining how a writer signs."""

    amplitudes: tuple[float, ...]
    frequencies: tuple[float, ...]  # cycles across the canvas width
    phases: tuple[float, ...]


GENUINE_STYLE = StrokeStyle(amplitudes=(0.30, 0.08), frequencies=(1.0, 3.0), phases=(0.0, 1.1))
FORGERY_STYLE = StrokeStyle(amplitudes=(0.30, 0.08), frequencies=(2.0, 4.5), phases=(0.9, 2.6))


def stroke_heights(style: StrokeStyle, width: int, noise: float = 0.0, seed: int | None = None) -> np.ndarray:
    """Per-column stroke height in (0, 1), top-down, with optional jitter."""
    t = np.arange(width) / (width - 1)
    y = np.full(width, 0.5)
    for a, f, p in zip(style.amplitudes, style.frequencies, style.phases):
        y = y + a * np.sin(2 * np.pi * f * t + p)
    if noise > 0.0:
        rng = np.random.default_rng(seed)
        y = y + rng.normal(0.0, noise, size=width)
    return np.clip(y, 0.02, 0.98)


def synth_signature(
    style: StrokeStyle,
    seed: int,
    width: int = 240,
    height: int = 80,
    noise: float = 0.01,
    thickness: int = 2,
) -> RasterSignature:
    """Rasterize one noisy stroke; every column carries ink."""
    heights = stroke_heights(style, width, noise=noise, seed=seed)
    rows = np.rint(heights * (height - 1)).astype(int)
    black = set()
    for col, row in enumerate(rows):
        for dr in range(thickness):
            r = min(max(row + dr, 0), height - 1)
            black.add((col, r))
    return RasterSignature(width, height, frozenset(black))


def genuine_batch(count: int, seed: int = 100, **kwargs) -> list[RasterSignature]:
    return [synth_signature(GENUINE_STYLE, seed + i, **kwargs) for i in range(count)]


def forgery_batch(count: int, seed: int = 900, **kwargs) -> list[RasterSignature]:
    return [synth_signature(FORGERY_STYLE, seed + i, **kwargs) for i in range(count)]
