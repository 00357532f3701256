"""Rasterize curves back into bitmaps for figures and the demo pipeline."""

from __future__ import annotations

import numpy as np

from .model import ProfileCurve, RasterSignature, normalize


def _to_unit(curve: ProfileCurve) -> ProfileCurve:
    if len(curve) >= 2 and (curve.x.min() < 0 or curve.x.max() > 1 or curve.y.min() < 0 or curve.y.max() > 1):
        return normalize(curve)
    return curve


def render_curve(curve: ProfileCurve, width: int = 240, height: int = 80) -> RasterSignature:
    """Draw a curve as a connected one-pixel line on a fresh canvas."""
    unit = _to_unit(curve)
    cols = np.arange(width)
    xs = cols / (width - 1)
    span = (xs >= unit.x[0]) & (xs <= unit.x[-1])
    ys = np.interp(xs[span], unit.x, unit.y)
    rows = np.rint(ys * (height - 1)).astype(int)
    black: set[tuple[int, int]] = set()
    draw_cols = cols[span]
    for i, (col, row) in enumerate(zip(draw_cols, rows)):
        black.add((int(col), int(row)))
        if i:  # bridge row jumps between adjacent columns so the line stays connected
            prev = rows[i - 1]
            lo, hi = sorted((prev, row))
            for r in range(lo, hi + 1):
                black.add((int(col), r))
    return RasterSignature(width, height, frozenset(black))


def render_points(
    curve: ProfileCurve, width: int = 240, height: int = 80, radius: int = 1
) -> RasterSignature:
    """Draw curve points as small square blobs (for marking basis points)."""
    unit = _to_unit(curve)
    black: set[tuple[int, int]] = set()
    for x, y in unit.points:
        col = int(round(x * (width - 1)))
        row = int(round(y * (height - 1)))
        for dc in range(-radius, radius + 1):
            for dr in range(-radius, radius + 1):
                c, r = col + dc, row + dr
                if 0 <= c < width and 0 <= r < height:
                    black.add((c, r))
    return RasterSignature(width, height, frozenset(black))


def merge(*rasters: RasterSignature) -> RasterSignature:
    """Union of ink over same-sized rasters."""
    first = rasters[0]
    black: set[tuple[int, int]] = set()
    for r in rasters:
        if (r.width, r.height) != (first.width, first.height):
            raise ValueError("rasters must share dimensions to merge")
        black |= r.black
    return RasterSignature(first.width, first.height, frozenset(black))
