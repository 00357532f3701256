"""Raster signatures and their reduction to profile curves.

A scanned signature is a black/white pixel grid. It is reduced to a single
function graph by averaging the black-pixel row indices in each inked
column, then resampling that graph by piecewise-linear interpolation and
mapping both axes onto [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, ValidationError


@dataclass(frozen=True)
class RasterSignature:
    """Binary pixel grid; ``black`` holds (col, row) coordinates of ink."""

    width: int
    height: int
    black: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValidationError(f"dimensions must be positive, got {self.width}x{self.height}")
        black = frozenset((int(c), int(r)) for c, r in self.black)
        for col, row in black:
            if not (0 <= col < self.width and 0 <= row < self.height):
                raise ValidationError(
                    f"pixel ({col}, {row}) outside {self.width}x{self.height} bounds"
                )
        object.__setattr__(self, "black", black)

    @property
    def ink_count(self) -> int:
        return len(self.black)


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Ordered (x, y) samples with strictly increasing x. May be empty."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if x.shape != y.shape:
            raise ValidationError(f"x and y lengths differ: {len(x)} vs {len(y)}")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValidationError("curve coordinates must be finite")
        if len(x) > 1 and not (np.diff(x) > 0).all():
            raise ValidationError("x values must be strictly increasing")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_points(cls, points) -> "ProfileCurve":
        pts = list(points)
        if not pts:
            return cls(np.empty(0), np.empty(0))
        xs, ys = zip(*pts)
        return cls(np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64))

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.x, self.y)]

    def __len__(self) -> int:
        return len(self.x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProfileCurve):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    def __hash__(self):
        return hash((self.x.tobytes(), self.y.tobytes()))


def binarize(gray, threshold: int = 128) -> RasterSignature:
    """Threshold an intensity grid: a pixel is ink iff intensity < threshold."""
    grid = np.asarray(gray)
    if grid.ndim != 2:
        raise ValidationError(f"intensity grid must be rectangular, got shape {grid.shape}")
    rows, cols = np.nonzero(grid < threshold)
    height, width = grid.shape
    return RasterSignature(width, height, frozenset((int(c), int(r)) for r, c in zip(rows, cols)))


def simplify(sig: RasterSignature) -> ProfileCurve:
    """Reduce a raster to one point per inked column: (col, mean black row).

    Columns without ink emit nothing; a blank image gives an empty curve.
    """
    if not sig.black:
        return ProfileCurve(np.empty(0), np.empty(0))
    coords = np.array(sorted(sig.black), dtype=np.int64)
    cols, rows = coords[:, 0], coords[:, 1]
    xs, counts = np.unique(cols, return_counts=True)
    sums = np.bincount(cols, weights=rows, minlength=xs[-1] + 1)[xs]
    return ProfileCurve(xs.astype(np.float64), sums / counts)


def interpolate(curve: ProfileCurve, sample_count: int) -> ProfileCurve:
    """Resample a curve at equally spaced x by piecewise-linear interpolation.

    Endpoints are reproduced exactly; sample x positions that coincide with
    input knots reproduce the knot y exactly.
    """
    if len(curve) < 2:
        raise InsufficientDataError(f"interpolation needs >= 2 points, got {len(curve)}")
    if sample_count < 2:
        raise ValidationError(f"sample_count must be >= 2, got {sample_count}")
    xs = np.linspace(curve.x[0], curve.x[-1], sample_count)
    return ProfileCurve(xs, np.interp(xs, curve.x, curve.y))


def normalize(curve: ProfileCurve) -> ProfileCurve:
    """Affinely map x and y onto [0, 1]; a flat curve maps y to constant 0.5.

    Idempotent, and preserves where along x the extrema of y occur.
    """
    if len(curve) < 2:
        raise InsufficientDataError(f"normalization needs >= 2 points, got {len(curve)}")
    x0, x1 = curve.x[0], curve.x[-1]
    nx = (curve.x - x0) / (x1 - x0)
    ymin, ymax = curve.y.min(), curve.y.max()
    if ymax == ymin:
        ny = np.full_like(curve.y, 0.5)
    else:
        ny = (curve.y - ymin) / (ymax - ymin)
    return ProfileCurve(nx, ny)
