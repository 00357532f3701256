"""Combine a client's profile curves into a template of annealed basis points.

The normalized curves are resampled onto one equally spaced x grid; their
pointwise min/max envelope is the region the annealer searches. Basis point
x positions are the fixed grid, so a solution is the vector of y values,
one per grid position, clamped into the envelope. The fitness of a solution
is its total squared vertical distance to all source curves, whose exact
minimizer is the pointwise mean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from .annealing import AnnealingConfig, AnnealingProblem, anneal
from .errors import ValidationError
from .model import ProfileCurve, RasterSignature, interpolate, normalize, simplify

DEFAULT_BASIS_POINTS = 32
DEFAULT_SA_CONFIG = AnnealingConfig()  # T0=1.0, r=0.90, it=100: see AnnealingConfig defaults
NEIGHBOR_STEP = 0.05  # one-coordinate perturbation size, in normalized units


@dataclass(frozen=True, eq=False)
class CombinedArea:
    """Per-x [lower, upper] envelope of k resampled curves on a common grid."""

    grid_x: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    curves: np.ndarray  # shape (k, m): source curves resampled at grid_x

    def __post_init__(self):
        grid_x = np.asarray(self.grid_x, dtype=np.float64).reshape(-1)
        lower = np.asarray(self.lower, dtype=np.float64).reshape(-1)
        upper = np.asarray(self.upper, dtype=np.float64).reshape(-1)
        curves = np.atleast_2d(np.asarray(self.curves, dtype=np.float64))
        m = len(grid_x)
        if lower.shape != (m,) or upper.shape != (m,) or curves.shape[1] != m:
            raise ValidationError("envelope arrays must share the grid length")
        if (lower > upper).any():
            raise ValidationError("envelope lower bound exceeds upper bound")
        if ((curves < lower) | (curves > upper)).any():
            raise ValidationError("resampled curve escapes the envelope")
        for arr in (grid_x, lower, upper, curves):
            arr.flags.writeable = False
        object.__setattr__(self, "grid_x", grid_x)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "curves", curves)

    @property
    def m(self) -> int:
        return len(self.grid_x)

    @property
    def sample_count(self) -> int:
        return self.curves.shape[0]


@dataclass(frozen=True, eq=False)
class BasisSolution:
    """Candidate basis-point heights, one per envelope grid position."""

    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        y.flags.writeable = False
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class Envelope:
    """The storable slice of a CombinedArea: grid plus bounds, no source curves."""

    grid_x: tuple[float, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @classmethod
    def from_area(cls, area: CombinedArea) -> "Envelope":
        return cls(tuple(map(float, area.grid_x)), tuple(map(float, area.lower)), tuple(map(float, area.upper)))

    def contains(self, curve: ProfileCurve) -> bool:
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        return bool(((curve.y >= lower) & (curve.y <= upper)).all())


@dataclass(frozen=True)
class TemplateVariant:
    """One annealed main line: basis points connected in x order."""

    seed_offset: int
    fitness: float
    curve: ProfileCurve


@dataclass(frozen=True)
class AggregatedTemplate:
    """The stored knowledge unit: main-line variants plus their envelope."""

    client_id: str
    version: int
    m: int
    created_from: int
    variants: tuple[TemplateVariant, ...]
    envelope: Envelope

    def __post_init__(self):
        if self.version < 1:
            raise ValidationError(f"template version must be >= 1, got {self.version}")
        if not self.variants:
            raise ValidationError("template must hold at least one variant")
        object.__setattr__(self, "variants", tuple(self.variants))

    def to_dict(self) -> dict[str, Any]:
        return {
            "client_id": self.client_id,
            "version": self.version,
            "m": self.m,
            "created_from": self.created_from,
            "variants": [
                {
                    "seed_offset": v.seed_offset,
                    "fitness": v.fitness,
                    "points": [[x, y] for x, y in v.curve.points],
                }
                for v in self.variants
            ],
            "envelope": {
                "grid_x": list(self.envelope.grid_x),
                "lower": list(self.envelope.lower),
                "upper": list(self.envelope.upper),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AggregatedTemplate":
        variants = tuple(
            TemplateVariant(
                seed_offset=int(v["seed_offset"]),
                fitness=float(v["fitness"]),
                curve=ProfileCurve.from_points(v["points"]),
            )
            for v in data["variants"]
        )
        env = data["envelope"]
        return cls(
            client_id=data["client_id"],
            version=int(data["version"]),
            m=int(data["m"]),
            created_from=int(data["created_from"]),
            variants=variants,
            envelope=Envelope(
                tuple(map(float, env["grid_x"])),
                tuple(map(float, env["lower"])),
                tuple(map(float, env["upper"])),
            ),
        )

    @classmethod
    def from_json(cls, text: str) -> "AggregatedTemplate":
        return cls.from_dict(json.loads(text))


def _require_normalized(curve: ProfileCurve, index: int) -> None:
    if len(curve) < 2:
        raise ValidationError(f"sample {index}: needs >= 2 points, got {len(curve)}")
    if curve.x[0] != 0.0 or curve.x[-1] != 1.0 or curve.y.min() < 0.0 or curve.y.max() > 1.0:
        raise ValidationError(f"sample {index}: curve is not normalized to [0, 1]")


def combine(samples: Sequence[ProfileCurve], m: int) -> CombinedArea:
    """Resample normalized curves onto m grid points and take their envelope."""
    if not samples:
        raise ValidationError("need at least one sample to combine")
    if m < 2:
        raise ValidationError(f"grid size m must be >= 2, got {m}")
    for i, curve in enumerate(samples):
        _require_normalized(curve, i)
    grid_x = np.linspace(0.0, 1.0, m)
    curves = np.vstack([np.interp(grid_x, c.x, c.y) for c in samples])
    return CombinedArea(grid_x, curves.min(axis=0), curves.max(axis=0), curves)


def _squared_distance_sum(y: np.ndarray, curves: np.ndarray) -> float:
    return float(((y[np.newaxis, :] - curves) ** 2).sum())


def basis_fitness(solution: BasisSolution, area: CombinedArea) -> float:
    """Sum of squared vertical distances from the solution to every curve."""
    if len(solution.y) != area.m:
        raise ValidationError(f"solution has {len(solution.y)} points, envelope grid has {area.m}")
    return _squared_distance_sum(solution.y, area.curves)


class BasisPointProblem(AnnealingProblem):
    """Annealing problem for basis-point heights inside an envelope.

    Proposals perturb one coordinate by a uniform step and clamp it back
    into the envelope, so every visited solution is feasible.
    """

    def __init__(self, area: CombinedArea, step: float = NEIGHBOR_STEP):
        if step <= 0:
            raise ValidationError(f"neighbor step must be > 0, got {step}")
        self.area = area
        self.step = step

    def fitness(self, solution: np.ndarray) -> float:
        return _squared_distance_sum(solution, self.area.curves)

    def initial(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.area.lower, self.area.upper)

    def neighbor(self, solution: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        i = int(rng.integers(len(solution)))
        out = solution.copy()
        moved = out[i] + rng.uniform(-self.step, self.step)
        out[i] = min(max(moved, self.area.lower[i]), self.area.upper[i])
        return out


def find_basis_points(
    area: CombinedArea, config: AnnealingConfig, step: float = NEIGHBOR_STEP
) -> tuple[BasisSolution, float]:
    """Anneal basis-point heights inside the envelope; return the best found."""
    run = anneal(BasisPointProblem(area, step), config)
    solution = BasisSolution(run.best_solution)
    assert ((solution.y >= area.lower) & (solution.y <= area.upper)).all()
    return solution, run.best_fitness


def connect(solution: BasisSolution, area: CombinedArea) -> ProfileCurve:
    """Join basis points into a main line, ordered by x.

    The grid is already sorted; the stable sort here is defensive, so a
    permuted grid still yields the same curve.
    """
    order = np.argsort(area.grid_x, kind="stable")
    return ProfileCurve(area.grid_x[order], solution.y[order])


def aggregate(
    samples: Sequence[RasterSignature],
    m: int = DEFAULT_BASIS_POINTS,
    config: AnnealingConfig = DEFAULT_SA_CONFIG,
    *,
    client_id: str = "",
    version: int = 1,
) -> AggregatedTemplate:
    """Full enrollment pipeline: simplify, resample, normalize, combine, anneal.

    From k signatures, k + 1 annealing variants are produced with seeds
    config.seed .. config.seed + k, each connected into a main line. A
    signature with fewer than two inked columns rejects the whole batch.
    """
    if not samples:
        raise ValidationError("need at least one signature to aggregate")
    curves = []
    for index, sig in enumerate(samples):
        profile = simplify(sig)
        if len(profile) < 2:
            raise ValidationError(
                f"sample {index}: signature has fewer than 2 inked columns, cannot enroll"
            )
        curves.append(normalize(interpolate(profile, m)))
    area = combine(curves, m)
    variants = []
    for offset in range(len(samples) + 1):
        run_config = replace(config, seed=config.seed + offset)
        solution, fitness = find_basis_points(area, run_config)
        variants.append(TemplateVariant(offset, fitness, connect(solution, area)))
    return AggregatedTemplate(
        client_id=client_id,
        version=version,
        m=m,
        created_from=len(samples),
        variants=tuple(variants),
        envelope=Envelope.from_area(area),
    )
