"""Simulated annealing over a pluggable problem interface.

Minimization with the classic exponential acceptance rule: a worsening move
of size delta at temperature T is kept when a uniform draw gamma from (0, 1)
satisfies gamma < exp(-delta / T). Temperature decays geometrically,
T_next = rate * T, once per outer iteration. The inner loop at outer step k
evaluates k + 1 neighbor proposals, so a full run of ``it`` outer steps
evaluates (it + 1) * (it + 2) / 2 proposals in total.

Runs are fully reproducible: all randomness flows from one seeded generator
handed to the problem's ``initial`` and ``neighbor`` hooks.
"""

from __future__ import annotations

import abc
import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class AnnealingConfig:
    """Engine parameters; ``min_temperature`` is a secondary stop criterion."""

    initial_temperature: float = 1.0
    cooling_rate: float = 0.90
    outer_iterations: int = 100
    min_temperature: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.initial_temperature > 0:
            raise ValidationError(f"initial_temperature must be > 0, got {self.initial_temperature}")
        if not 0 < self.cooling_rate <= 1:
            raise ValidationError(f"cooling_rate must be in (0, 1], got {self.cooling_rate}")
        if self.outer_iterations < 1:
            raise ValidationError(f"outer_iterations must be >= 1, got {self.outer_iterations}")
        if self.min_temperature < 0:
            raise ValidationError(f"min_temperature must be >= 0, got {self.min_temperature}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "t0": self.initial_temperature,
            "r": self.cooling_rate,
            "it": self.outer_iterations,
            "t_min": self.min_temperature,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AnnealingConfig":
        return cls(
            initial_temperature=float(data["t0"]),
            cooling_rate=float(data["r"]),
            outer_iterations=int(data["it"]),
            min_temperature=float(data.get("t_min", 0.0)),
            seed=int(data.get("seed", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "AnnealingConfig":
        return cls.from_dict(json.loads(text))


class AnnealingProblem(abc.ABC):
    """Search space hooks. ``fitness`` is minimized and must be deterministic."""

    @abc.abstractmethod
    def fitness(self, solution) -> float:
        """Objective value of a solution; lower is better."""

    @abc.abstractmethod
    def initial(self, rng: np.random.Generator):
        """Draw a starting solution."""

    @abc.abstractmethod
    def neighbor(self, solution, rng: np.random.Generator):
        """Draw a random solution adjacent to the given one."""


@dataclass(frozen=True)
class TraceEntry:
    k: int
    temperature: float
    current_fitness: float
    best_fitness: float


@dataclass(frozen=True)
class AnnealingRun:
    """Outcome of one run: the literal last-iteration solution plus best-so-far."""

    final_solution: Any
    final_fitness: float
    best_solution: Any
    best_fitness: float
    trace: list[TraceEntry] = field(default_factory=list)
    proposals_evaluated: int = 0

    def trace_csv(self) -> str:
        """Trace as CSV with columns k, T, current_fitness, best_fitness."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["k", "T", "current_fitness", "best_fitness"])
        for entry in self.trace:
            writer.writerow(
                [entry.k, repr(entry.temperature), repr(entry.current_fitness), repr(entry.best_fitness)]
            )
        return out.getvalue()


def acceptance_probability(delta: float, temperature: float) -> float:
    """exp(-delta / temperature); above 1 for improving deltas, never clamped."""
    if not temperature > 0:
        raise ValidationError(f"temperature must be > 0, got {temperature}")
    try:
        return math.exp(-delta / temperature)
    except OverflowError:
        return math.inf


def accept(delta: float, temperature: float, gamma: float) -> bool:
    """Keep an improving move always; a worsening one iff gamma beats the rule."""
    if not 0 < gamma < 1:
        raise ValidationError(f"gamma must lie in the open interval (0, 1), got {gamma}")
    if delta < 0:
        return True
    return gamma < acceptance_probability(delta, temperature)


def cool(temperature: float, rate: float) -> float:
    """One geometric cooling step: the next temperature is rate * temperature."""
    if not temperature > 0:
        raise ValidationError(f"temperature must be > 0, got {temperature}")
    if not 0 < rate <= 1:
        raise ValidationError(f"rate must be in (0, 1], got {rate}")
    return rate * temperature


def _draw_gamma(rng: np.random.Generator) -> float:
    # rng.random() covers [0, 1); redraw an exact 0.0 to stay in the open interval.
    g = rng.random()
    while g == 0.0:
        g = rng.random()
    return g


def anneal(problem: AnnealingProblem, config: AnnealingConfig) -> AnnealingRun:
    """Run the annealing loop to completion.

    Outer iterations k = 0..outer_iterations inclusive, stopping early once
    the temperature falls below ``min_temperature``; the inner loop proposes
    k + 1 neighbors at step k.
    """
    rng = np.random.default_rng(config.seed)
    current = problem.initial(rng)
    current_fit = float(problem.fitness(current))
    best, best_fit = current, current_fit
    temperature = config.initial_temperature
    trace: list[TraceEntry] = []
    proposals = 0

    for k in range(config.outer_iterations + 1):
        if temperature < config.min_temperature:
            break
        for _ in range(k + 1):
            candidate = problem.neighbor(current, rng)
            candidate_fit = float(problem.fitness(candidate))
            proposals += 1
            delta = candidate_fit - current_fit
            if delta < 0:
                accepted = True
            elif temperature <= 0.0:
                accepted = False  # temperature underflowed; worsening moves freeze out
            else:
                accepted = accept(delta, temperature, _draw_gamma(rng))
            if accepted:
                current, current_fit = candidate, candidate_fit
            if candidate_fit < best_fit:
                best, best_fit = candidate, candidate_fit
        trace.append(TraceEntry(k, temperature, current_fit, best_fit))
        if temperature > 0.0:
            temperature = cool(temperature, config.cooling_rate)

    return AnnealingRun(
        final_solution=current,
        final_fitness=current_fit,
        best_solution=best,
        best_fitness=best_fit,
        trace=trace,
        proposals_evaluated=proposals,
    )
