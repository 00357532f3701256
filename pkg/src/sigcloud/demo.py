"""End-to-end demo: synthesize signatures, aggregate, render every stage.

Writes three image sets under the output directory: the raw input samples,
their simplified profile curves, and the aggregated main line with its
basis points marked, plus the envelope bounds.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .aggregation import aggregate
from .annealing import AnnealingConfig
from .model import ProfileCurve, interpolate, normalize, simplify
from .pbm import save_pbm
from .render import merge, render_curve, render_points
from .synthetic import GENUINE_STYLE, synth_signature
from .verification import DecisionThresholds, verify


def run_demo(
    out_dir: str | Path,
    sample_count: int = 4,
    m: int = 32,
    seed: int = 2025,
    width: int = 240,
    height: int = 80,
) -> dict:
    out = Path(out_dir)
    samples = [
        synth_signature(GENUINE_STYLE, seed + i, width=width, height=height)
        for i in range(sample_count)
    ]

    input_dir = out / "input"
    simplified_dir = out / "simplified"
    aggregated_dir = out / "aggregated"
    for d in (input_dir, simplified_dir, aggregated_dir):
        d.mkdir(parents=True, exist_ok=True)

    for i, sig in enumerate(samples):
        (input_dir / f"sample{i}.pbm").write_bytes(save_pbm(sig))

    curves = []
    for i, sig in enumerate(samples):
        curve = normalize(interpolate(simplify(sig), m))
        curves.append(curve)
        (simplified_dir / f"sample{i}.pbm").write_bytes(
            save_pbm(render_curve(curve, width, height))
        )

    template = aggregate(samples, m=m, config=AnnealingConfig(seed=seed), client_id="demo")
    best = min(template.variants, key=lambda v: v.fitness)
    main_line = render_curve(best.curve, width, height)
    points = render_points(best.curve, width, height, radius=1)
    (aggregated_dir / "main_line.pbm").write_bytes(save_pbm(main_line))
    (aggregated_dir / "main_line_with_points.pbm").write_bytes(save_pbm(merge(main_line, points)))

    grid = np.asarray(template.envelope.grid_x)
    lower = render_curve(ProfileCurve(grid, np.asarray(template.envelope.lower)), width, height)
    upper = render_curve(ProfileCurve(grid, np.asarray(template.envelope.upper)), width, height)
    (aggregated_dir / "envelope.pbm").write_bytes(save_pbm(merge(lower, upper)))

    outcome = verify(samples[0], template, DecisionThresholds())
    return {
        "samples": sample_count,
        "m": m,
        "variants": len(template.variants),
        "best_variant_fitness": best.fitness,
        "replay_score": outcome.score,
        "replay_decision": outcome.decision.value,
        "out_dir": str(out),
    }
