"""Aggregating several signatures into one template.

Four noisy strokes from the same writer are simplified, combined into a
min/max envelope, and annealed into basis-point main lines. The annealed
fitness is compared against the analytic optimum (the pointwise mean).
"""

from pathlib import Path

import numpy as np

from sigcloud.aggregation import BasisSolution, aggregate, basis_fitness, combine
from sigcloud.annealing import AnnealingConfig
from sigcloud.model import interpolate, normalize, simplify
from sigcloud.pbm import save_pbm
from sigcloud.render import merge, render_curve, render_points
from sigcloud.synthetic import GENUINE_STYLE, synth_signature

out = Path(__file__).parent / "out" / "03"
out.mkdir(parents=True, exist_ok=True)

samples = [synth_signature(GENUINE_STYLE, seed=100 + i, width=240, height=80) for i in range(4)]
m = 32

curves = [normalize(interpolate(simplify(s), m)) for s in samples]
area = combine(curves, m)
width = float((area.upper - area.lower).mean())
print(f"envelope over {len(curves)} curves at {m} grid points, mean width {width:.4f}")

mean_fit = basis_fitness(BasisSolution(area.curves.mean(axis=0)), area)
print(f"fitness of the pointwise mean (analytic optimum): {mean_fit:.6f}")

template = aggregate(samples, m=m, config=AnnealingConfig(seed=0), client_id="writer-a")
print(f"template v{template.version}: {len(template.variants)} variants from "
      f"{template.created_from} signatures")
for v in template.variants:
    print(f"  variant {v.seed_offset}: fitness {v.fitness:.6f} "
          f"({v.fitness / mean_fit:.4f}x the optimum)")

best = min(template.variants, key=lambda v: v.fitness)
line = render_curve(best.curve, 240, 80)
points = render_points(best.curve, 240, 80)
(out / "main_line.pbm").write_bytes(save_pbm(merge(line, points)))

grid = np.asarray(template.envelope.grid_x)
lower = render_curve(type(best.curve)(grid, np.asarray(template.envelope.lower)), 240, 80)
upper = render_curve(type(best.curve)(grid, np.asarray(template.envelope.upper)), 240, 80)
(out / "envelope.pbm").write_bytes(save_pbm(merge(lower, upper)))
print("wrote", out / "main_line.pbm", "and", out / "envelope.pbm")
