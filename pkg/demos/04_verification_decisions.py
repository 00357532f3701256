"""Scoring candidates against a template: accept, escalate, or reject.

Enrolls five genuine strokes, then scores replayed genuines, fresh genuines,
and forgeries with different stroke frequencies. Scores land on a three-way
band: below the accept threshold, above the reject threshold, or in the
hesitation band between, which a human supervisor would review.
"""

from pathlib import Path

import numpy as np

from sigcloud.aggregation import aggregate
from sigcloud.annealing import AnnealingConfig
from sigcloud.synthetic import FORGERY_STYLE, GENUINE_STYLE, synth_signature
from sigcloud.verification import DecisionThresholds, verify

thresholds = DecisionThresholds()  # accept < 0.06, reject >= 0.14
print(f"accept below {thresholds.accept_below}, reject at or above {thresholds.reject_at_or_above}\n")

enrolled = [synth_signature(GENUINE_STYLE, seed=200 + i) for i in range(5)]
template = aggregate(enrolled, m=32, config=AnnealingConfig(seed=3), client_id="writer-a")

groups = {
    "replayed enrollment": enrolled[:3],
    "fresh genuine": [synth_signature(GENUINE_STYLE, seed=300 + i) for i in range(3)],
    "forgery": [synth_signature(FORGERY_STYLE, seed=400 + i) for i in range(3)],
}

scores = {}
for label, sigs in groups.items():
    outcomes = [verify(s, template, thresholds) for s in sigs]
    scores[label] = [o.score for o in outcomes]
    for o in outcomes:
        print(f"{label:22s} score={o.score:.4f} -> {o.decision.value}")
    print()

print("mean scores:", {k: round(float(np.mean(v)), 4) for k, v in scores.items()})

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(__file__).parent / "out" / "04"
    out.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 3))
    for i, (label, values) in enumerate(scores.items()):
        ax.scatter(values, [i] * len(values), label=label)
    ax.axvline(thresholds.accept_below, color="green", linestyle="--", label="accept bound")
    ax.axvline(thresholds.reject_at_or_above, color="red", linestyle="--", label="reject bound")
    ax.set_yticks(range(len(scores)), list(scores))
    ax.set_xlabel("score (root-mean-square deviation at basis points)")
    ax.legend(loc="center right", fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "decision_bands.png", dpi=120)
    print("plot written to", out / "decision_bands.png")
except ImportError:
    print("matplotlib not available; skipping the plot")
