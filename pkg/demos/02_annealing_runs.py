"""The annealing engine on a one-dimensional quadratic landscape.

Shows the geometric cooling schedule, the per-iteration trace, and the
convergence rate across one hundred seeded runs.
"""

from pathlib import Path

from sigcloud.annealing import AnnealingConfig, AnnealingProblem, anneal


class Quadratic(AnnealingProblem):
    """f(x) = (x - 3)^2, neighbor = uniform step of +/- 0.5."""

    def fitness(self, solution):
        return (solution - 3.0) ** 2

    def initial(self, rng):
        return rng.uniform(-10.0, 10.0)

    def neighbor(self, solution, rng):
        return solution + rng.uniform(-0.5, 0.5)


config = AnnealingConfig(initial_temperature=10.0, cooling_rate=0.9, outer_iterations=60, seed=1)
run = anneal(Quadratic(), config)
print(f"proposals evaluated: {run.proposals_evaluated}")
print(f"final solution: {run.final_solution:.4f} (fitness {run.final_fitness:.6f})")
print(f"best solution:  {run.best_solution:.4f} (fitness {run.best_fitness:.6f})")

print("\ntrace (every 10th iteration):")
for entry in run.trace[::10]:
    print(f"  k={entry.k:3d}  T={entry.temperature:8.4f}  "
          f"current={entry.current_fitness:10.6f}  best={entry.best_fitness:10.6f}")

out = Path(__file__).parent / "out" / "02"
out.mkdir(parents=True, exist_ok=True)
(out / "trace.csv").write_text(run.trace_csv())
print("\nfull trace written to", out / "trace.csv")

hits = sum(
    anneal(Quadratic(), AnnealingConfig(10.0, 0.9, 60, seed=seed)).best_fitness < 0.01
    for seed in range(100)
)
print(f"runs reaching fitness < 0.01: {hits}/100")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks = [e.k for e in run.trace]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax1.plot(ks, [e.temperature for e in run.trace])
    ax1.set_ylabel("temperature")
    ax2.plot(ks, [e.current_fitness for e in run.trace], label="current")
    ax2.plot(ks, [e.best_fitness for e in run.trace], label="best")
    ax2.set_xlabel("outer iteration")
    ax2.set_ylabel("fitness")
    ax2.set_yscale("log")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(out / "trace.png", dpi=120)
    print("plot written to", out / "trace.png")
except ImportError:
    print("matplotlib not available; skipping the plot")
