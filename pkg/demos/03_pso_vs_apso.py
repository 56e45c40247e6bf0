"""
Standard PSO against acceleration-aided PSO
===========================================

Average the best-so-far detection probability over many seeded runs of each
optimizer. Pass a realization count on the command line; the full study uses
1000. If matplotlib is installed the mean curves are plotted.
"""
import sys

from apso_sensing import ExperimentConfig, Variant, run_experiment

realizations = int(sys.argv[1]) if len(sys.argv) > 1 else 100

config = ExperimentConfig(
    realizations=realizations,
    master_seed=1,
    variants=(Variant("pso"), Variant("apso", 0.5), Variant("apso", 2.0)),
)
result = run_experiment(config)

for label, curve in result.per_variant.items():
    print(f"{label:>12}: P_d after 0/10/50/100 iterations = "
          + " / ".join(f"{curve[t]:.4f}" for t in (0, 10, 50, 100)))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

fig, ax = plt.subplots()
for label, pts in result.interpolated.items():
    ax.plot(pts[:, 0], pts[:, 1], label=label)
ax.set_xlabel("iteration")
ax.set_ylabel("mean P_d")
ax.legend()
fig.savefig("pso_vs_apso.png", dpi=120)
print("wrote pso_vs_apso.png")
