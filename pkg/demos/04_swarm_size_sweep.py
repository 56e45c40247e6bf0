"""
How much does swarm size matter?
================================

Final mean detection probability for several swarm sizes, next to the best
achievable value found by a plain multi-start local search.
"""
import sys

import numpy as np

from apso_sensing import ExperimentConfig, detection_probability, reference_scenario, \
    swarm_size_sweep
from apso_sensing.sensing import objective

realizations = int(sys.argv[1]) if len(sys.argv) > 1 else 100
table = swarm_size_sweep(ExperimentConfig(realizations=realizations), [10, 30, 50, 100])
for size, pd in table:
    print(f"S = {size:>3}: mean final P_d = {pd:.4f}")

# A crude reference optimum: best of many random weight vectors, refined by
# coordinate-wise random perturbation. Good to a few 1e-5 in P_d.
scenario = reference_scenario()
f = objective(scenario)
rng = np.random.default_rng(0)
w = rng.random((20000, 6))
best = w[np.argmin(f(w))]
for scale in (0.1, 0.03, 0.01, 0.003):
    trial = np.clip(best + scale * rng.standard_normal((5000, 6)), 1e-6, 1)
    cand = trial[np.argmin(f(trial))]
    if f(cand) < f(best):
        best = cand
print(f"reference optimum P_d ~ {detection_probability(best, scenario):.4f}")
