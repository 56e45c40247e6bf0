"""
Cooperative sensing: closed form against simulation
===================================================

Six sensors report energy statistics to a fusion center, which thresholds a
weighted sum. We compare equal weights with SNR-aware weights, then check the
analytic detection probability with a sample-level Monte Carlo run.
"""
import numpy as np

from apso_sensing import (coefficients, detection_probability, fitness, reference_scenario,
                          simulate_detection)

scenario = reference_scenario()
print("linear channel gains:", np.round(scenario.channel_gains, 4))

coef = coefficients(scenario)
print("H0 variances a:", coef.a)
print("H1 variances b:", np.round(coef.b, 3))

equal = np.ones(scenario.num_sensors)
# weight each sensor by its gain-to-noise ratio; a decent hand-made guess
snr_weighted = scenario.channel_gains / coef.b
snr_weighted /= snr_weighted.max()

for name, w in [("equal", equal), ("snr-weighted", snr_weighted)]:
    print(f"{name:>13}: fitness {fitness(w, scenario):+.4f}  P_d {detection_probability(w, scenario):.4f}")

# Scale does not matter: only the direction of w does.
print("fitness(3 w) - fitness(w) =", fitness(3 * snr_weighted, scenario) - fitness(snr_weighted, scenario))

rng = np.random.default_rng(1)
pf, pd = simulate_detection(snr_weighted, scenario, 100_000, rng)
print(f"Monte Carlo: P_f {pf:.4f} (target {scenario.false_alarm}), "
      f"P_d {pd:.4f} (analytic {detection_probability(snr_weighted, scenario):.4f})")
