"""Independent multi-start local-search oracle for the optimal fusion weights.

Shares no code with the package: the fitness is rewritten from scratch on top
of scipy's normal distribution, and minimized with bounded L-BFGS-B from
uniformly random starts in the unit cube.

Run as a script to regenerate the frozen values used by the tests:

    python -m tests.oracles.optimum
"""
import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

REFERENCE_SNR_DB = np.array([-2.7, -1.2, -4.4, -4.5, -6.7, -4.7])


def make_fitness(snr_db, n=20, sigma_sq=1.0, delta_sq=1.0, pf=0.1):
    g = 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)
    es = float(n)
    a = 2 * n * sigma_sq ** 2 + delta_sq + 0 * g
    b = a + 4 * es * g * sigma_sq
    t = norm.isf(pf)

    def f(w):
        return (t * np.sqrt(np.sum(a * w * w)) - es * np.dot(g, w)) / np.sqrt(np.sum(b * w * w))

    return f


def multistart(f, dims, restarts, seed=12345):
    rng = np.random.default_rng(seed)
    best = (np.inf, None)
    for _ in range(restarts):
        res = minimize(f, rng.random(dims), method="L-BFGS-B", bounds=[(1e-9, 1.0)] * dims,
                       options={"ftol": 1e-15, "gtol": 1e-12})
        if res.fun < best[0]:
            best = (float(res.fun), res.x)
    return best


def angle_grid(f, points=100_000):
    """Dense scan of w = (cos t, sin t) on [0, pi/2] for two-sensor problems."""
    best = np.inf
    for t in np.linspace(0.0, np.pi / 2, points):
        best = min(best, f(np.array([np.cos(t), np.sin(t)])))
    return best


if __name__ == "__main__":
    f = make_fitness(REFERENCE_SNR_DB)
    val, w = multistart(f, 6, 10_000)
    print(f"reference optimum fitness {val!r} P_d {norm.sf(val)!r}")
    print("weights (max-normalized)", (w / w.max()).tolist())
    f2 = make_fitness(REFERENCE_SNR_DB[:2])
    g2 = angle_grid(f2)
    print(f"two-sensor grid optimum fitness {g2!r} P_d {norm.sf(g2)!r}")
    ones = f(np.ones(6))
    print(f"equal weights fitness {ones!r}")
