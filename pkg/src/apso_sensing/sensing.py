"""Cooperative energy-detection model with a weighted linear fusion rule.

``M`` sensors each integrate ``N`` squared samples, report the energy over a
noisy control channel, and the fusion center thresholds a weighted sum of the
reports. Everything analytic here uses the Gaussian (central-limit)
approximation of the fused statistic; :func:`simulate_detection` checks that
approximation against sample-level Monte Carlo.
"""
import json
from dataclasses import dataclass, field

import numpy as np

from .gaussian import q, q_inv, sample_gaussian

#: SNRs (dB) of the six-sensor reference network.
REFERENCE_SNR_DB = (-2.7, -1.2, -4.4, -4.5, -6.7, -4.7)

_SCENARIO_KEYS = ("snr_db", "num_samples", "sigma_sq", "delta_sq", "false_alarm")


def _vector(name, values, m=None):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if m is not None and arr.shape[0] != m:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {m}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SensingScenario:
    """A fixed detection problem. Arrays are length ``num_sensors`` and read-only."""

    num_samples: int
    noise_variances: np.ndarray
    report_variances: np.ndarray
    channel_gains: np.ndarray
    signal_energy: float
    false_alarm: float
    snr_db: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.num_samples) != self.num_samples or self.num_samples < 1:
            raise ValueError(f"num_samples must be a positive integer, got {self.num_samples!r}")
        sig = _vector("noise_variances", self.noise_variances)
        m = sig.shape[0]
        if m < 1:
            raise ValueError("need at least one sensor")
        dlt = _vector("report_variances", self.report_variances, m)
        gains = _vector("channel_gains", self.channel_gains, m)
        if np.any(sig <= 0):
            raise ValueError("noise_variances must be positive")
        if np.any(dlt < 0):
            raise ValueError("report_variances must be nonnegative")
        if np.any(gains < 0):
            raise ValueError("channel_gains must be nonnegative")
        if not self.signal_energy > 0:
            raise ValueError("signal_energy must be positive")
        if not 0.0 < self.false_alarm < 1.0:
            raise ValueError(f"false_alarm must lie in (0, 1), got {self.false_alarm!r}")
        object.__setattr__(self, "num_samples", int(self.num_samples))
        object.__setattr__(self, "noise_variances", sig)
        object.__setattr__(self, "report_variances", dlt)
        object.__setattr__(self, "channel_gains", gains)
        object.__setattr__(self, "signal_energy", float(self.signal_energy))
        object.__setattr__(self, "false_alarm", float(self.false_alarm))
        if self.snr_db is not None:
            object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))

    def __eq__(self, other):
        if not isinstance(other, SensingScenario):
            return NotImplemented
        return (self.num_samples == other.num_samples
                and self.signal_energy == other.signal_energy
                and self.false_alarm == other.false_alarm
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ("noise_variances", "report_variances", "channel_gains")))

    __hash__ = None

    @property
    def num_sensors(self):
        return self.noise_variances.shape[0]

    def with_gains(self, gains):
        """Copy of the scenario with the channel gains replaced."""
        return SensingScenario(self.num_samples, self.noise_variances, self.report_variances,
                               gains, self.signal_energy, self.false_alarm)

    def to_dict(self):
        """Flat document form; gains and signal energy are rebuilt on load."""
        if self.snr_db is not None:
            snr = list(self.snr_db)
        else:
            if np.any(self.channel_gains <= 0):
                raise ValueError("a zero channel gain has no finite dB representation")
            snr = (10.0 * np.log10(self.channel_gains)).tolist()
        return {
            "snr_db": snr,
            "num_samples": self.num_samples,
            "sigma_sq": self.noise_variances.tolist(),
            "delta_sq": self.report_variances.tolist(),
            "false_alarm": self.false_alarm,
        }

    @classmethod
    def from_dict(cls, doc):
        unknown = set(doc) - set(_SCENARIO_KEYS)
        if unknown:
            raise KeyError(f"unknown scenario key(s): {', '.join(sorted(unknown))}")
        missing = [k for k in _SCENARIO_KEYS if k not in doc]
        if missing:
            raise KeyError(f"missing scenario key(s): {', '.join(missing)}")
        return build_scenario(doc["snr_db"], doc["num_samples"], doc["sigma_sq"],
                              doc["delta_sq"], doc["false_alarm"])

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Per-sensor variances of the reported statistic under each hypothesis.

    ``a`` is the variance with the primary user absent, ``b`` with it present.
    Both define diagonal quadratic forms in the weights.
    """

    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class DetectionTrialRecord:
    received_statistics: np.ndarray
    reported_statistics: np.ndarray
    fused_statistic: float
    signal_present: bool
    decision: bool


def build_scenario(snr_db, num_samples=20, sigma_sq=None, delta_sq=None, false_alarm=0.1):
    """Build a scenario from per-sensor SNRs with an all-ones primary signal.

    The signal is ``s(k) = 1`` for every sample, so its energy equals
    ``num_samples`` and each gain ``g = snr * N / E_s`` reduces to the linear
    SNR. ``sigma_sq`` and ``delta_sq`` default to unit variances.
    """
    snr_db = _vector("snr_db", snr_db)
    m = snr_db.shape[0]
    if int(num_samples) != num_samples or num_samples < 1:
        raise ValueError(f"num_samples must be a positive integer, got {num_samples!r}")
    n = int(num_samples)
    sigma_sq = np.ones(m) if sigma_sq is None else _vector("sigma_sq", sigma_sq, m)
    delta_sq = np.ones(m) if delta_sq is None else _vector("delta_sq", delta_sq, m)
    signal = np.ones(n)
    energy = float(np.sum(signal ** 2))
    gamma = 10.0 ** (snr_db / 10.0)
    gains = gamma * n / energy
    return SensingScenario(n, sigma_sq, delta_sq, gains, energy, false_alarm,
                           snr_db=tuple(snr_db.tolist()))


def reference_scenario():
    """Six sensors, N = 20, unit noise variances, false-alarm target 0.1."""
    return build_scenario(REFERENCE_SNR_DB, 20, np.ones(6), np.ones(6), 0.1)


def coefficients(scenario):
    sig = scenario.noise_variances
    a = 2.0 * scenario.num_samples * sig ** 2 + scenario.report_variances
    b = a + 4.0 * scenario.signal_energy * scenario.channel_gains * sig
    return QuadraticCoefficients(a, b)


def _weights(w, m):
    w = np.asarray(w, dtype=float)
    if w.shape[-1:] != (m,):
        raise ValueError(f"weight vector(s) must have trailing length {m}, got shape {w.shape}")
    return w


def fitness(w, scenario):
    """Argument of ``Q`` in the detection probability; lower is better.

    ``w`` may carry leading batch axes. The value is invariant to rescaling
    ``w`` by any positive factor. All-zero weights raise ``ValueError``.
    """
    w = _weights(w, scenario.num_sensors)
    if np.any(np.all(w == 0, axis=-1)):
        raise ValueError("fitness is undefined for an all-zero weight vector")
    return objective(scenario)(w)


def detection_probability(w, scenario):
    return q(fitness(w, scenario))


def objective(scenario):
    """Batched fitness for optimizers: all-zero rows score ``+inf`` instead of raising.

    Position clamping can pin every coordinate of a particle to zero, and a
    fusion rule that ignores every sensor is simply the worst possible rule.
    """
    qf = q_inv(scenario.false_alarm)
    m = scenario.num_sensors
    coef = coefficients(scenario)
    shift = scenario.signal_energy * scenario.channel_gains

    def f(w):
        w = _weights(w, m)
        w2 = w * w
        sb = np.sqrt(w2 @ coef.b)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(sb > 0, (qf * np.sqrt(w2 @ coef.a) - w @ shift) / sb, np.inf)
        return float(out) if np.ndim(out) == 0 else out

    return f


def threshold(w, scenario):
    """Fusion threshold meeting the false-alarm target under the Gaussian approximation."""
    w = _weights(w, scenario.num_sensors)
    coef = coefficients(scenario)
    h0_mean = w @ (scenario.num_samples * scenario.noise_variances)
    return h0_mean + q_inv(scenario.false_alarm) * np.sqrt((w * w) @ coef.a)


def _draw_statistics(rng, scenario, present, n_trials):
    """Energy and reported statistics for ``n_trials`` independent trials.

    Draw order is frozen: all sensing noise in (trial, sensor, sample) order,
    then all report noise in (trial, sensor) order.
    """
    m, n = scenario.num_sensors, scenario.num_samples
    noise = sample_gaussian(rng, 0.0, 1.0, (n_trials, m, n))
    noise *= np.sqrt(scenario.noise_variances)[:, None]
    if present:
        amplitude = np.sqrt(scenario.channel_gains) * np.sqrt(scenario.signal_energy / n)
        noise += amplitude[:, None]
    u = np.sum(noise * noise, axis=-1)
    z = sample_gaussian(rng, 0.0, 1.0, (n_trials, m)) * np.sqrt(scenario.report_variances)
    return u, u + z


def detection_trial(w, scenario, signal_present, rng):
    """Run one sample-level sensing trial and return every intermediate statistic."""
    w = _weights(w, scenario.num_sensors)
    u, y = _draw_statistics(rng, scenario, signal_present, 1)
    y_fc = float(y[0] @ w)
    return DetectionTrialRecord(u[0], y[0], y_fc, bool(signal_present),
                                bool(y_fc > threshold(w, scenario)))


def simulate_detection(w, scenario, trials, rng, chunk=8192):
    """Empirical ``(P_f, P_d)`` of the fused detector over ``trials`` per hypothesis.

    Noise is real Gaussian. Trials are processed in chunks; each chunk draws
    its signal-absent trials before its signal-present ones.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    w = _weights(w, scenario.num_sensors)
    tau = threshold(w, scenario)
    hits = [0, 0]
    done = 0
    while done < trials:
        c = min(chunk, trials - done)
        for k, present in enumerate((False, True)):
            _, y = _draw_statistics(rng, scenario, present, c)
            hits[k] += int(np.count_nonzero(y @ w > tau))
        done += c
    return hits[0] / trials, hits[1] / trials
