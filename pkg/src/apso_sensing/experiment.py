"""Seeded Monte Carlo comparison of the optimizers on a sensing scenario.

Realization ``r`` of a variant labelled ``L`` runs on
``PCG64(SeedSequence(master_seed, spawn_key=(crc32(L), r)))``, so every run is
fixed by its identity alone and the worker count cannot change results.
Per-iteration values are averaged in ascending realization order.
"""
import json
import os
import tempfile
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import swarm
from .gaussian import q
from .sensing import SensingScenario, objective, reference_scenario


@dataclass(frozen=True)
class Variant:
    kind: str = "apso"
    epsilon: float = None
    label: str = None

    def __post_init__(self):
        if self.kind not in swarm.VARIANTS:
            raise ValueError(f"variant kind must be one of {swarm.VARIANTS}, got {self.kind!r}")
        if self.kind == "apso" and self.epsilon is not None and self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.label is None:
            lab = "pso" if self.kind == "pso" else (
                "apso" if self.epsilon is None else f"apso_eps{self.epsilon:g}")
            object.__setattr__(self, "label", lab)
        if "," in self.label or not self.label:
            raise ValueError(f"bad variant label {self.label!r}")

    def swarm_config(self, base):
        if self.kind == "apso" and self.epsilon is not None:
            return base.with_(epsilon=float(self.epsilon))
        return base


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: SensingScenario = field(default_factory=reference_scenario)
    swarm_config: swarm.SwarmConfig = field(default_factory=swarm.SwarmConfig)
    realizations: int = 1000
    master_seed: int = 0
    query_points: int = 100
    variants: tuple = (Variant("pso"), Variant("apso", 2.0))

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError("realizations must be at least 1")
        if self.query_points < 2:
            raise ValueError("query_points must be at least 2")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must fit in 64 unsigned bits")
        labels = [v.label for v in self.variants]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate variant labels: {labels}")
        if self.swarm_config.dimensions != self.scenario.num_sensors:
            object.__setattr__(self, "swarm_config",
                               self.swarm_config.with_(dimensions=self.scenario.num_sensors))

    def to_dict(self):
        sc = asdict(self.swarm_config)
        sc["position_bounds"] = list(sc["position_bounds"])
        return {
            "scenario": self.scenario.to_dict(),
            "swarm": sc,
            "realizations": self.realizations,
            "master_seed": self.master_seed,
            "query_points": self.query_points,
            "variants": [asdict(v) for v in self.variants],
        }


@dataclass
class ExperimentResult:
    per_variant: dict
    interpolated: dict
    metadata: dict

    def final_pd(self, label):
        return float(self.per_variant[label][-1])


class ExperimentError(RuntimeError):
    pass


def realization_rng(master_seed, label, index):
    key = (zlib.crc32(label.encode("utf-8")), int(index))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=key)))


def _run_block(args):
    scenario, cfg, kind, label, seed, start, stop = args
    obj = objective(scenario)
    rows = np.empty((stop - start, cfg.max_iterations + 1))
    for r in range(start, stop):
        try:
            tr = swarm.run(cfg, obj, kind, realization_rng(seed, label, r), batched=True)
        except Exception as exc:
            raise ExperimentError(f"variant {label!r}, realization {r}: {exc}") from exc
        rows[r - start] = tr.best_objective_per_iteration
    return rows


def _mean_pd(rows):
    acc = np.zeros(rows.shape[1])
    for row in rows:
        acc += q(row)
    return acc / rows.shape[0]


def realization_traces(config, variant, workers=1):
    """Best-fitness traces, one row per realization, in realization order."""
    cfg = variant.swarm_config(config.swarm_config)
    r_total = config.realizations
    workers = max(1, min(int(workers), r_total))
    bounds = np.linspace(0, r_total, workers + 1).astype(int)
    jobs = [(config.scenario, cfg, variant.kind, variant.label, config.master_seed, a, b)
            for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if workers == 1:
        blocks = [_run_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_run_block, jobs))
    return np.vstack(blocks)


def run_experiment(config, workers=1):
    """Mean detection-probability curve per variant, plus interpolated query points."""
    per_variant, interpolated = {}, {}
    for variant in config.variants:
        rows = realization_traces(config, variant, workers)
        curve = _mean_pd(rows)
        per_variant[variant.label] = curve
        interpolated[variant.label] = interpolate(
            np.column_stack([np.arange(curve.shape[0]), curve]), config.query_points)
    return ExperimentResult(per_variant, interpolated, config.to_dict())


def interpolate(curve, query_points):
    """Resample ``(x, y)`` pairs at ``query_points`` evenly spaced abscissae.

    Endpoints are reproduced exactly.
    """
    curve = np.asarray(curve, dtype=float)
    if curve.ndim != 2 or curve.shape[1] != 2:
        raise ValueError("curve must be an (n, 2) array of (x, y) pairs")
    if curve.shape[0] < 2:
        raise ValueError("need at least two points to interpolate")
    if query_points < 2:
        raise ValueError("query_points must be at least 2")
    x, y = curve[:, 0], curve[:, 1]
    if np.any(np.diff(x) <= 0):
        raise ValueError("abscissae must be strictly increasing")
    xq = np.linspace(x[0], x[-1], int(query_points))
    return np.column_stack([xq, np.interp(xq, x, y)])


def swarm_size_sweep(config, sizes, variant=None, workers=1):
    """``(S, mean final P_d)`` rows; defaults to the accelerated variant with eps = 0.5."""
    if variant is None:
        variant = Variant("apso", 0.5)
    table = []
    for s in sizes:
        if int(s) != s or s < 1:
            raise ValueError(f"swarm sizes must be positive integers, got {s!r}")
        sub = replace(config, swarm_config=config.swarm_config.with_(swarm_size=int(s)),
                      variants=(variant,))
        res = run_experiment(sub, workers)
        table.append((int(s), res.final_pd(variant.label)))
    return table


# --- serialization ---------------------------------------------------------

def fmt(v):
    return repr(int(v)) if isinstance(v, (int, np.integer)) else f"{float(v):.17g}"


def atomic_write(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def curves_csv(result):
    lines = ["variant,iteration,mean_pd"]
    for label, pts in result.interpolated.items():
        lines += [f"{label},{fmt(x)},{fmt(y)}" for x, y in pts]
    return "\n".join(lines) + "\n"


def sweep_csv(table):
    lines = ["swarm_size,mean_final_pd"] + [f"{s},{fmt(pd)}" for s, pd in table]
    return "\n".join(lines) + "\n"


def metadata_json(meta):
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(type(o).__name__)

    return json.dumps(meta, indent=2, sort_keys=True, default=default, allow_nan=False) + "\n"


def is_nondecreasing(curve, atol=0.0):
    return bool(np.all(np.diff(np.asarray(curve)) >= -atol))

