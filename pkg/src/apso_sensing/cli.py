"""``apso-sensing`` command line: JSON config in, CSV/JSON results out.

Exit codes: 0 success, 1 runtime failure, 2 configuration error,
3 validation failure.
"""
import argparse
import json
import os
import sys
import numpy as np

from . import experiment as ex
from . import swarm
from .gaussian import q
from .sensing import SensingScenario, detection_probability, fitness, objective, \
    reference_scenario, simulate_detection

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG, EXIT_VALIDATION = 0, 1, 2, 3

MIN_CERTIFIED_TRIALS = 100_000
PF_TOL = 0.01
PD_TOL = 0.02

_SECTIONS = {
    "scenario": None,
    "swarm": {"swarm_size", "cognitive_coeff", "social_coeff", "inertia", "v_max",
              "epsilon", "max_iterations", "position_bounds", "accel_max"},
    "experiment": {"realizations", "seed", "query_points", "variants", "swarm_sizes",
                   "sweep_epsilon"},
    "optimize": {"variant"},
    "validate": {"weights", "trials"},
}

DEFAULT_SWARM_SIZES = (10, 30, 40, 50, 70, 100)


class ConfigError(Exception):
    pass


def _check_keys(doc, allowed, where):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected a JSON object")
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"{where}.{key}: unknown key" if where else f"{key}: unknown key")


def load_config(path):
    """Read and validate a config document; ``None`` gives the reference setup."""
    doc = {}
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    _check_keys(doc, _SECTIONS, "")
    for name, allowed in _SECTIONS.items():
        if allowed is not None and name in doc:
            _check_keys(doc[name], allowed, name)
    return doc


def _get(section, key, default, kind, where):
    if key not in section or section[key] is None:
        return default
    val = section[key]
    try:
        if kind is int:
            if isinstance(val, bool) or int(val) != val:
                raise ValueError
            return int(val)
        if kind is float:
            if isinstance(val, bool):
                raise ValueError
            return float(val)
        return kind(val)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key}: expected {kind.__name__}, got {val!r}") from None


def _scenario(doc):
    if "scenario" not in doc:
        return reference_scenario()
    try:
        return SensingScenario.from_dict(doc["scenario"])
    except (KeyError, ValueError, TypeError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        raise ConfigError(f"scenario: {msg}") from None


def _swarm_config(doc, args, dims):
    sec = doc.get("swarm", {})
    kw = {}
    for key, kind in (("swarm_size", int), ("cognitive_coeff", float), ("social_coeff", float),
                      ("inertia", float), ("v_max", float), ("epsilon", float),
                      ("max_iterations", int), ("accel_max", float)):
        val = _get(sec, key, None, kind, "swarm")
        if val is not None:
            kw[key] = val
    if "position_bounds" in sec:
        pb = sec["position_bounds"]
        if not (isinstance(pb, list) and len(pb) == 2):
            raise ConfigError("swarm.position_bounds: expected [lower, upper]")
        kw["position_bounds"] = tuple(pb)
    if args.swarm_size is not None:
        kw["swarm_size"] = args.swarm_size
    if args.iterations is not None:
        kw["max_iterations"] = args.iterations
    if args.epsilon is not None and args.command != "sweep":
        kw["epsilon"] = args.epsilon
    kw["dimensions"] = dims
    try:
        return swarm.SwarmConfig(**kw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"swarm: {exc}") from None


def _variants(sec, base_eps):
    raw = sec.get("variants")
    if raw is None:
        return (ex.Variant("pso"), ex.Variant("apso", base_eps))
    if not isinstance(raw, list):
        raise ConfigError("experiment.variants: expected a list")
    out = []
    for i, item in enumerate(raw):
        where = f"experiment.variants[{i}]"
        if isinstance(item, str):
            item = {"kind": item}
        _check_keys(item, {"kind", "epsilon", "label"}, where)
        kind = item.get("kind", "apso")
        eps = _get(item, "epsilon", None, float, where)
        if kind == "apso" and eps is None:
            eps = base_eps
        try:
            out.append(ex.Variant(kind, eps, item.get("label")))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    return tuple(out)


def experiment_config(doc, args):
    scen = _scenario(doc)
    cfg = _swarm_config(doc, args, scen.num_sensors)
    sec = doc.get("experiment", {})
    seed = args.seed if args.seed is not None else _get(sec, "seed", 0, int, "experiment")
    reals = args.realizations if args.realizations is not None else \
        _get(sec, "realizations", 1000, int, "experiment")
    qp = _get(sec, "query_points", 100, int, "experiment")
    variants = _variants(sec, cfg.epsilon)
    try:
        return ex.ExperimentConfig(scen, cfg, reals, seed, qp, variants)
    except ValueError as exc:
        where = "experiment.variants" if "duplicate" in str(exc) else "experiment"
        raise ConfigError(f"{where}: {exc}") from None


def _write_meta(out, meta):
    ex.atomic_write(os.path.join(out, "meta.json"), ex.metadata_json(meta))


def _optimize_once(config, kind, label):
    rng = ex.realization_rng(config.master_seed, label, 0)
    return swarm.run(config.swarm_config, objective(config.scenario), kind, rng, batched=True)


def _optimize_variant(doc, config, args):
    kind = args.variant or doc.get("optimize", {}).get("variant", "apso")
    try:
        return ex.Variant(kind, config.swarm_config.epsilon if kind == "apso" else None)
    except ValueError as exc:
        raise ConfigError(f"optimize.variant: {exc}") from None


def cmd_optimize(doc, args):
    config = experiment_config(doc, args)
    variant = _optimize_variant(doc, config, args)
    trace = _optimize_once(config, variant.kind, variant.label)
    best = trace.best_objective_per_iteration
    lines = ["iteration,best_fitness,pd"]
    lines += [f"{t},{ex.fmt(f)},{ex.fmt(q(f))}" for t, f in enumerate(best)]
    ex.atomic_write(os.path.join(args.output_dir, "trace.csv"), "\n".join(lines) + "\n")
    w = trace.best_position
    meta = {"command": "optimize", "variant": variant.label, "config": config.to_dict(),
            "best_weights": w.tolist(), "best_fitness": float(fitness(w, config.scenario)),
            "best_pd": float(detection_probability(w, config.scenario))}
    _write_meta(args.output_dir, meta)
    print(f"{variant.label}: P_d = {meta['best_pd']:.6f}, fitness = {meta['best_fitness']:.6f}")
    return EXIT_OK


def cmd_compare(doc, args):
    config = experiment_config(doc, args)
    if len(config.variants) < 2:
        raise ConfigError("experiment.variants: compare needs at least two variants")
    result = ex.run_experiment(config, workers=args.threads)
    ex.atomic_write(os.path.join(args.output_dir, "curves.csv"), ex.curves_csv(result))
    meta = {"command": "compare", "config": result.metadata,
            "final_mean_pd": {k: float(v[-1]) for k, v in result.per_variant.items()}}
    _write_meta(args.output_dir, meta)
    for label, pd in meta["final_mean_pd"].items():
        print(f"{label}: final mean P_d = {pd:.6f}")
    return EXIT_OK


def cmd_sweep(doc, args):
    config = experiment_config(doc, args)
    sec = doc.get("experiment", {})
    sizes = sec.get("swarm_sizes", list(DEFAULT_SWARM_SIZES))
    if not isinstance(sizes, list) or not sizes:
        raise ConfigError("experiment.swarm_sizes: expected a non-empty list")
    if any(isinstance(s, bool) or not isinstance(s, int) or s < 1 for s in sizes):
        raise ConfigError("experiment.swarm_sizes: entries must be positive integers")
    eps = args.epsilon if args.epsilon is not None else \
        _get(sec, "sweep_epsilon", 0.5, float, "experiment")
    variant = ex.Variant("apso", eps)
    table = ex.swarm_size_sweep(config, sizes, variant, workers=args.threads)
    ex.atomic_write(os.path.join(args.output_dir, "sweep.csv"), ex.sweep_csv(table))
    _write_meta(args.output_dir, {"command": "sweep", "variant": variant.label,
                                  "config": config.to_dict(), "swarm_sizes": sizes})
    for s, pd in table:
        print(f"S={s}: mean final P_d = {pd:.6f}")
    return EXIT_OK


def cmd_validate(doc, args):
    config = experiment_config(doc, args)
    scen = config.scenario
    sec = doc.get("validate", {})
    trials = args.trials if args.trials is not None else \
        _get(sec, "trials", MIN_CERTIFIED_TRIALS, int, "validate")
    if trials < 1:
        raise ConfigError("validate.trials: must be positive")
    weights = sec.get("weights")
    if weights is None:
        variant = _optimize_variant(doc, config, args)
        weights = _optimize_once(config, variant.kind, variant.label).best_position
        source = f"optimizer ({variant.label}, seed {config.master_seed})"
    else:
        source = "config"
    w = np.asarray(weights, dtype=float)
    if w.shape != (scen.num_sensors,) or not np.all(np.isfinite(w)) or not np.any(w):
        raise ConfigError(f"validate.weights: need {scen.num_sensors} finite weights, not all zero")

    rng = ex.realization_rng(config.master_seed, "validate", 0)
    emp_pf, emp_pd = simulate_detection(w, scen, trials, rng)
    pd = float(detection_probability(w, scen))
    gap_pf, gap_pd = abs(emp_pf - scen.false_alarm), abs(emp_pd - pd)
    ok = gap_pf <= PF_TOL and gap_pd <= PD_TOL
    lines = [
        f"weights: {' '.join(ex.fmt(x) for x in w)} (from {source})",
        f"trials: {trials}",
        f"false_alarm analytic={ex.fmt(scen.false_alarm)} empirical={ex.fmt(emp_pf)} gap={ex.fmt(gap_pf)} tol={PF_TOL}",
        f"detection analytic={ex.fmt(pd)} empirical={ex.fmt(emp_pd)} gap={ex.fmt(gap_pd)} tol={PD_TOL}",
    ]
    if trials < MIN_CERTIFIED_TRIALS:
        lines.append(f"verdict: UNCERTIFIED (sample size {trials} < {MIN_CERTIFIED_TRIALS} trials)")
        status = EXIT_VALIDATION
    else:
        lines.append("verdict: " + ("PASS" if ok else "FAIL"))
        status = EXIT_OK if ok else EXIT_VALIDATION
    text = "\n".join(lines) + "\n"
    ex.atomic_write(os.path.join(args.output_dir, "validate.txt"), text)
    _write_meta(args.output_dir, {"command": "validate", "config": config.to_dict(),
                                  "weights": w.tolist(), "trials": trials,
                                  "empirical_pf": emp_pf, "empirical_pd": emp_pd,
                                  "analytic_pd": pd, "exit_status": status})
    sys.stdout.write(text)
    return status


COMMANDS = {"optimize": cmd_optimize, "compare": cmd_compare,
            "sweep": cmd_sweep, "validate": cmd_validate}


def _seed(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be a nonnegative number")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="apso-sensing",
        description="Optimize fusion weights for cooperative spectrum sensing with PSO / A-APSO.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("optimize", "single seeded optimization run"),
                        ("compare", "mean P_d curves of several variants"),
                        ("sweep", "final mean P_d against swarm size"),
                        ("validate", "Monte Carlo check of the analytic P_d")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", nargs="?", help="JSON config (defaults to the reference setup)")
        p.add_argument("--seed", type=_seed)
        p.add_argument("--iterations", type=_nonneg_int)
        p.add_argument("--realizations", type=_positive)
        p.add_argument("--epsilon", type=_nonneg_float)
        p.add_argument("--swarm-size", type=_positive)
        p.add_argument("--output-dir", default="./results")
        p.add_argument("--threads", type=_positive, default=1)
        if name in ("optimize", "validate"):
            p.add_argument("--variant", choices=swarm.VARIANTS)
        if name == "validate":
            p.add_argument("--trials", type=_positive)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        doc = load_config(args.config)
        return COMMANDS[args.command](doc, args)
    except ConfigError as exc:
        print(f"apso-sensing: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - any runtime failure maps to exit 1
        print(f"apso-sensing: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
