import json

import numpy as np
import pytest

from apso_sensing.cli import main
from apso_sensing.sensing import reference_scenario


def write_config(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


SMALL = {"swarm": {"swarm_size": 6, "max_iterations": 12},
         "experiment": {"realizations": 4, "seed": 3, "query_points": 13}}


def test_optimize_writes_trace_and_summary(tmp_path):
    out = tmp_path / "o"
    assert main(["optimize", write_config(tmp_path, SMALL), "--output-dir", str(out)]) == 0
    rows = (out / "trace.csv").read_text().splitlines()
    assert rows[0] == "iteration,best_fitness,pd"
    assert len(rows) == 1 + 13
    meta = json.loads((out / "meta.json").read_text())
    assert len(meta["best_weights"]) == 6
    assert meta["best_pd"] == pytest.approx(float(rows[-1].split(",")[2]), abs=1e-12)


def test_optimize_zero_iterations(tmp_path):
    out = tmp_path / "o"
    assert main(["optimize", "--iterations", "0", "--output-dir", str(out)]) == 0
    assert len((out / "trace.csv").read_text().splitlines()) == 2


def test_optimize_reference_envelope(tmp_path):
    for seed in (1, 2, 3):
        out = tmp_path / f"s{seed}"
        assert main(["optimize", "--seed", str(seed), "--epsilon", "2", "--output-dir", str(out)]) == 0
        pd = json.loads((out / "meta.json").read_text())["best_pd"]
        assert 0.90 <= pd <= 0.96


def test_missing_config(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert main(["optimize", missing, "--output-dir", str(tmp_path)]) == 2
    assert missing in capsys.readouterr().err


def test_malformed_key_named(tmp_path, capsys):
    cfg = write_config(tmp_path, {"swarm": {"v_maximum": 3}})
    assert main(["optimize", cfg, "--output-dir", str(tmp_path)]) == 2
    assert "swarm.v_maximum" in capsys.readouterr().err


def test_bad_value_named(tmp_path, capsys):
    cfg = write_config(tmp_path, {"swarm": {"swarm_size": "many"}})
    assert main(["optimize", cfg, "--output-dir", str(tmp_path)]) == 2
    assert "swarm.swarm_size" in capsys.readouterr().err


def test_unknown_flag_rejected(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["optimize", "--bogus", "1"])
    assert exc.value.code == 2


def test_compare_rows(tmp_path):
    out = tmp_path / "c"
    assert main(["compare", write_config(tmp_path, SMALL), "--output-dir", str(out)]) == 0
    lines = (out / "curves.csv").read_text().splitlines()
    assert lines[0] == "variant,iteration,mean_pd"
    assert len(lines) == 1 + 2 * 13
    assert {l.split(",")[0] for l in lines[1:]} == {"pso", "apso_eps2"}
    meta = json.loads((out / "meta.json").read_text())
    assert meta["config"]["master_seed"] == 3


def test_compare_default_query_points(tmp_path):
    doc = {"swarm": {"swarm_size": 4, "max_iterations": 5}, "experiment": {"realizations": 1}}
    out = tmp_path / "c"
    assert main(["compare", write_config(tmp_path, doc), "--output-dir", str(out)]) == 0
    assert len((out / "curves.csv").read_text().splitlines()) == 201


def test_compare_single_realization_matches_trace(tmp_path):
    doc = {"swarm": {"swarm_size": 6, "max_iterations": 9},
           "experiment": {"seed": 5, "query_points": 10, "variants": [{"kind": "pso"}, {"kind": "apso"}]}}
    cfg = write_config(tmp_path, doc)
    assert main(["compare", cfg, "--realizations", "1", "--output-dir", str(tmp_path / "c")]) == 0
    assert main(["optimize", cfg, "--output-dir", str(tmp_path / "o")]) == 0
    curve = [l.split(",") for l in (tmp_path / "c" / "curves.csv").read_text().splitlines()[1:]]
    apso = [float(r[2]) for r in curve if r[0] == "apso_eps2"]
    trace = [float(l.split(",")[2]) for l in (tmp_path / "o" / "trace.csv").read_text().splitlines()[1:]]
    assert apso == trace


def test_compare_duplicate_labels(tmp_path, capsys):
    doc = {"experiment": {"variants": [{"kind": "pso"}, {"kind": "pso"}]}}
    assert main(["compare", write_config(tmp_path, doc), "--output-dir", str(tmp_path)]) == 2
    assert "experiment.variants" in capsys.readouterr().err


def test_compare_needs_two_variants(tmp_path):
    doc = {"experiment": {"variants": ["pso"]}}
    assert main(["compare", write_config(tmp_path, doc), "--output-dir", str(tmp_path)]) == 2


def test_sweep(tmp_path):
    doc = dict(SMALL, experiment={"realizations": 2, "swarm_sizes": [3, 5]})
    out = tmp_path / "s"
    assert main(["sweep", write_config(tmp_path, doc), "--output-dir", str(out)]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "swarm_size,mean_final_pd"
    assert [l.split(",")[0] for l in lines[1:]] == ["3", "5"]
    assert json.loads((out / "meta.json").read_text())["variant"] == "apso_eps0.5"


def test_sweep_default_sizes(tmp_path):
    doc = {"swarm": {"max_iterations": 2}, "experiment": {"realizations": 1}}
    out = tmp_path / "s"
    assert main(["sweep", write_config(tmp_path, doc), "--output-dir", str(out)]) == 0
    rows = (out / "sweep.csv").read_text().splitlines()[1:]
    assert [int(r.split(",")[0]) for r in rows] == [10, 30, 40, 50, 70, 100]


def test_sweep_empty_sizes(tmp_path):
    doc = {"experiment": {"swarm_sizes": []}}
    assert main(["sweep", write_config(tmp_path, doc), "--output-dir", str(tmp_path)]) == 2


def test_validate_given_weights(tmp_path):
    doc = {"validate": {"weights": [0.8, 1.0, 0.6, 0.6, 0.4, 0.58], "trials": 100000}}
    out = tmp_path / "v"
    assert main(["validate", write_config(tmp_path, doc), "--output-dir", str(out)]) == 0
    text = (out / "validate.txt").read_text()
    assert "verdict: PASS" in text


def test_validate_from_optimizer(tmp_path):
    out = tmp_path / "v"
    assert main(["validate", "--iterations", "30", "--output-dir", str(out)]) == 0
    assert "from optimizer" in (out / "validate.txt").read_text()


def test_validate_small_sample(tmp_path):
    doc = {"validate": {"weights": [1, 1, 1, 1, 1, 1]}}
    out = tmp_path / "v"
    assert main(["validate", write_config(tmp_path, doc), "--trials", "10", "--output-dir", str(out)]) == 3
    assert "sample size" in (out / "validate.txt").read_text()


def test_validate_zero_gains(tmp_path):
    scen = reference_scenario().to_dict()
    scen["snr_db"] = [-300.0] * 6
    doc = {"scenario": scen, "validate": {"weights": [1, 1, 1, 1, 1, 1]}}
    out = tmp_path / "v"
    main(["validate", write_config(tmp_path, doc), "--output-dir", str(out)])
    meta = json.loads((out / "meta.json").read_text())
    assert meta["empirical_pd"] == pytest.approx(meta["empirical_pf"], abs=0.006)


def test_validate_bad_weights(tmp_path):
    doc = {"validate": {"weights": [0, 0, 0, 0, 0, 0]}}
    assert main(["validate", write_config(tmp_path, doc), "--output-dir", str(tmp_path)]) == 2


def test_runtime_failure_exit_1(tmp_path, monkeypatch):
    import apso_sensing.cli as cli

    def boom(*a, **k):
        raise RuntimeError("disk on fire")
    monkeypatch.setattr(cli.ex, "run_experiment", boom)
    assert main(["compare", write_config(tmp_path, SMALL), "--output-dir", str(tmp_path)]) == 1


def test_byte_reproducible(tmp_path):
    cfg = write_config(tmp_path, SMALL)
    for d in ("a", "b"):
        assert main(["compare", cfg, "--seed", "11", "--output-dir", str(tmp_path / d)]) == 0
        assert main(["optimize", cfg, "--seed", "11", "--output-dir", str(tmp_path / d / "opt")]) == 0
    for name in ("curves.csv", "meta.json", "opt/trace.csv", "opt/meta.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_no_temp_files_left(tmp_path):
    out = tmp_path / "o"
    main(["optimize", write_config(tmp_path, SMALL), "--output-dir", str(out)])
    assert sorted(p.name for p in out.iterdir()) == ["meta.json", "trace.csv"]
