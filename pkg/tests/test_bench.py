import csv
import json
import statistics

import pytest

from oswvid.bench.cli import main
from oswvid.bench.experiments import (
    export_front,
    read_front,
    run_cell,
    run_suite,
    summarize,
    sweep,
)
from oswvid.bench.generator import GenerationError, GeneratorSpec, generate_instance
from oswvid.engine.algorithms import RunConfig
from oswvid.model import Schedule, instance_to_dict, load_instance, validate
from oswvid.objectives import check_feasible

SMALL = dict(max_iter=2, ns=6, nbest=3, na=6)


def test_generator_deterministic():
    a = generate_instance(GeneratorSpec("CD", 40, seed=5))
    b = generate_instance(GeneratorSpec("CD", 40, seed=5))
    c = generate_instance(GeneratorSpec("CD", 40, seed=6))
    assert json.dumps(instance_to_dict(a)) == json.dumps(instance_to_dict(b))
    assert instance_to_dict(a) != instance_to_dict(c)


def test_generator_single_target_b0_at_pitch_zero():
    for seed in range(10):
        inst = generate_instance(GeneratorSpec("WD", 1, seed=seed))
        w = inst.targets[0].vtw
        L = w.e - w.s
        q = [(1 - abs(p) / 90) * (1 - abs(r) / 90) for p, r in zip(w.pitch[:-1], w.roll[:-1])]
        k = w.b0 - w.s
        assert q[k] == max(q)
        # the sweep crosses zero pitch at the middle sample (or between the two middle ones)
        assert k in (L // 2, (L + 1) // 2)


def test_generator_large_validates_and_is_solo_feasible():
    inst = generate_instance(GeneratorSpec("WD", 600, seed=1))
    assert inst.n == 600 and validate(inst) == []
    for t, g in enumerate(inst.targets):
        assert 1 <= g.d0 <= g.vtw.e - g.vtw.s
        assert 60 <= g.vtw.e - g.vtw.s <= 300
        assert 1 <= g.priority <= 10
        assert check_feasible(Schedule(inst, [(t, g.vtw.s, g.vtw.s + g.d0)])) == []


def test_cd_is_more_congested_than_wd():
    def pairs(family, seed):
        return sum(len(row) for row in generate_instance(GeneratorSpec(family, 100, seed=seed)).conflicts)

    for seed in range(3):
        assert pairs("CD", seed) > pairs("WD", seed)


def test_generator_errors():
    with pytest.raises(GenerationError):
        GeneratorSpec("XX", 10)
    with pytest.raises(GenerationError):
        GeneratorSpec("WD", 10, horizon=100)
    with pytest.raises(GenerationError):
        GeneratorSpec("WD", 0)


def test_export_front_round_trip(tmp_path):
    front = [(0.3, 0.1), (0.1 / 3, 0.7), (0.2, 0.2)]
    export_front(front, tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "f1,f2" and len(lines) == 4
    back = read_front(tmp_path / "f.csv")
    assert back == sorted(front)
    export_front([(0.5, 0.5)], tmp_path / "one.csv")
    assert len((tmp_path / "one.csv").read_text().splitlines()) == 2
    with pytest.raises(ValueError):
        export_front([], tmp_path / "none.csv")


def test_summary_ordering():
    s = summarize([(0.1, 0.9), (0.5, 0.2), (0.3, 0.4)])
    assert s["f1_min"] <= s["f1_avg"] <= s["f1_max"]
    assert s["f2_min"] <= s["f2_avg"] <= s["f2_max"]
    assert s["f1_avg"] == pytest.approx(0.3)


def test_run_cell_outputs(tmp_path, wd50):
    rep = run_cell(wd50, RunConfig.tuned("PD", **SMALL), tmp_path / "cell")
    for name in ("front.csv", "schedule.json", "weights_trace.csv", "trace.csv", "run_meta.json"):
        assert (tmp_path / "cell" / name).exists()
    assert read_front(tmp_path / "cell" / "front.csv") == sorted(rep.front)
    meta = json.loads((tmp_path / "cell" / "run_meta.json").read_text())
    assert meta["seed"] == 0 and meta["config"]["algorithm"] == "PD"
    with open(tmp_path / "cell" / "weights_trace.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == (SMALL["max_iter"] + 1) * 8
    assert {r["family"] for r in rows} == {"Sort", "Expand"}


def test_suite_report_rows_and_determinism(tmp_path, wd50):
    configs = [RunConfig.tuned(a, **SMALL) for a in ("PD", "LA", "ALNS")]
    reps = run_suite(configs, [wd50], tmp_path / "a")
    run_suite(configs, [wd50], tmp_path / "b")
    assert len(reps) == 3 and not any(r.error for r in reps)
    a = (tmp_path / "a" / "report.csv").read_bytes()
    assert a == (tmp_path / "b" / "report.csv").read_bytes()
    with open(tmp_path / "a" / "report.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    for r in rows:
        for q in ("f1", "f2"):
            assert float(r[f"{q}_min"]) <= float(r[f"{q}_avg"]) <= float(r[f"{q}_max"])


def test_suite_records_failures(tmp_path, wd50, monkeypatch):
    import oswvid.bench.experiments as ex

    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(ex, "run", boom)
    reps = run_suite([RunConfig.tuned("PD", **SMALL)], [wd50], tmp_path)
    assert reps[0].error and "boom" in reps[0].error


@pytest.mark.parametrize("param, values, rows", [
    ("rs", [round(0.1 * k, 1) for k in range(10)], 10),
    ("lambda", [round(0.1 * k, 1) for k in range(11)], 11),
])
def test_sweep_rows(tmp_path, param, values, rows):
    from .conftest import generated

    inst = generated("WD", 20, 0)
    reps = sweep(param, values, RunConfig.tuned("PD", max_iter=1, ns=4, nbest=2, na=4), inst, tmp_path)
    assert len(reps) == rows
    with open(tmp_path / "report.csv") as fh:
        table = list(csv.DictReader(fh))
    assert len(table) == rows
    for rep, row in zip(reps, table):
        s = summarize(rep.front)
        assert repr(s["f1_min"]) == row["f1_min"] and repr(s["f2_max"]) == row["f2_max"]
    with pytest.raises(ValueError):
        sweep("bmr", [0.1], RunConfig(), inst)


def test_cli_end_to_end(tmp_path, capsys):
    inst_path = tmp_path / "wd.json"
    assert main(["gen", "--family", "wd", "--n", "20", "--seed", "2", "--out", str(inst_path)]) == 0
    assert load_instance(inst_path).n == 20

    common = ["--instance", str(inst_path), "--max-iter", "2", "--ns", "6", "--nbest", "3", "--na", "6"]
    assert main(["run", "--algo", "alns", *common, "--out", str(tmp_path / "run")]) == 0
    assert (tmp_path / "run" / "front.csv").exists()

    assert main(["sweep", "--param", "rs", "--values", "0,0.5", "--algo", "pd", *common,
                 "--out", str(tmp_path / "sw")]) == 0
    assert len((tmp_path / "sw" / "report.csv").read_text().splitlines()) == 3

    suite = {
        "instances": ["wd.json", {"family": "CD", "n": 15, "seed": 1}],
        "algorithms": ["PD", "ALNS"],
        "seeds": [0],
        "out": "suite",
        **SMALL,
    }
    (tmp_path / "suite.json").write_text(json.dumps(suite))
    assert main(["suite", "--config", str(tmp_path / "suite.json")]) == 0
    assert len((tmp_path / "suite" / "report.csv").read_text().splitlines()) == 5

    assert main(["run", "--algo", "pd", "--instance", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "x")]) == 2
    assert "error" in capsys.readouterr().err


@pytest.mark.slow
def test_la_runtime_grows_with_size():
    sizes = (50, 100, 200, 400)
    medians = []
    for n in sizes:
        inst = generate_instance(GeneratorSpec("WD", n, seed=0))
        times = [run_cell(inst, RunConfig.tuned("LA", seed=s, max_iter=1, ns=10, nbest=5, na=10)).wall_time
                 for s in range(5)]
        medians.append(statistics.median(times))
    assert all(a <= b for a, b in zip(medians, medians[1:])), medians
