import csv
import json

import numpy as np
import pytest

from layerwise.cli import main
from layerwise.configure import GrowthConfig, grow_network
from layerwise.data import load_csv, make_synthetic, save_csv, split_dataset
from layerwise.network import evaluate, forward, load
from layerwise.trainer import TrainConfig, layer_forward


@pytest.fixture(scope="module")
def data_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "nl.csv"
    save_csv(make_synthetic(3, 120, seed=17, kind="nonlinear"), path)
    return str(path)


def run_ok(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    assert code == 0, out.err
    return out.out


BASE = ["--inputs", "3", "--targets", "1", "--seed", "42", "--max-cycles", "30"]


def test_probe_reports_model_and_width(data_csv, capsys, tmp_path):
    table = tmp_path / "probes.csv"
    out = run_ok(["probe", "--data", data_csv, *BASE, "--out", str(table)], capsys)
    keys = {line.split()[0] for line in out.splitlines()}
    assert {"probe_mode", "alpha", "lambda", "beta", "k_real", "k_o", "p0"} <= keys
    report = dict(line.split(maxsplit=1) for line in out.splitlines() if " " in line)
    assert float(report["alpha"]) > 0
    assert float(report["beta"]) > 0
    assert int(report["p0"]) >= 1
    with open(table, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["p", "k", "sigma2"]
    assert [r[0] for r in rows[1:]] == ["1", "2", "3", "4", "8"]
    # trained probes count layer plus head weights: k = (3+1)p
    assert [int(r[1]) for r in rows[1:]] == [4, 8, 12, 16, 32]


def test_probe_output_is_deterministic(data_csv, capsys):
    args = ["probe", "--data", data_csv, *BASE]
    assert run_ok(args, capsys) == run_ok(args, capsys)


def test_configure_is_an_alias(data_csv, capsys):
    a = run_ok(["probe", "--data", data_csv, *BASE], capsys)
    b = run_ok(["configure", "--data", data_csv, *BASE], capsys)
    assert a == b


def test_missing_required_flag_is_usage_error(data_csv, capsys):
    assert main(["probe", "--data", data_csv, "--targets", "1"]) == 2
    assert main(["train", "--data", data_csv, *BASE]) == 2  # no --model
    assert main(["definitely-not-a-command"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_inconsistent_train_flags_are_usage_errors(data_csv, capsys, tmp_path):
    model = str(tmp_path / "m.json")
    argv = ["train", "--data", data_csv, *BASE, "--model", model, "--step-scale", "0"]
    assert main(argv) == 2
    argv = ["train", "--data", data_csv, "--inputs", "3", "--targets", "1",
            "--max-cycles", "5", "--model", model]  # default patience 20 > 5
    assert main(argv) == 2
    err = capsys.readouterr().err
    assert "patience" in err


def test_train_writes_model_and_history(data_csv, capsys, tmp_path):
    model = tmp_path / "net.json"
    hist = tmp_path / "hist.csv"
    out = run_ok(
        ["train", "--data", data_csv, *BASE, "--model", str(model), "--history", str(hist)],
        capsys,
    )
    assert "network:" in out and "dataset_mse" in out
    net = load(model)
    assert net.in_dim == 3

    with open(hist, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["layer", "cycle", "train_cost", "test_cost", "delta", "is_best"]
    body = rows[1:]
    assert len(body) >= 1

    # replay the same growth in-process: cycle counts must match exactly
    ds = load_csv(data_csv, 3, 1)
    split = split_dataset(ds, 0.25, seed=42)
    gcfg = GrowthConfig(train=TrainConfig(max_cycles=30, patience=20, seed=42))
    result = grow_network(split, gcfg)
    expected_rows = sum(len(r.history) for r in result.layer_reports)
    assert len(body) == expected_rows

    # per-layer prefix minimum of test cost never increases
    for layer_id in sorted({r[0] for r in body}):
        costs = [float(r[3]) for r in body if r[0] == layer_id]
        prefix = np.minimum.accumulate(costs)
        assert all(a >= b for a, b in zip(prefix, prefix[1:]))


def test_train_is_bit_deterministic(data_csv, capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_ok(["train", "--data", data_csv, *BASE, "--model", str(a)], capsys)
    run_ok(["train", "--data", data_csv, *BASE, "--model", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_train_unwritable_model_path(data_csv, capsys, tmp_path):
    target = tmp_path / "no-such-dir" / "net.json"
    assert main(["train", "--data", data_csv, *BASE, "--model", str(target)]) == 1
    assert not target.exists()
    assert "error:" in capsys.readouterr().err


def test_eval_replays_recorded_mse(data_csv, capsys, tmp_path):
    model = tmp_path / "net.json"
    run_ok(["train", "--data", data_csv, *BASE, "--model", str(model)], capsys)
    out = run_ok(["eval", "--data", data_csv, "--inputs", "3", "--targets", "1",
                  "--model", str(model)], capsys)
    report = dict(line.split() for line in out.splitlines())
    meta = json.loads(model.read_text())["meta"]
    assert float(report["mse"]) == pytest.approx(meta["dataset_mse"], rel=1e-10)
    assert float(report["cost"]) == pytest.approx(meta["dataset_cost"], rel=1e-10)
    # independent replay with the library
    net = load(model)
    ds = load_csv(data_csv, 3, 1)
    cost, mse = evaluate(net, ds.inputs, ds.targets)
    assert float(report["mse"]) == mse
    assert float(report["cost"]) == cost


def test_predict_matches_forward_composition(data_csv, capsys, tmp_path):
    model = tmp_path / "net.json"
    preds_path = tmp_path / "preds.csv"
    run_ok(["train", "--data", data_csv, *BASE, "--model", str(model)], capsys)
    run_ok(["predict", "--data", data_csv, "--inputs", "3", "--targets", "1",
            "--model", str(model), "--out", str(preds_path)], capsys)
    with open(preds_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["p1"]
    got = np.array([[float(v) for v in row] for row in rows[1:]]).T

    net = load(model)
    ds = load_csv(data_csv, 3, 1)
    assert np.array_equal(got, forward(net, ds.inputs))
    # hand composition: chain the layers, then the head
    z = ds.inputs
    for layer in net.layers:
        z = layer_forward(layer, z)
    assert np.array_equal(got, net.head.weights @ z)


def test_predict_writes_to_stdout_without_out(data_csv, capsys, tmp_path):
    model = tmp_path / "net.json"
    run_ok(["train", "--data", data_csv, *BASE, "--model", str(model)], capsys)
    out = run_ok(["predict", "--data", data_csv, "--inputs", "3", "--targets", "1",
                  "--model", str(model)], capsys)
    assert out.splitlines()[0] == "p1"
    assert len(out.splitlines()) == 121


def test_model_data_width_mismatch_names_both(data_csv, capsys, tmp_path):
    model = tmp_path / "net.json"
    run_ok(["train", "--data", data_csv, *BASE, "--model", str(model)], capsys)
    wide = tmp_path / "wide.csv"
    save_csv(make_synthetic(5, 30, seed=3), wide)
    code = main(["eval", "--data", str(wide), "--inputs", "5", "--targets", "1",
                 "--model", str(model)])
    assert code == 1
    err = capsys.readouterr().err
    assert "3" in err and "5" in err


def test_bad_csv_is_runtime_error(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n")
    assert main(["probe", "--data", str(bad), *BASE]) == 1
    assert "error:" in capsys.readouterr().err


def test_jobs_flag_does_not_change_probe_output(data_csv, capsys):
    a = run_ok(["probe", "--data", data_csv, *BASE, "--jobs", "1"], capsys)
    b = run_ok(["probe", "--data", data_csv, *BASE, "--jobs", "4"], capsys)
    assert a == b
