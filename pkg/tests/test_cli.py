import json

import numpy as np
import pytest

from dpnmf.cli import main
from dpnmf.data_io import load_dense_csv, save_dense_csv, synth_lowrank


@pytest.fixture
def data_csv(tmp_path):
    v = synth_lowrank(10, 30, 3, 0)[0]
    path = tmp_path / "v.csv"
    save_dense_csv(path, v)
    return path


def test_fit_writes_outputs(tmp_path, data_csv, capsys):
    out = tmp_path / "run"
    rc = main(["fit", "--input", str(data_csv), "--clean", str(data_csv),
               "--k", "3", "--iters", "20", "--tol", "0", "--out", str(out)])
    assert rc == 0
    for name in ("w.csv", "h.csv", "r.csv", "trajectory.jsonl", "manifest.json"):
        assert (out / name).exists()
    records = [json.loads(l) for l in (out / "trajectory.jsonl").read_text().splitlines()]
    assert len(records) == 20
    assert set(records[0]) == {"iter", "loss", "objective", "eps_overall"}
    assert records[0]["objective"] is not None and records[0]["eps_overall"] is None
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["k"] == 3 and manifest["lam"] == 0.1
    assert load_dense_csv(out / "w.csv").shape == (10, 3)


def test_account_prints_worked_example(capsys):
    rc = main(["account", "--iters", "100", "--n", "100", "--eps-t", "0.5",
               "--delta", "1e-5", "--outliers"])
    assert rc == 0
    lines = dict(l.split(": ") for l in capsys.readouterr().out.splitlines())
    assert float(lines["epsilon"]) == pytest.approx(8.069, abs=1e-3)
    assert float(lines["alpha_opt"]) == pytest.approx(4.2878, abs=1e-3)
    assert float(lines["linear composition epsilon"]) == 100


def test_fit_dp_reproducible(tmp_path, data_csv):
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        rc = main(["fit-dp", "--input", str(data_csv), "--k", "3", "--eps-t", "0.5",
                   "--delta", "1e-5", "--seed", "7", "--iters", "10", "--eta-h", "5",
                   "--out", str(out), "--transcript", str(out / "t.txt")])
        assert rc == 0
        outs.append(out)
    for name in ("w.csv", "trajectory.jsonl"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    m0, m1 = (json.loads((o / "manifest.json").read_text()) for o in outs)
    for m in (m0, m1):
        del m["out"], m["transcript"]
    assert m0 == m1
    lines = (outs[0] / "t.txt").read_text().splitlines()
    assert len(lines) == 20
    manifest = json.loads((outs[0] / "manifest.json").read_text())
    assert manifest["seed"] == 7 and manifest["eta_w_resolved"] == 5e-4


def test_config_file_and_override(tmp_path, data_csv):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"input = {data_csv}\nk = 2\niters = 3\nlambda = 0.5\n")
    out = tmp_path / "cfg"
    assert main(["--config", str(cfg), "fit", "--k", "3", "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["k"] == 3 and manifest["iters"] == 3 and manifest["lam"] == 0.5


def test_contaminate_and_eval(tmp_path, data_csv, capsys):
    out = tmp_path / "cont"
    assert main(["contaminate", "--input", str(data_csv), "--seed", "1", "--out", str(out)]) == 0
    mask = load_dense_csv(out / "mask.csv")
    assert mask.sum() == 3 * 7
    assert main(["eval", "--v", str(data_csv), "--vhat", str(data_csv),
                 "--mask", str(out / "mask.csv")]) == 0
    assert "rmse: 0" in capsys.readouterr().out


def test_eval_objective(tmp_path, capsys):
    for name, x in {"c": [[1.0]], "w": [[0.0]], "h": [[0.0]]}.items():
        save_dense_csv(tmp_path / f"{name}.csv", np.array(x))
    rc = main(["eval", "--clean", str(tmp_path / "c.csv"), "--w", str(tmp_path / "w.csv"),
               "--h", str(tmp_path / "h.csv")])
    assert rc == 0 and "objective: 0.5" in capsys.readouterr().out


def test_topics(tmp_path, capsys):
    save_dense_csv(tmp_path / "w.csv", np.array([[0.1, 0.9], [0.8, 0.2], [0.3, 0.0]]))
    (tmp_path / "vocab.txt").write_text("cat\ndog\nbone\n")
    assert main(["topics", "--w", str(tmp_path / "w.csv"), "--vocab", str(tmp_path / "vocab.txt"),
                 "--k", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == ["topic 1: dog bone", "topic 2: cat dog"]


def test_exit_codes(tmp_path, data_csv):
    assert main(["fit", "--k", "3"]) == 1
    assert main(["nonsense"]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("1,-2\n")
    assert main(["fit", "--input", str(bad), "--k", "1", "--out", str(tmp_path / "o")]) == 2
    assert main(["fit", "--input", str(data_csv), "--k", "2", "--eta-h", "1e200",
                 "--eta-w", "1e200", "--iters", "50", "--tol", "0", "--out", str(tmp_path / "o")]) == 3
