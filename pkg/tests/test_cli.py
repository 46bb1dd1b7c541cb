import json

from conflict_stream.cli import main


def test_gen_verify_run(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert main(["gen", "--construction", "planted", "--n", "200", "--avg-degree", "6",
                 "--colors", "3", "--t", "80", "--seed", "2", "--out", str(g)]) == 0
    meta = json.loads(capsys.readouterr().out)
    assert meta["true_monochromatic"] == 80
    assert json.loads(g.with_suffix(".json").read_text())["m"] == 600

    assert main(["verify", str(g)]) == 0
    assert json.loads(capsys.readouterr().out)["true_monochromatic"] == 80
    assert main(["verify", str(g), "--expect", "81"]) == 1
    capsys.readouterr()

    out = tmp_path / "r.csv"
    assert main(["run", "--graph", str(g), "--model", "va", "--t", "80", "--trials", "3",
                 "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["success_rate"] == 1.0
    assert len(out.read_text().splitlines()) == 4


def test_index_gen(capsys):
    assert main(["gen", "--construction", "index-sep", "--x-bits", "0110", "--j", "1",
                 "--k", "3", "--variant", "va"]) == 0
    assert json.loads(capsys.readouterr().out)["true_monochromatic"] == 9


def test_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "instance": {"construction": "planted", "n": 200, "avg_degree": 6, "color_count": 3,
                     "target_monochromatic": 80, "seed": 2},
        "model": "vadeg", "T": 80, "trials": 2, "scale": 0.05,
    }))
    assert main(["run", "--config", str(cfg), "--trials", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["config"]["trials"] == 4


def test_exit_codes(tmp_path, capsys):
    inline = json.dumps({"construction": "planted", "n": 100, "avg_degree": 4,
                         "color_count": 3, "target_monochromatic": 20, "seed": 0})
    assert main(["run", "--gen-inline", inline, "--model", "va", "--t", "21"]) == 3
    assert main(["run", "--gen-inline", inline, "--model", "va",
                 "--estimator", "varand_estimate"]) == 2
    assert main(["run", "--gen-inline", "{bad", "--model", "va"]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["gen", "--construction", "cliques", "--matrix", "[[1, 0]]", "--t", "5"]) == 2


def test_sweep(tmp_path, capsys):
    assert main(["sweep", "--model", "vadeg", "--n", "200", "300", "--t", "100",
                 "--scale", "0.05", "--trials", "2", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(rows) == 3 and rows[0].startswith("n,T,epsilon")
    assert (tmp_path / "n200_T100_eps0.3.csv").exists()
