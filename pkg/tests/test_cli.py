import json

import numpy as np
import pytest

import softmod as sm
from softmod import cli


def synth_files(tmp_path, prefix="toy", blocks="30,30,30", seed=5):
    rc = cli.run(["synth", "--blocks", blocks, "--p-in", "0.4",
                  "--p-out", "0.02", "--feature-dim", "12",
                  "--seed", str(seed),
                  "--out-prefix", str(tmp_path / prefix)])
    assert rc == 0
    base = tmp_path / prefix
    return f"{base}.edges", f"{base}.features", f"{base}.labels"


def detect_args(edges, features, labels, out, **extra):
    args = ["detect", "--edges", edges, "--features", features,
            "--labels", labels, "--iters", "20", "--eval-interval", "10",
            "--dim", "8", "--seed", "3", "--out", str(out)]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    return args


def test_defaults_match_contract():
    parser = cli.build_parser()
    args = parser.parse_args(["detect", "--edges", "e", "--features", "f",
                              "--out", "o"])
    assert args.delta == 30.0
    assert args.alpha == 0.001
    assert args.lr == 0.001
    assert args.weight_decay == 0.005
    assert args.iters == 300
    assert args.dim == 512
    assert args.eval_interval == 10
    assert args.threshold_coef == 0.5
    assert args.activation == "relu"
    assert args.sim == "cosine"
    assert args.sign == "plus"


def test_usage_errors_exit_1(capsys):
    assert cli.run([]) == 1
    assert cli.run(["frobnicate"]) == 1
    assert cli.run(["detect"]) == 1
    assert cli.run(["detect", "--edges", "e", "--features", "f",
                    "--out", "o", "--no-such-flag"]) == 1
    assert cli.run(["synth", "--blocks", "10,10", "--p-in", "0.5",
                    "--p-out", "0.9", "--out-prefix", "x"]) == 2
    capsys.readouterr()


def test_help_exits_0(capsys):
    assert cli.run(["--help"]) == 0
    assert cli.run(["detect", "--help"]) == 0
    capsys.readouterr()


def test_missing_file_exits_2(tmp_path, capsys):
    rc = cli.run(["detect", "--edges", str(tmp_path / "none.edges"),
                  "--features", str(tmp_path / "none.features"),
                  "--out", str(tmp_path / "r.json")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_malformed_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("0 1\nbogus line here\n")
    feats = tmp_path / "f.features"
    feats.write_text("2 1\n1\n1\n")
    rc = cli.run(["detect", "--edges", str(bad), "--features", str(feats),
                  "--out", str(tmp_path / "r.json")])
    assert rc == 2
    capsys.readouterr()


def test_filter_wipeout_exits_3(tmp_path, capsys):
    # nine 10-cliques plus one isolated node: every community falls below
    # the size threshold and pre-detection fails
    edges = []
    for b in range(9):
        base = b * 10
        edges += [(base + i, base + j) for i in range(10) for j in range(i)]
    g = sm.build_graph(edges, np.ones((91, 1)))
    sm.write_edges(tmp_path / "w.edges", g)
    sm.write_features(tmp_path / "w.features", g.features)
    rc = cli.run(["detect", "--edges", str(tmp_path / "w.edges"),
                  "--features", str(tmp_path / "w.features"),
                  "--iters", "5", "--eval-interval", "5", "--dim", "4",
                  "--out", str(tmp_path / "r.json")])
    assert rc == 3
    assert "numerical" in capsys.readouterr().err


def test_detect_happy_path(tmp_path, capsys):
    e, f, l = synth_files(tmp_path)
    out = tmp_path / "r.json"
    rc = cli.run(detect_args(e, f, l, out, partition_out=tmp_path / "p.txt"))
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["final"]["q"] > 0.3
    assert doc["final"]["nmi"] is not None
    pred = sm.read_labels(tmp_path / "p.txt")
    assert pred.size == 90
    assert "wrote" in capsys.readouterr().out


def test_detect_deterministic_modulo_timing(tmp_path, capsys):
    e, f, l = synth_files(tmp_path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.run(detect_args(e, f, l, a)) == 0
    assert cli.run(detect_args(e, f, l, b)) == 0
    docs = []
    for path in (a, b):
        doc = json.loads(path.read_text())
        doc["timing"] = None
        for r in doc["records"]:
            r["wall_s"] = None
        docs.append(doc)
    assert docs[0] == docs[1]
    capsys.readouterr()


def test_louvain_subcommand(tmp_path, capsys, karate):
    sm.write_edges(tmp_path / "k.edges", karate)
    out = tmp_path / "part.txt"
    rc = cli.run(["louvain", "--edges", str(tmp_path / "k.edges"),
                  "--seed", "0", "--out", str(out)])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "q=" in printed
    pred = sm.read_labels(out)
    assert pred.size == karate.n
    q = float(printed.split("q=")[1].split()[0])
    assert q >= 0.40


def test_eval_self_comparison(tmp_path, capsys):
    sm.write_labels(tmp_path / "p.txt", [0, 1, 1, 2, 2, 2])
    rc = cli.run(["eval", "--pred", str(tmp_path / "p.txt"),
                  "--truth", str(tmp_path / "p.txt")])
    assert rc == 0
    out = capsys.readouterr().out
    for key in ("nmi", "acc", "f1", "ari"):
        assert f"{key}=1.000000" in out


def test_eval_with_embedding_reports_dbi(tmp_path, capsys):
    sm.write_labels(tmp_path / "p.txt", [0, 0, 1, 1])
    sm.write_labels(tmp_path / "t.txt", [0, 0, 1, 1])
    H = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
    sm.write_features(tmp_path / "H.txt", H)
    rc = cli.run(["eval", "--pred", str(tmp_path / "p.txt"),
                  "--truth", str(tmp_path / "t.txt"),
                  "--embedding", str(tmp_path / "H.txt")])
    assert rc == 0
    assert "dbi=0.100000" in capsys.readouterr().out


def test_sweep_writes_one_file_per_value(tmp_path, capsys):
    e, f, l = synth_files(tmp_path)
    rc = cli.run(["sweep", "--edges", e, "--features", f, "--labels", l,
                  "--alpha", "0.1,0.001", "--iters", "10",
                  "--eval-interval", "10", "--dim", "8", "--seed", "1",
                  "--out-prefix", str(tmp_path / "sw")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "best alpha" in out
    for tag in ("0.1", "0.001"):
        doc = json.loads((tmp_path / f"sw_alpha{tag}.json").read_text())
        assert doc["config"]["alpha"] == float(tag)


def test_sweep_rejects_two_axes(tmp_path, capsys):
    e, f, l = synth_files(tmp_path)
    rc = cli.run(["sweep", "--edges", e, "--features", f,
                  "--alpha", "0.1,0.001", "--delta", "10,30",
                  "--out-prefix", str(tmp_path / "sw")])
    assert rc == 1
    capsys.readouterr()
