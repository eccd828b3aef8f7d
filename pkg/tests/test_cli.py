import csv
import filecmp
import json
import math

import numpy as np
import pytest

from gspi.cli import main
from gspi.experiments import ExperimentConfig
from gspi.graph import complete_graph, cycle_graph, derive_q2, path_graph, write_edge_list


def tree_files(root):
    return sorted(p.relative_to(root) for p in root.rglob("*") if p.is_file())


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_generate_default_cell(tmp_path, capsys):
    out = tmp_path / "data"
    assert main(["generate", "--n", "200", "--factors", "1.5", "--out", str(out)]) == 0
    files = [p for p in tree_files(out) if p.suffix == ".txt"]
    assert len(files) == 200
    manifest = json.loads((out / "manifest.json").read_text())
    cell, = manifest["cells"]
    assert cell["p1"] == pytest.approx(0.2)
    assert cell["p2"] == pytest.approx(0.3)
    assert cell["q2"] == pytest.approx(derive_q2(200, 0.2, 0.3), abs=1e-15)
    assert len(cell["files"]) == 200
    assert len({tuple(f["seed"]) for f in cell["files"]}) == 200
    assert json.loads(capsys.readouterr().out)["cells"] == 1


def test_generate_is_byte_identical(tmp_path):
    args = ["generate", "--n", "60,80", "--factors", "1.2,1.4", "--graphs-per-class", "5", "--seed", "3"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--jobs", "3"]) == 0
    assert tree_files(a) == tree_files(b)
    for rel in tree_files(a):
        assert filecmp.cmp(a / rel, b / rel, shallow=False)


def test_generate_rejects_bad_factor_without_writing(tmp_path, capsys):
    out = tmp_path / "data"
    # factor 2.5 at n=200 pushes q2 below zero
    assert main(["generate", "--n", "200", "--factors", "1.2,2.5", "--out", str(out)]) == 1
    assert not out.exists()
    assert "q2" in capsys.readouterr().err


def test_features_json_and_gram(tmp_path, capsys):
    paths = []
    for name, g in (("p3", path_graph(3)), ("k4", complete_graph(4)), ("c4", cycle_graph(4))):
        paths.append(tmp_path / f"{name}.txt")
        write_edge_list(g, paths[-1])
    gram_path = tmp_path / "gram.csv"
    assert main(["features", *map(str, paths), "--type", "spi", "--gram", str(gram_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert json.loads(lines[0]) == {"type": "spi", "binning": 1, "entries": [[1, 2], [2, 1]]}
    rows = read_rows(gram_path)
    assert len(rows) == 6
    assert float(rows[1]["value"]) == pytest.approx(12 / (math.sqrt(5) * 6), abs=1e-9)

    out = tmp_path / "vecs"
    assert main(["features", str(paths[2]), "--out", str(out)]) == 0
    assert json.loads((out / "c4.gspi.json").read_text())["entries"] == [[1, 1, 4], [2, 2, 2]]


def test_features_does_not_touch_inputs(tmp_path):
    path = tmp_path / "c.txt"
    write_edge_list(cycle_graph(5), path)
    before = path.read_bytes()
    assert main(["features", str(path)]) == 0
    assert path.read_bytes() == before


def test_features_missing_file_is_runtime_error(tmp_path):
    assert main(["features", str(tmp_path / "missing.txt")]) == 2


def test_reproduce_table1_single_n(tmp_path, capsys):
    out = tmp_path / "res"
    args = ["reproduce-table1", "--n", "60", "--c0", "10", "--graphs-per-class", "10", "--folds", "2",
            "--iterations", "200", "--out", str(out)]
    assert main(args) == 0
    printed = capsys.readouterr().out.splitlines()
    rows = read_rows(out / "table1.csv")
    assert len(rows) == 8 == len(printed)
    assert list(rows[0]) == ["kernel", "n", "p2_factor", "accuracy"]
    assert {(r["kernel"], r["p2_factor"]) for r in rows} == \
        {(k, f) for k in ("SPI", "GSPI") for f in ("1.2", "1.3", "1.4", "1.5")}
    assert all(0.0 <= float(r["accuracy"]) <= 1.0 for r in rows)
    first = (out / "table1.json").read_bytes()
    assert main(args) == 0
    assert (out / "table1.json").read_bytes() == first


def test_reproduce_table1_from_generated_data(tmp_path):
    data, res_a, res_b = tmp_path / "data", tmp_path / "a", tmp_path / "b"
    common = ["--n", "60", "--c0", "10", "--factors", "1.5", "--graphs-per-class", "10", "--seed", "2"]
    assert main(["generate", *common, "--out", str(data)]) == 0
    learn = ["--folds", "2", "--iterations", "200"]
    assert main(["reproduce-table1", *common, *learn, "--data", str(data), "--out", str(res_a)]) == 0
    assert main(["reproduce-table1", *common, *learn, "--out", str(res_b)]) == 0
    # loading from disk and generating on the fly give the same graphs
    assert (res_a / "table1.csv").read_text() == (res_b / "table1.csv").read_text()


def test_reproduce_table1_missing_cell_does_not_abort(tmp_path, capsys):
    data = tmp_path / "data"
    assert main(["generate", "--n", "60", "--c0", "10", "--factors", "1.5", "--graphs-per-class", "10",
                 "--out", str(data)]) == 0
    code = main(["reproduce-table1", "--n", "60", "--c0", "10", "--factors", "1.2,1.5", "--graphs-per-class", "10",
                 "--folds", "2", "--iterations", "100", "--data", str(data), "--out", str(tmp_path / "r")])
    assert code == 2
    rows = read_rows(tmp_path / "r" / "table1.csv")
    assert len(rows) == 4
    assert [r["accuracy"] == "nan" for r in rows] == [True, True, False, False]


@pytest.fixture(scope="module")
def figures(tmp_path_factory):
    out = tmp_path_factory.mktemp("figs")
    assert main(["emit-figures", "--out", str(out), "--fig3-graphs", "100"]) == 0
    return out


@pytest.mark.slow
def test_fig1_classes_nearly_identical(figures):
    fig1 = read_rows(figures / "fig1.csv")
    one = np.array([float(r["one_cluster"]) for r in fig1])
    two = np.array([float(r["two_cluster"]) for r in fig1])
    assert np.max(np.abs(one - two)) < 0.1 * max(one.max(), two.max())
    assert one[0] == pytest.approx(40, abs=1)


@pytest.mark.slow
def test_fig2_files(figures):
    fig2 = read_rows(figures / "fig2.csv")
    assert list(fig2[0]) == ["x", "one_cluster", "two_cluster"]
    for name in ("fig2_one_cluster_prediction.csv", "fig2_two_cluster_prediction.csv"):
        assert len(read_rows(figures / name)) == len(fig2)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="at n=600, factor 1.3 the per-source d=2 histograms of the two "
                                       "classes differ by total variation ~0.004; see decisions ledger")
def test_fig2_classes_distinguishable(figures):
    fig2 = read_rows(figures / "fig2.csv")
    a = np.array([float(r["one_cluster"]) for r in fig2])
    b = np.array([float(r["two_cluster"]) for r in fig2])
    assert 0.5 * np.abs(a / a.sum() - b / b.sum()).sum() > 0.05


@pytest.mark.slow
def test_fig3_columns_aligned(figures):
    fig3 = read_rows(figures / "fig3.csv")
    assert list(fig3[0]) == ["x", "empirical", "predicted"]
    assert [int(r["x"]) for r in fig3] == list(range(1, len(fig3) + 1))
    assert len(fig3) >= 20
    emp = read_rows(figures / "fig3_empirical.csv")
    assert [r["value"] for r in emp] == [r["empirical"] for r in fig3]


def test_emit_figures_unknown_name(tmp_path):
    assert main(["emit-figures", "--which", "fig9", "--out", str(tmp_path)]) == 1


def test_theory_check_small(tmp_path, capsys):
    code = main(["theory-check", "--out", str(tmp_path), "--theory-graphs", "4", "--peak-graphs", "4",
                 "--fuzz-cases", "500", "--factors", "1.3"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report == json.loads((tmp_path / "theory_check.json").read_text())
    assert report["null_cell"]["unimodal"] and report["null_cell"]["pass"]
    assert report["lemma1"]["cases"] == 500 and report["lemma1"]["violations"] == 0
    assert report["double_peak"]["mixture_bimodal"]
    t1, = report["theorem1"]["results"]
    assert t1["d"] == 2 and t1["bounds"][0] == pytest.approx(1558.974358974359)
    assert isinstance(report["pass"], bool)


def test_config_file_and_flag_precedence(tmp_path):
    from gspi.cli import build_parser, config_from_args
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"n": [300], "factors": [1.3], "graphs_per_class": 7, "seed": 5}))
    args = build_parser().parse_args(["generate", "--config", str(cfg_path), "--seed", "9"])
    cfg = config_from_args(args)
    assert cfg.n_list == [300] and cfg.p2_factors == [1.3] and cfg.graphs_per_class == 7
    assert cfg.seed == 9
    assert ExperimentConfig().c0 == 40


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["generate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    bad.write_text(json.dumps({"unknown_field": 1}))
    assert main(["generate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1


def test_invalid_counts_rejected(tmp_path):
    assert main(["generate", "--graphs-per-class", "0", "--out", str(tmp_path / "o")]) == 1
    assert main(["generate", "--factors", "0.9", "--out", str(tmp_path / "o")]) == 1
